//! Differentiation in the sharp topology via scale-element difference
//! quotients, partial derivatives, gradients and Jacobians, Taylor
//! remainder checks, and Riemann integration with generalized
//! endpoints.
//!
//! The derivative of `f` at `x0` is the sharp limit of the quotients
//! `q_n = (f(x0 + alpha(n)) - f(x0)) / alpha(n)`. The engine accepts
//! once three consecutive quotients are pairwise within `e^(-tau)`,
//! re-runs on the half-shifted probe sequence `alpha(n + 1/2)` to pin
//! uniqueness, and returns the probe-stable part of the window: the
//! terms shared bit-exactly by all six window quotients. Probe-induced
//! terms depend on `n` and are eliminated; for polynomial data the
//! result is exact.

use crate::error::{Error, Result};
use crate::exp::{Exp, Trunc};
use crate::expr::{Expr, GenFunc};
use crate::gennum::{GenNum, Valuation, DEFAULT_TRUNC};

/// Absolute tolerance of the per-sample adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// Probe depth, acceptance threshold and working truncation for the
/// difference-quotient limit.
#[derive(Clone, Debug)]
pub struct DerivOptions {
    pub depth: u32,
    pub tau: f64,
    pub work_trunc: Trunc,
}

impl Default for DerivOptions {
    fn default() -> Self {
        DerivOptions {
            depth: 12,
            tau: 9.0,
            work_trunc: Trunc::finite(DEFAULT_TRUNC),
        }
    }
}

/// Outcome of a sharp-derivative computation.
#[derive(Clone, Debug)]
pub struct DerivativeResult {
    /// The probe-stable limit of the difference quotients.
    pub value: GenNum,
    /// Valuations of `f(x0+h) - f(x0) - value*h` at the window probes;
    /// each strictly exceeds the valuation of its probe.
    pub remainder_valuations: Vec<Valuation>,
    /// Index of the first accepted stability window.
    pub depth_used: u32,
}

/// An `m x n` matrix of partial derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianMatrix {
    pub entries: Vec<Vec<GenNum>>,
}

impl JacobianMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map(Vec::len).unwrap_or(0)
    }
}

/// Most probe-dust orders ever eliminated by extrapolation.
const MAX_ELIMINATION_LEVELS: usize = 3;

/// Fewest extrapolation levels whose residual bound (the sum of the
/// node exponents used) clears the working truncation. Extra levels
/// only add roundoff, so take the cheapest sufficient one.
fn elimination_levels(exps: &[Exp], work: &Trunc) -> usize {
    let target = match work {
        Trunc::Finite(t) => t.clone(),
        Trunc::Infinite => return MAX_ELIMINATION_LEVELS.min(exps.len() - 1),
    };
    for levels in 1..=MAX_ELIMINATION_LEVELS.min(exps.len() - 1) {
        let mut sum = Exp::zero();
        for e in &exps[exps.len() - (levels + 1)..] {
            sum = &sum + e;
        }
        if sum > target {
            return levels;
        }
    }
    MAX_ELIMINATION_LEVELS.min(exps.len() - 1)
}

/// Engine noise floor relative to the largest coefficient of the
/// compared data: accumulated roundoff across a truncation's worth of
/// series arithmetic. Convergence and remainder checks must not
/// resolve finer than this.
const ENGINE_NOISE_REL: f64 = 1e-12;

/// Valuation lower bound ignoring coefficients below the noise floor
/// for the given coefficient scale.
fn robust_valuation(x: &GenNum, scale: f64) -> Trunc {
    let floor = ENGINE_NOISE_REL * scale;
    x.terms()
        .iter()
        .find(|(_, c)| c.norm() > floor)
        .map(|(e, _)| Trunc::Finite(e.clone()))
        .unwrap_or_else(|| x.trunc().clone())
}

fn coef_scale(x: &GenNum) -> f64 {
    x.terms()
        .iter()
        .map(|(_, c)| c.norm())
        .fold(0.0_f64, f64::max)
}

/// Extrapolate the difference quotients to scale zero. Evaluations in
/// this grammar expand in the probe as `q(h) = L + F_1 h + F_2 h^2 +
/// ...` with probe-independent coefficients, so Neville extrapolation
/// through the nodes `t_i = alpha(e_i)` cancels the probe dust
/// algebraically; the leftover carries valuation at least the sum of
/// the node exponents, which caps the result truncation.
fn extrapolate_to_zero(
    quotients: &[GenNum],
    exps: &[Exp],
    levels: usize,
    t_inv: &Trunc,
) -> Result<GenNum> {
    let take = (levels + 1).min(quotients.len());
    let start = quotients.len() - take;
    let mut r: Vec<GenNum> = quotients[start..].to_vec();
    let exps = &exps[start..];

    let mut residual_bound = Exp::zero();
    for e in exps {
        residual_bound = &residual_bound + e;
    }

    for j in 1..take {
        let mut next = Vec::with_capacity(r.len() - 1);
        for i in 0..r.len() - 1 {
            let t_lo = GenNum::alpha(exps[i].clone())?;
            let t_hi = GenNum::alpha(exps[i + j].clone())?;
            let c = t_hi.checked_mul(&(&t_lo - &t_hi).invert(t_inv.clone())?)?;
            let diff = &r[i + 1] - &r[i];
            next.push(r[i + 1].checked_add(&diff.checked_mul(&c)?)?);
        }
        r = next;
    }
    let value = r.pop().expect("at least one quotient");
    Ok(value.truncate_at(Trunc::Finite(residual_bound)))
}

struct ProbeFamily {
    quotients: Vec<GenNum>,
    probe_values: Vec<GenNum>,
    probe_exps: Vec<Exp>,
    window_end: usize,
}

fn run_family<F>(
    f: &F,
    x0: &GenNum,
    f0: &GenNum,
    shift: Exp,
    opts: &DerivOptions,
) -> Result<ProbeFamily>
where
    F: Fn(&GenNum, &Trunc) -> Result<GenNum>,
{
    let mut quotients = Vec::with_capacity(opts.depth as usize);
    let mut probe_values = Vec::with_capacity(opts.depth as usize);
    let mut probe_exps = Vec::with_capacity(opts.depth as usize);
    for n in 1..=opts.depth {
        let e = &Exp::from_int(i64::from(n)) + &shift;
        let h = GenNum::alpha(e.clone())?;
        // Evaluate deep enough that dividing by alpha(n) still leaves
        // the working truncation of valid information.
        let t_n = opts
            .work_trunc
            .shift(&Exp::from_int(i64::from(n) + 1))
            .shift(&shift);
        let fx = f(&(x0 + &h), &t_n).map_err(|err| Error::ProbeFailure {
            detail: format!("probe alpha({e}): {err}"),
        })?;
        let q = (&fx - f0).checked_mul(&GenNum::alpha(-&e)?)?;
        quotients.push(q);
        probe_values.push(fx);
        probe_exps.push(e);
    }
    // First window of three consecutive quotients that are pairwise
    // within e^(-tau); by the ultrametric, consecutive bounds suffice.
    // Distances are measured above the engine noise floor.
    let mut window_end = None;
    for i in 2..quotients.len() {
        let scale = coef_scale(&quotients[i])
            .max(coef_scale(&quotients[i - 1]))
            .max(coef_scale(&quotients[i - 2]));
        let d1 = robust_valuation(&(&quotients[i - 2] - &quotients[i - 1]), scale).to_f64();
        let d2 = robust_valuation(&(&quotients[i - 1] - &quotients[i]), scale).to_f64();
        if d1 >= opts.tau && d2 >= opts.tau {
            window_end = Some(i);
            break;
        }
    }
    let window_end = window_end.ok_or(Error::NonConvergent { depth: opts.depth })?;
    Ok(ProbeFamily {
        quotients,
        probe_values,
        probe_exps,
        window_end,
    })
}

/// Sharp derivative of a closure at `x0`. The closure receives the
/// truncation to evaluate at: probes run at an extended truncation so
/// that the division by `alpha(n)` still resolves the limit to the
/// working truncation.
pub fn sharp_derivative_fn<F>(f: F, x0: &GenNum, opts: &DerivOptions) -> Result<DerivativeResult>
where
    F: Fn(&GenNum, &Trunc) -> Result<GenNum>,
{
    let t_ext = opts
        .work_trunc
        .shift(&Exp::from_int(i64::from(opts.depth) + 2));
    let f0 = f(x0, &t_ext).map_err(|err| Error::ProbeFailure {
        detail: format!("base point: {err}"),
    })?;
    let fam_a = run_family(&f, x0, &f0, Exp::zero(), opts)?;
    let fam_b = run_family(&f, x0, &f0, Exp::new(1, 2), opts)?;

    // Uniqueness: the two probe sequences must agree within e^(-tau).
    let qa = &fam_a.quotients[fam_a.window_end];
    let qb = &fam_b.quotients[fam_b.window_end];
    let scale = coef_scale(qa).max(coef_scale(qb));
    if robust_valuation(&(qa - qb), scale).to_f64() < opts.tau {
        return Err(Error::NonConvergent { depth: opts.depth });
    }

    // Extrapolate to scale zero from a probe family whose exponents lie
    // off the data lattice (sevenths never meet the small-denominator
    // exponents of the operands below the truncation), so probe dust
    // never shares an exponent with a signal term.
    let fam_c = run_family(&f, x0, &f0, Exp::new(1, 7), opts)?;
    let t_inv = opts
        .work_trunc
        .shift(&Exp::from_int(2 * i64::from(opts.depth) + 4));
    let levels = elimination_levels(&fam_c.probe_exps, &opts.work_trunc);
    let value = extrapolate_to_zero(&fam_c.quotients, &fam_c.probe_exps, levels, &t_inv)?;

    // Remainder contract at each window probe:
    // valuation(f(x0+h) - f(x0) - value*h) > valuation(h),
    // measured above the engine noise floor.
    let mut remainder_valuations = Vec::new();
    for fam in [&fam_a, &fam_b] {
        for i in (fam.window_end - 2)..=fam.window_end {
            let e = &fam.probe_exps[i];
            let h = GenNum::alpha(e.clone())?;
            let remainder = &(&fam.probe_values[i] - &f0) - &value.checked_mul(&h)?;
            let scale = coef_scale(&fam.probe_values[i]).max(coef_scale(&f0));
            let v = robust_valuation(&remainder, scale);
            if v <= Trunc::Finite(e.clone()) {
                return Err(Error::NonConvergent { depth: opts.depth });
            }
            remainder_valuations.push(remainder.valuation());
        }
    }

    let depth_used = (fam_a.window_end.max(fam_b.window_end) + 1) as u32;
    Ok(DerivativeResult {
        value,
        remainder_valuations,
        depth_used,
    })
}

/// Sharp derivative of a one-variable function.
pub fn derivative(f: &GenFunc, x0: &GenNum, opts: &DerivOptions) -> Result<DerivativeResult> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: f.arity(),
        });
    }
    sharp_derivative_fn(|x, t| f.eval(std::slice::from_ref(x), t), x0, opts)
}

/// Partial derivative with respect to coordinate `i`, probing that
/// coordinate only.
pub fn partial(
    f: &GenFunc,
    x0: &[GenNum],
    i: usize,
    opts: &DerivOptions,
) -> Result<DerivativeResult> {
    if i >= f.arity() || x0.len() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            got: x0.len(),
        });
    }
    sharp_derivative_fn(
        |v, t| {
            let mut args = x0.to_vec();
            args[i] = v.clone();
            f.eval(&args, t)
        },
        &x0[i],
        opts,
    )
}

pub fn gradient(f: &GenFunc, x0: &[GenNum], opts: &DerivOptions) -> Result<Vec<GenNum>> {
    (0..f.arity())
        .map(|i| partial(f, x0, i, opts).map(|r| r.value))
        .collect()
}

pub fn jacobian(fs: &[GenFunc], x0: &[GenNum], opts: &DerivOptions) -> Result<JacobianMatrix> {
    let entries = fs
        .iter()
        .map(|f| gradient(f, x0, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(JacobianMatrix { entries })
}

/// Valuation of the order-`m` Taylor remainder
/// `f(x) - sum_{j<=m} f^(j)(y) (x-y)^j / j!`, with the derivatives
/// taken symbolically. Exceeds `m * valuation(x - y)` whenever that
/// valuation is positive.
pub fn taylor_check(
    f: &GenFunc,
    x: &GenNum,
    y: &GenNum,
    m: u32,
    opts: &DerivOptions,
) -> Result<Valuation> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: f.arity(),
        });
    }
    // Derivatives up to order m+1 must exist and evaluate at y.
    let mut tree = f.clone();
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    for _ in 0..=m {
        coeffs.push(tree.eval(std::slice::from_ref(y), &opts.work_trunc)?);
        tree = tree.diff(0)?;
    }
    tree.eval(std::slice::from_ref(y), &opts.work_trunc)?;

    let d = x - y;
    let mut sum = GenNum::zero();
    let mut dpow = GenNum::one();
    let mut fact = 1.0_f64;
    for (j, c) in coeffs.iter().enumerate() {
        if j > 0 {
            fact *= j as f64;
            dpow = dpow.checked_mul(&d)?;
        }
        sum = sum.checked_add(&c.checked_mul(&dpow)?.scale_real(1.0 / fact))?;
    }
    let fx = f.eval(std::slice::from_ref(x), &opts.work_trunc)?;
    Ok((&fx - &sum).valuation())
}

/// Extract dense polynomial coefficients in the single variable of a
/// one-variable function; constant subtrees may use any node.
pub fn poly_coeffs(f: &GenFunc, work: &Trunc) -> Result<Vec<GenNum>> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: f.arity(),
        });
    }
    let mut coeffs = poly_of(f.body(), work)?;
    while coeffs.len() > 1 && coeffs.last().map(GenNum::is_exact_zero) == Some(true) {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn uses_var(e: &Expr) -> bool {
    match e {
        Expr::Var(_) => true,
        Expr::Const(_) => false,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => uses_var(a) || uses_var(b),
        Expr::Div { num, den, .. } => uses_var(num) || uses_var(den),
        Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) | Expr::BetaNormSq(a) => uses_var(a),
        Expr::Integral { lower, upper, .. } => uses_var(lower) || uses_var(upper),
    }
}

fn poly_add(a: Vec<GenNum>, b: Vec<GenNum>) -> Result<Vec<GenNum>> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    for i in 0..a.len().max(b.len()) {
        let zero = GenNum::zero();
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        out.push(x.checked_add(y)?);
    }
    Ok(out)
}

fn poly_mul(a: &[GenNum], b: &[GenNum]) -> Result<Vec<GenNum>> {
    let mut out = vec![GenNum::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(&x.checked_mul(y)?)?;
        }
    }
    Ok(out)
}

fn poly_of(e: &Expr, work: &Trunc) -> Result<Vec<GenNum>> {
    if !uses_var(e) {
        // Constant subtree: evaluate it outright.
        let g = GenFunc::new(1, e.clone());
        return Ok(vec![g.eval(&[GenNum::zero()], work)?]);
    }
    match e {
        Expr::Var(0) => Ok(vec![GenNum::zero(), GenNum::one()]),
        Expr::Var(_) => Err(Error::NonPolynomialIntegrand),
        Expr::Const(c) => Ok(vec![c.clone()]),
        Expr::Add(a, b) => poly_add(poly_of(a, work)?, poly_of(b, work)?),
        Expr::Sub(a, b) => poly_add(
            poly_of(a, work)?,
            poly_of(b, work)?.into_iter().map(|c| c.negate()).collect(),
        ),
        Expr::Mul(a, b) => poly_mul(&poly_of(a, work)?, &poly_of(b, work)?),
        Expr::Neg(a) => Ok(poly_of(a, work)?.into_iter().map(|c| c.negate()).collect()),
        Expr::Pow(a, k) => {
            if *k < 0 {
                return Err(Error::NonPolynomialIntegrand);
            }
            let base = poly_of(a, work)?;
            let mut acc = vec![GenNum::one()];
            for _ in 0..*k {
                acc = poly_mul(&acc, &base)?;
            }
            Ok(acc)
        }
        Expr::Div { num, den, trunc } => {
            let d = poly_of(den, work)?;
            if d.len() != 1 {
                return Err(Error::NonPolynomialIntegrand);
            }
            let t = trunc.clone().unwrap_or_else(|| work.clone());
            let inv = d[0].invert(t)?;
            poly_of(num, work)?
                .into_iter()
                .map(|c| c.checked_mul(&inv))
                .collect()
        }
        Expr::Call(..) | Expr::BetaNormSq(_) | Expr::Integral { .. } => {
            Err(Error::NonPolynomialIntegrand)
        }
    }
}

/// Riemann integral of a polynomial integrand between generalized
/// endpoints: the antiderivative is formed coefficient-wise and
/// evaluated at the endpoints.
pub fn integrate(f: &GenFunc, a: &GenNum, b: &GenNum, work: &Trunc) -> Result<GenNum> {
    let coeffs = poly_coeffs(f, work)?;
    a.shadow()?;
    b.shadow()?;
    // Antiderivative: c_k t^k -> c_k t^(k+1) / (k+1).
    let anti: Vec<GenNum> = std::iter::once(GenNum::zero())
        .chain(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale_real(1.0 / (k as f64 + 1.0))),
        )
        .collect();
    let eval_at = |x: &GenNum| -> Result<GenNum> {
        let mut acc = GenNum::zero();
        for c in anti.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(c)?;
        }
        Ok(acc)
    };
    Ok(&eval_at(b)? - &eval_at(a)?)
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !flm.is_finite() || !frm.is_finite() {
        return Err(Error::QuadratureFailure);
    }
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure);
    }
    let lv = adaptive_step(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)?;
    let rv = adaptive_step(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)?;
    Ok(lv + rv)
}

/// Adaptive Simpson quadrature with an absolute tolerance.
pub fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    if !fa.is_finite() || !fm.is_finite() || !fb.is_finite() {
        return Err(Error::QuadratureFailure);
    }
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_step(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Per-sample Riemann integration on the net backend: integrate
/// `t -> f(eps, t)` between the sampled endpoints for each grid point.
pub fn integrate_net(
    f: impl Fn(f64, f64) -> f64,
    a: &crate::net::Net,
    b: &crate::net::Net,
) -> Result<crate::net::Net> {
    if a.grid() != b.grid() {
        return Err(Error::DimensionMismatch {
            left: a.values().len(),
            right: b.values().len(),
        });
    }
    let mut values = Vec::with_capacity(a.values().len());
    for ((eps, lo), hi) in a.grid().points().zip(a.values()).zip(b.values()) {
        let v = quad(|t| f(eps, t), lo.re, hi.re, QUAD_TOL)?;
        values.push(crate::gennum::Coef::new(v, 0.0));
    }
    crate::net::Net::new(a.grid().clone(), values)
}

/// Valuation of `derivative(F)(x) - f(x)` for `F(x) = integral of f
/// from a to x`; at least the working truncation for polynomial data.
pub fn ftc_check(f: &GenFunc, a: &GenNum, x: &GenNum, opts: &DerivOptions) -> Result<Valuation> {
    let deriv = sharp_derivative_fn(|v, t| integrate(f, a, v, t), x, opts)?;
    let fx = f.eval(std::slice::from_ref(x), &opts.work_trunc)?;
    Ok((&deriv.value - &fx).valuation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Builtin;
    use crate::gennum::Coef;
    use crate::net;

    fn eps() -> GenNum {
        GenNum::alpha_int(1)
    }

    fn opts() -> DerivOptions {
        DerivOptions::default()
    }

    /// The two expansions agree at least to the working truncation.
    fn assert_close(a: &GenNum, b: &GenNum) {
        let d = a - b;
        assert!(
            d.valuation().at_least(&Exp::from_int(DEFAULT_TRUNC)),
            "difference {d} between {a} and {b}"
        );
    }

    #[test]
    fn derivative_of_square_is_exact() {
        let f = GenFunc::unary(Expr::var(0).pow(2));
        let x0 = &GenNum::one() + &eps();
        let r = derivative(&f, &x0, &opts()).unwrap();
        // The extrapolated value carries the exact terms 2 + 2 eps.
        assert_eq!(r.value.terms(), x0.scale_real(2.0).terms());
        assert_close(&r.value, &x0.scale_real(2.0));
        assert!(r.depth_used <= 12);
    }

    #[test]
    fn derivative_of_beta_norm_sq_vanishes() {
        let f = GenFunc::unary(Expr::beta_norm_sq(Expr::var(0)));
        // At zero the quotients are exactly the scale elements alpha(n).
        let r = derivative(&f, &GenNum::zero(), &opts()).unwrap();
        assert_close(&r.value, &GenNum::zero());
        // At a point of known valuation the quotients collapse to zero.
        let r = derivative(&f, &GenNum::alpha_int(2), &opts()).unwrap();
        assert_close(&r.value, &GenNum::zero());
        // Yet the function is not constant.
        let w = Trunc::finite(DEFAULT_TRUNC);
        assert_ne!(
            f.eval(&[GenNum::alpha_int(1)], &w).unwrap(),
            f.eval(&[GenNum::alpha_int(2)], &w).unwrap()
        );
    }

    #[test]
    fn derivative_of_exp_at_zero() {
        let f = GenFunc::unary(Expr::call(Builtin::Exp, Expr::var(0)));
        let r = derivative(&f, &GenNum::zero(), &opts()).unwrap();
        let d = &r.value - &GenNum::one();
        // Agreement with the classical derivative to at least depth-1.
        assert!(d.valuation().at_least(&Exp::from_int(11)), "{}", r.value);
    }

    #[test]
    fn remainder_valuations_exceed_probe_valuations() {
        let f = GenFunc::unary(Expr::var(0).pow(3));
        let r = derivative(&f, &eps(), &opts()).unwrap();
        assert!(!r.remainder_valuations.is_empty());
        for v in &r.remainder_valuations {
            assert!(v.lower_bound() > Trunc::finite(9));
        }
    }

    #[test]
    fn nonconvergent_closure_is_rejected() {
        // A closure that oscillates between two values at every probe.
        let flip = std::cell::Cell::new(false);
        let f = |_: &GenNum, _: &Trunc| -> Result<GenNum> {
            flip.set(!flip.get());
            Ok(if flip.get() {
                GenNum::one()
            } else {
                GenNum::zero()
            })
        };
        assert!(matches!(
            sharp_derivative_fn(f, &GenNum::zero(), &opts()),
            Err(Error::NonConvergent { .. })
        ));
    }

    #[test]
    fn partial_examples() {
        // f = x1 * x2: d/dx1 = x2.
        let f = GenFunc::new(2, Expr::var(0).mul(Expr::var(1)));
        let a = &GenNum::one() + &eps();
        let b = GenNum::from_real(3.0);
        let r = partial(&f, &[a.clone(), b.clone()], 0, &opts()).unwrap();
        assert_close(&r.value, &b);
        let r = partial(&f, &[a.clone(), b.clone()], 1, &opts()).unwrap();
        assert_close(&r.value, &a);

        // f = exp(x1 x2) at (0, 1+eps): d/dx1 = x2 exp(x1 x2) = 1+eps.
        let g = GenFunc::new(2, Expr::call(Builtin::Exp, Expr::var(0).mul(Expr::var(1))));
        let x0 = [GenNum::zero(), &GenNum::one() + &eps()];
        let r = partial(&g, &x0, 0, &opts()).unwrap();
        let oracle = &GenNum::one() + &eps();
        assert!((&r.value - &oracle).valuation().at_least_f64(9.0));
    }

    #[test]
    fn gradient_and_jacobian() {
        let f = GenFunc::new(2, Expr::var(0).mul(Expr::var(1)));
        let a = GenNum::from_real(2.0);
        let b = eps();
        let g = gradient(&f, &[a.clone(), b.clone()], &opts()).unwrap();
        assert_close(&g[0], &b);
        assert_close(&g[1], &a);

        let fs = [
            GenFunc::new(2, Expr::var(0).add(Expr::var(1))),
            GenFunc::new(2, Expr::var(0).mul(Expr::var(1))),
        ];
        let x0 = [GenNum::one(), eps()];
        let j = jacobian(&fs, &x0, &opts()).unwrap();
        assert_eq!(j.rows(), 2);
        assert_eq!(j.cols(), 2);
        assert_close(&j.entries[0][0], &GenNum::one());
        assert_close(&j.entries[0][1], &GenNum::one());
        assert_close(&j.entries[1][0], &eps());
        assert_close(&j.entries[1][1], &GenNum::one());
    }

    #[test]
    fn taylor_check_examples() {
        let cube = GenFunc::unary(Expr::var(0).pow(3));
        let y = &GenNum::one() + &eps();
        let x = &y + &GenNum::alpha_int(1);
        // Remainder of the order-2 expansion is exactly (x-y)^3.
        let v = taylor_check(&cube, &x, &y, 2, &opts()).unwrap();
        assert_eq!(v, Valuation::Known(Exp::from_int(3)));

        let ef = GenFunc::unary(Expr::call(Builtin::Exp, Expr::var(0)));
        let y = GenNum::zero();
        let x = eps();
        let v = taylor_check(&ef, &x, &y, 3, &opts()).unwrap();
        assert!(v.at_least(&Exp::from_int(4)));

        let affine = GenFunc::unary(Expr::real(2.0).mul(Expr::var(0)).add(Expr::real(1.0)));
        let v = taylor_check(&affine, &x, &GenNum::one(), 1, &opts()).unwrap();
        assert_eq!(v, Valuation::AtLeast(Trunc::Infinite));
    }

    #[test]
    fn integrate_examples() {
        let w = Trunc::finite(DEFAULT_TRUNC);
        let one = GenFunc::unary(Expr::real(1.0));
        assert_eq!(
            integrate(&one, &GenNum::zero(), &eps(), &w).unwrap(),
            eps()
        );
        let two_t = GenFunc::unary(Expr::real(2.0).mul(Expr::var(0)));
        let b = &GenNum::one() + &eps();
        let got = integrate(&two_t, &GenNum::zero(), &b, &w).unwrap();
        assert_eq!(got, b.pow(2).unwrap());

        let sin_t = GenFunc::unary(Expr::call(Builtin::Sin, Expr::var(0)));
        assert!(matches!(
            integrate(&sin_t, &GenNum::zero(), &eps(), &w),
            Err(Error::NonPolynomialIntegrand)
        ));
    }

    #[test]
    fn integrate_additivity_is_exact() {
        let w = Trunc::finite(DEFAULT_TRUNC);
        let f = GenFunc::unary(
            Expr::var(0)
                .pow(2)
                .mul(Expr::constant(eps()))
                .add(Expr::var(0))
                .add(Expr::real(0.5)),
        );
        let a = GenNum::zero();
        let b = &GenNum::one() + &eps();
        let c = GenNum::from_real(2.0);
        let whole = integrate(&f, &a, &c, &w).unwrap();
        let split = &integrate(&f, &a, &b, &w).unwrap() + &integrate(&f, &b, &c, &w).unwrap();
        assert!((&whole - &split).valuation().lower_bound() == Trunc::Infinite);
    }

    #[test]
    fn quad_classical_values() {
        let v = quad(|t| t.sin(), 0.0, std::f64::consts::PI, QUAD_TOL).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn integrate_net_examples() {
        let g = net::Grid::default_grid();
        let zeros = net::sample_real(|_| 0.0, &g).unwrap();
        let epsn = net::sample_real(|e| e, &g).unwrap();
        let n = integrate_net(|_, _| 1.0, &zeros, &epsn).unwrap();
        for (v, e) in n.values().iter().zip(g.points()) {
            assert!((v.re - e).abs() < 1e-12);
        }
        let b = net::sample_real(|e| 1.0 + e, &g).unwrap();
        let n = integrate_net(|_, t| 2.0 * t, &zeros, &b).unwrap();
        for (v, e) in n.values().iter().zip(g.points()) {
            assert!((v.re - (1.0 + e) * (1.0 + e)).abs() < 1e-10);
        }
    }

    #[test]
    fn ftc_examples() {
        let one = GenFunc::unary(Expr::real(1.0));
        let v = ftc_check(&one, &GenNum::zero(), &eps(), &opts()).unwrap();
        assert!(v.at_least(&Exp::from_int(DEFAULT_TRUNC)));

        let two_t = GenFunc::unary(Expr::real(2.0).mul(Expr::var(0)));
        let x = &GenNum::one() + &eps();
        let v = ftc_check(&two_t, &GenNum::zero(), &x, &opts()).unwrap();
        assert!(v.at_least(&Exp::from_int(DEFAULT_TRUNC)));
    }

    #[test]
    fn integral_expression_node() {
        // eval of integrate(2t, t, 0, x1) at x1 = 1 + eps.
        let w = Trunc::finite(DEFAULT_TRUNC);
        let node = Expr::Integral {
            integrand: Box::new(GenFunc::unary(Expr::real(2.0).mul(Expr::var(0)))),
            lower: Box::new(Expr::real(0.0)),
            upper: Box::new(Expr::var(0)),
        };
        let f = GenFunc::unary(node);
        let x = &GenNum::one() + &eps();
        let got = f.eval(std::slice::from_ref(&x), &w).unwrap();
        assert_eq!(got, x.pow(2).unwrap());
    }

    #[test]
    fn poly_coeffs_with_constant_subtrees() {
        let w = Trunc::finite(DEFAULT_TRUNC);
        // exp(1) * t is polynomial in t with a transcendental constant.
        let f = GenFunc::unary(Expr::call(Builtin::Exp, Expr::real(1.0)).mul(Expr::var(0)));
        let c = poly_coeffs(&f, &w).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c[1].coef_at(&Exp::zero()).re - 1.0f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn probe_collision_with_negative_leading_coefficient() {
        // x0 = -eps^2 collides with the probe alpha(2); the engine must
        // still converge and return the exact derivative of x^2.
        let f = GenFunc::unary(Expr::var(0).pow(2));
        let x0 = eps().pow(2).unwrap().negate();
        let r = derivative(&f, &x0, &opts()).unwrap();
        assert_close(&r.value, &x0.scale_real(2.0));
    }

    #[test]
    fn derivative_result_remainders_for_builtin() {
        let f = GenFunc::unary(Expr::call(Builtin::Cos, Expr::var(0)));
        let r = derivative(&f, &eps(), &opts()).unwrap();
        // cos'(eps) = -sin(eps): leading term -eps.
        let (e, c) = r.value.leading().unwrap();
        assert_eq!(*e, Exp::from_int(1));
        assert!((c.re + 1.0).abs() < 1e-14);
    }

    #[test]
    fn quad_failure_on_singular_integrand() {
        assert!(quad(|t| 1.0 / t, 0.0, 1.0, QUAD_TOL).is_err());
    }
}
