//! Ultrametric power series: the norm-vanishing convergence criterion,
//! evaluation with a tail bound, term-wise differentiation and the
//! factorial coefficient identity, the sub-linearity radius bound,
//! Wirtinger-type holomorphy checks, and the constant-coefficient
//! solvability certificate.

use crate::calculus::{partial, DerivOptions};
use crate::error::{Error, Result};
use crate::exp::{Exp, Trunc};
use crate::expr::GenFunc;
use crate::gennum::{Coef, GenNum, Valuation};
use crate::net::{classify, Net, NetClass, DEFAULT_NEGLIGIBILITY_SLOPE};

/// Length of the coefficient prefix examined without a rule.
pub const PREFIX_N: usize = 64;

/// Length examined when a closed-form coefficient rule is available.
pub const EXTENDED_N: usize = 512;

/// Closed-form coefficient families for extended convergence checks.
#[derive(Clone, Debug)]
pub enum CoeffRule {
    /// `a_n = 1`.
    Geometric,
    /// `a_n = 1/n!`.
    ExpFamily,
    /// `a_n = alpha(n * step)`.
    AlphaPowers { step: Exp },
    /// Explicit extension table.
    Table(Vec<GenNum>),
}

impl CoeffRule {
    fn base_coefficient(&self, n: usize) -> Result<GenNum> {
        match self {
            CoeffRule::Geometric => Ok(GenNum::one()),
            CoeffRule::ExpFamily => {
                let mut c = 1.0_f64;
                for j in 1..=n {
                    c /= j as f64;
                }
                Ok(GenNum::from_real(c))
            }
            CoeffRule::AlphaPowers { step } => GenNum::alpha(step.scale_int(n as i64)),
            CoeffRule::Table(t) => Ok(t.get(n).cloned().unwrap_or_else(GenNum::zero)),
        }
    }
}

/// A power series `sum a_n (z - center)^n` with an explicit coefficient
/// prefix, an optional rule for indices beyond it, and a pending
/// term-wise derivative order applied to the rule part.
#[derive(Clone, Debug)]
pub struct PowerSeries {
    center: GenNum,
    coeffs: Vec<GenNum>,
    rule: Option<CoeffRule>,
    rule_deriv: u32,
}

impl PowerSeries {
    pub fn new(center: GenNum, coeffs: Vec<GenNum>) -> PowerSeries {
        PowerSeries {
            center,
            coeffs,
            rule: None,
            rule_deriv: 0,
        }
    }

    pub fn with_rule(center: GenNum, coeffs: Vec<GenNum>, rule: CoeffRule) -> PowerSeries {
        PowerSeries {
            center,
            coeffs,
            rule: Some(rule),
            rule_deriv: 0,
        }
    }

    /// Geometric series `sum (z - center)^n`.
    pub fn geometric(center: GenNum) -> PowerSeries {
        let coeffs = vec![GenNum::one(); 8];
        PowerSeries::with_rule(center, coeffs, CoeffRule::Geometric)
    }

    /// Exponential series `sum (z - center)^n / n!`.
    pub fn exponential(center: GenNum) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(8);
        for n in 0..8 {
            coeffs.push(CoeffRule::ExpFamily.base_coefficient(n).expect("finite"));
        }
        PowerSeries::with_rule(center, coeffs, CoeffRule::ExpFamily)
    }

    pub fn center(&self) -> &GenNum {
        &self.center
    }

    pub fn explicit_coeffs(&self) -> &[GenNum] {
        &self.coeffs
    }

    /// Number of coefficient indices the checks range over. Scale-power
    /// rules are capped so their exponents stay within the ring bound.
    pub fn range(&self) -> usize {
        match &self.rule {
            None => self.coeffs.len().max(PREFIX_N),
            Some(CoeffRule::AlphaPowers { step }) => {
                let s = step.to_f64().abs();
                if s == 0.0 {
                    EXTENDED_N
                } else {
                    let cap = (crate::gennum::P_MAX as f64 / s) as usize;
                    EXTENDED_N.min(cap.saturating_sub(self.rule_deriv as usize))
                }
            }
            Some(_) => EXTENDED_N,
        }
    }

    /// Coefficient `a_n`, from the explicit prefix or the rule
    /// (with the pending derivative factor applied); zero beyond both.
    pub fn coefficient(&self, n: usize) -> Result<GenNum> {
        if n < self.coeffs.len() {
            return Ok(self.coeffs[n].clone());
        }
        match &self.rule {
            None => Ok(GenNum::zero()),
            Some(rule) => {
                let k = self.rule_deriv as usize;
                let base = rule.base_coefficient(n + k)?;
                Ok(base.scale_real(falling_factorial(n + k, k)))
            }
        }
    }

    /// Term-wise `k`-th derivative: coefficients
    /// `(n+k)(n+k-1)...(n+1) a_(n+k)` shifted down by `k`.
    pub fn derivative(&self, k: u32) -> PowerSeries {
        let ku = k as usize;
        let mut coeffs = Vec::new();
        for n in 0..self.coeffs.len().saturating_sub(ku) {
            coeffs.push(
                self.coeffs[n + ku].scale_real(falling_factorial(n + ku, ku)),
            );
        }
        PowerSeries {
            center: self.center.clone(),
            coeffs,
            rule: self.rule.clone(),
            rule_deriv: self.rule_deriv + k,
        }
    }
}

/// `n (n-1) ... (n-k+1)` as an exact double.
fn falling_factorial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc *= (n - j) as f64;
    }
    acc
}

/// Term valuations `v_n = V(a_n) + n V(z - center)` over the checked
/// range; exact-zero coefficients are skipped.
fn term_valuations(s: &PowerSeries, vz: &Exp) -> Result<Vec<(usize, Exp)>> {
    let mut out = Vec::new();
    for n in 0..s.range() {
        let a = s.coefficient(n)?;
        match a.valuation() {
            Valuation::Known(r) => out.push((n, &r + &vz.scale_int(n as i64))),
            Valuation::AtLeast(Trunc::Infinite) => continue,
            Valuation::AtLeast(Trunc::Finite(_)) => {
                return Err(Error::IndeterminateValuation { index: n })
            }
        }
    }
    Ok(out)
}

/// Convergence test at `z`: the nonzero term valuations must be
/// eventually strictly increasing with a positive fitted slope. A
/// series whose nonzero coefficients stop before the checked range
/// ends is a polynomial and converges outright. Returns the verdict
/// together with the fitted slope as a diagnostic.
pub fn converges_at(s: &PowerSeries, z: &GenNum) -> Result<(bool, f64)> {
    let d = z - s.center();
    let vz = match d.valuation() {
        Valuation::Known(r) => r,
        Valuation::AtLeast(Trunc::Infinite) => return Ok((true, f64::INFINITY)),
        Valuation::AtLeast(Trunc::Finite(_)) => {
            return Err(Error::IndeterminateValuation { index: 0 })
        }
    };
    let range = s.range();
    let vals = term_valuations(s, &vz)?;
    let last_nonzero = match vals.last() {
        // The zero series converges everywhere.
        None => return Ok((true, f64::INFINITY)),
        Some((n, _)) => *n,
    };

    // Least-squares slope of v_n against n.
    let n = vals.len() as f64;
    let sx: f64 = vals.iter().map(|(i, _)| *i as f64).sum();
    let sy: f64 = vals.iter().map(|(_, v)| v.to_f64()).sum();
    let sxx: f64 = vals.iter().map(|(i, _)| (*i as f64) * (*i as f64)).sum();
    let sxy: f64 = vals.iter().map(|(i, v)| (*i as f64) * v.to_f64()).sum();
    let denom = n * sxx - sx * sx;
    let slope = if denom == 0.0 {
        0.0
    } else {
        (n * sxy - sx * sy) / denom
    };

    // Finitely many nonzero terms: a polynomial, convergent outright.
    if last_nonzero + range / 8 + 1 < range {
        return Ok((true, slope));
    }

    // Strict increase on the tail half of the observed indices.
    let tail_start = vals.len() / 2;
    let tail = &vals[tail_start..];
    let increasing = tail.windows(2).all(|w| w[0].1 < w[1].1);
    Ok((increasing && slope > 0.0, slope))
}

/// Partial sum to order `N` plus an ultrametric tail bound: the norm of
/// the omitted tail is at most `e^(-tail_bound)` over the checked range.
pub fn eval_series(s: &PowerSeries, z: &GenNum, order: usize) -> Result<(GenNum, Trunc)> {
    let d = z - s.center();
    if d.is_exact_zero() {
        return Ok((s.coefficient(0)?, Trunc::Infinite));
    }
    let (ok, _) = converges_at(s, z)?;
    if !ok {
        return Err(Error::NotConvergent);
    }
    let vz = match d.valuation() {
        Valuation::Known(r) => r,
        _ => unreachable!("converges_at requires a known valuation"),
    };

    let mut acc = GenNum::zero();
    for n in (0..=order).rev() {
        acc = acc.checked_mul(&d)?.checked_add(&s.coefficient(n)?)?;
    }

    let mut tail: Option<Exp> = None;
    for n in (order + 1)..s.range() {
        let a = s.coefficient(n)?;
        let v = match a.valuation() {
            Valuation::Known(r) => &r + &vz.scale_int(n as i64),
            Valuation::AtLeast(Trunc::Infinite) => continue,
            Valuation::AtLeast(Trunc::Finite(t)) => &t + &vz.scale_int(n as i64),
        };
        tail = Some(match tail {
            None => v,
            Some(t) => t.min(v),
        });
    }
    Ok((acc, tail.map_or(Trunc::Infinite, Trunc::Finite)))
}

/// A sub-linearity witness: derivative-growth exponents `p_n` and a
/// rate `k` with `p_n + n k` nondecreasing along the prefix.
#[derive(Clone, Debug)]
pub struct SublinearityWitness {
    pub k: f64,
    pub p: Vec<f64>,
}

impl SublinearityWitness {
    pub fn validate(&self) -> Result<()> {
        for (i, w) in self.p.windows(2).enumerate() {
            let a = w[0] + self.k * i as f64;
            let b = w[1] + self.k * (i + 1) as f64;
            if b < a {
                return Err(Error::WitnessViolated { index: i + 1 });
            }
        }
        Ok(())
    }
}

/// Radius of guaranteed convergence `e^(-|k|)` for a valid witness:
/// any `z` with `norm(z - z0) < e^(-|k|)` passes the convergence test
/// for coefficients of valuation `p_n`.
pub fn sublinear_radius(w: &SublinearityWitness) -> Result<f64> {
    w.validate()?;
    Ok((-w.k.abs()).exp())
}

/// The conjugate Wirtinger operator `(d/dx + i d/dy) / 2` applied to a
/// one-variable complex function at `z`, via difference-quotient
/// partials of the real-pair form.
pub fn dbar(f: &GenFunc, z: &GenNum, opts: &DerivOptions) -> Result<GenNum> {
    let split = f.split_complex()?;
    let args = [z.re_part(), z.im_part()];
    let px = partial(&split, &args, 0, opts)?.value;
    let py = partial(&split, &args, 1, opts)?.value;
    Ok(px
        .checked_add(&py.scale(Coef::new(0.0, 1.0)))?
        .scale_real(0.5))
}

/// Constant coefficients of a linear differential operator, queried
/// for solvability obstructions.
#[derive(Clone, Debug)]
pub struct ObstructionQuery {
    pub coefficients: Vec<GenNum>,
}

/// One-sided solvability certificate: either some coefficient is
/// invertible (the generated ideal is the whole ring, no obstruction),
/// or the query is inconclusive — the expansion backend cannot witness
/// proper ideals.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    UnitIdeal { index: usize },
    Inconclusive { diagnostic: String },
}

pub fn solvability_certificate(q: &ObstructionQuery) -> Certificate {
    for (i, a) in q.coefficients.iter().enumerate() {
        if a.valuation().is_known() {
            return Certificate::UnitIdeal { index: i + 1 };
        }
    }
    Certificate::Inconclusive {
        diagnostic: "no coefficient has a known valuation up to truncation".into(),
    }
}

/// Net-backend variant: a coefficient sampled as a clean power law
/// (moderate fit) certifies a unit; anything else stays inconclusive.
pub fn solvability_certificate_nets(coefficients: &[Net]) -> Certificate {
    let mut diags = Vec::new();
    for (i, net) in coefficients.iter().enumerate() {
        match classify(net, DEFAULT_NEGLIGIBILITY_SLOPE) {
            NetClass::Moderate { .. } => return Certificate::UnitIdeal { index: i + 1 },
            other => diags.push(format!("a{}: {}", i + 1, other)),
        }
    }
    Certificate::Inconclusive {
        diagnostic: diags.join("; "),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus;
    use crate::expr::Expr;
    use crate::gennum::DEFAULT_TRUNC;
    use crate::net::{sample_real, Grid};

    fn eps() -> GenNum {
        GenNum::alpha_int(1)
    }

    #[test]
    fn geometric_converges_at_alpha() {
        let s = PowerSeries::geometric(GenNum::zero());
        let (ok, slope) = converges_at(&s, &eps()).unwrap();
        assert!(ok);
        assert!((slope - 1.0).abs() < 1e-9);
    }

    #[test]
    fn alpha_power_coefficients_defeat_convergence() {
        // a_n = alpha(-n) against z = alpha(1): term norms stay 1.
        let s = PowerSeries::with_rule(
            GenNum::zero(),
            vec![],
            CoeffRule::AlphaPowers {
                step: Exp::from_int(-1),
            },
        );
        let (ok, slope) = converges_at(&s, &eps()).unwrap();
        assert!(!ok);
        assert!(slope.abs() < 1e-9);
    }

    #[test]
    fn factorial_coefficients_converge_with_slope_two() {
        let s = PowerSeries::exponential(GenNum::zero());
        let z = GenNum::alpha_int(2);
        let (ok, slope) = converges_at(&s, &z).unwrap();
        assert!(ok);
        assert!((slope - 2.0).abs() < 1e-9);
    }

    #[test]
    fn eval_geometric_partial_sum() {
        let s = PowerSeries::geometric(GenNum::zero());
        let (v, tail) = eval_series(&s, &eps(), 5).unwrap();
        let mut expected = GenNum::zero();
        for n in 0..=5 {
            expected = expected.checked_add(&GenNum::alpha_int(n)).unwrap();
        }
        assert_eq!(v, expected);
        assert_eq!(tail, Trunc::finite(6));
    }

    #[test]
    fn geometric_sum_matches_inversion() {
        // sum eps^n = 1/(1 - eps) up to O(eps^6).
        let s = PowerSeries::geometric(GenNum::zero());
        let (v, _) = eval_series(&s, &eps(), 5).unwrap();
        let inv = (&GenNum::one() - &eps()).invert(Trunc::finite(6)).unwrap();
        let d = &v - &inv;
        assert!(d.valuation().at_least(&Exp::from_int(6)));
    }

    #[test]
    fn eval_at_center_is_leading_coefficient() {
        let s = PowerSeries::new(eps(), vec![GenNum::from_real(7.0), GenNum::one()]);
        let (v, tail) = eval_series(&s, &eps(), 3).unwrap();
        assert_eq!(v, GenNum::from_real(7.0));
        assert_eq!(tail, Trunc::Infinite);
    }

    #[test]
    fn derivative_shifts_coefficients() {
        let s = PowerSeries::geometric(GenNum::zero());
        let d = s.derivative(1);
        for n in 0..6 {
            let c = d.coefficient(n).unwrap();
            assert_eq!(c, GenNum::from_real((n + 1) as f64));
        }
    }

    #[test]
    fn factorial_coefficient_identity() {
        // k! a_k = (d^k series)(center), exact for k <= 4.
        let coeffs = vec![
            GenNum::from_real(2.0),
            eps(),
            &GenNum::one() + &eps(),
            GenNum::from_real(-3.0),
            GenNum::alpha_int(2),
        ];
        let s = PowerSeries::new(GenNum::zero(), coeffs.clone());
        let mut kfact = 1.0;
        for k in 1..=4u32 {
            kfact *= f64::from(k);
            let d = s.derivative(k);
            let (at_center, _) = eval_series(&d, &GenNum::zero(), 0).unwrap();
            assert_eq!(at_center, coeffs[k as usize].scale_real(kfact));
        }
    }

    #[test]
    fn termwise_derivative_matches_difference_quotient() {
        // d/dz of the geometric series at z0 + alpha(2), cross-checked
        // against the sharp difference quotient of the evaluation map.
        let s = PowerSeries::geometric(GenNum::zero());
        let z = GenNum::alpha_int(2);
        let opts = DerivOptions::default();
        let order = 40;
        let dq = calculus::sharp_derivative_fn(
            |w, _| eval_series(&s, w, order).map(|(v, _)| v),
            &z,
            &opts,
        )
        .unwrap();
        let (tw, _) = eval_series(&s.derivative(1), &z, order).unwrap();
        let d = &dq.value - &tw;
        assert!(
            d.valuation().at_least_f64(opts.tau),
            "difference {d} too coarse"
        );
    }

    #[test]
    fn sublinear_radius_examples() {
        let w = SublinearityWitness {
            k: 2.0,
            p: (0..16).map(|n| n as f64).collect(),
        };
        assert!((sublinear_radius(&w).unwrap() - (-2.0f64).exp()).abs() < 1e-15);

        let w = SublinearityWitness {
            k: 0.0,
            p: (0..16).map(|n| n as f64).collect(),
        };
        assert_eq!(sublinear_radius(&w).unwrap(), 1.0);

        let bad = SublinearityWitness {
            k: 0.0,
            p: vec![0.0, 1.0, -5.0],
        };
        assert!(matches!(
            sublinear_radius(&bad),
            Err(Error::WitnessViolated { index: 2 })
        ));
    }

    #[test]
    fn sublinear_witness_from_polynomial_coefficients() {
        // Taylor coefficients of a polynomial at a generalized center
        // have valuations bounded below; the induced witness passes and
        // the predicted ball verifies the convergence test.
        let coeffs = vec![
            &GenNum::one() + &eps(),
            eps().scale_real(3.0),
            GenNum::alpha_int(2),
            GenNum::alpha_int(3),
        ];
        let p: Vec<f64> = coeffs
            .iter()
            .map(|c| c.valuation().lower_bound().to_f64())
            .collect();
        let w = SublinearityWitness { k: 0.5, p };
        let r = sublinear_radius(&w).unwrap();
        assert!(r > 0.0);
        // Any z with norm below the radius: valuation above |k|.
        let s = PowerSeries::new(GenNum::zero(), coeffs);
        let z = GenNum::alpha(Exp::from_int(1)).unwrap();
        assert!(z.sharp_norm().norm() < r);
        assert!(converges_at(&s, &z).unwrap().0);
    }

    #[test]
    fn dbar_examples() {
        let opts = DerivOptions::default();
        // Holomorphic polynomial: dbar(z^2) vanishes to truncation.
        let f = GenFunc::unary(Expr::var(0).pow(2));
        let z = &GenNum::one() + &eps();
        let v = dbar(&f, &z, &opts).unwrap();
        assert!(v.valuation().at_least(&Exp::from_int(DEFAULT_TRUNC)));

        // dbar(conj z) = 1.
        let f = GenFunc::unary(Expr::call(crate::expr::Builtin::Conj, Expr::var(0)));
        let v = dbar(&f, &z, &opts).unwrap();
        assert!((&v - &GenNum::one())
            .valuation()
            .at_least(&Exp::from_int(DEFAULT_TRUNC)));

        // dbar(z conj z) = conj(z) = z here (real point).
        let f = GenFunc::unary(
            Expr::var(0).mul(Expr::call(crate::expr::Builtin::Conj, Expr::var(0))),
        );
        let v = dbar(&f, &z, &opts).unwrap();
        assert!((&v - &z)
            .valuation()
            .at_least(&Exp::from_int(DEFAULT_TRUNC)));
    }

    #[test]
    fn certificate_examples() {
        let q = ObstructionQuery {
            coefficients: vec![GenNum::alpha_int(1), GenNum::alpha_int(2)],
        };
        assert_eq!(solvability_certificate(&q), Certificate::UnitIdeal { index: 1 });

        let q = ObstructionQuery {
            coefficients: vec![
                GenNum::zero_to(Trunc::finite(DEFAULT_TRUNC)),
                GenNum::zero_to(Trunc::finite(DEFAULT_TRUNC)),
            ],
        };
        assert!(matches!(
            solvability_certificate(&q),
            Certificate::Inconclusive { .. }
        ));

        // Interleaved oscillatory net: classified neither, inconclusive.
        let g = Grid::default_grid();
        let osc =
            sample_real(|e| (1.0 / e) * (1.0 / e).sin().abs().max(1e-6), &g).unwrap();
        match solvability_certificate_nets(&[osc]) {
            Certificate::Inconclusive { diagnostic } => {
                assert!(diagnostic.contains("neither"), "{diagnostic}");
            }
            other => panic!("expected inconclusive, got {other:?}"),
        }
        let clean = sample_real(|e| e * e, &g).unwrap();
        assert_eq!(
            solvability_certificate_nets(&[clean]),
            Certificate::UnitIdeal { index: 1 }
        );
    }
}
