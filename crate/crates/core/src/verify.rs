//! Named, seeded verification suites. Each suite checks one family of
//! ring, calculus, series or embedding laws on a randomized corpus and
//! reports every violated case. The CLI `verify` command and the
//! acceptance tests run these directly.

use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{self, DerivOptions};
use crate::corpus;
use crate::error::Error;
use crate::exp::{Exp, Trunc};
use crate::expr::{Builtin, Expr, GenFunc};
use crate::gennum::{self, GenNum, Valuation, DEFAULT_TRUNC};
use crate::net::{self, NetClass, DEFAULT_NEGLIGIBILITY_SLOPE};
use crate::points::{self, Domain};
use crate::series::{self, CoeffRule, PowerSeries};

/// All suite names, in the order `verify --suite all` runs them.
pub const SUITE_NAMES: &[&str] = &[
    "ultrametric",
    "corollary-norm",
    "deriv-laws",
    "example-deriv5",
    "ftc",
    "series",
    "embedding",
    "caracter-forward",
    "cauchy-schwarz",
    "net-crossval",
];

/// Result of one suite run.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub wall: Duration,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct SuiteRun {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
    started: Instant,
}

impl SuiteRun {
    fn new(name: &'static str) -> SuiteRun {
        SuiteRun {
            name,
            cases: 0,
            failures: Vec::new(),
            started: Instant::now(),
        }
    }

    fn case(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
            wall: self.started.elapsed(),
        }
    }
}

/// Run one suite by name with the given seed.
pub fn run_suite(name: &str, seed: u64) -> Option<SuiteOutcome> {
    let outcome = match name {
        "ultrametric" => ultrametric(seed),
        "corollary-norm" => corollary_norm(seed),
        "deriv-laws" => deriv_laws(seed),
        "example-deriv5" => example_deriv5(seed),
        "ftc" => ftc(seed),
        "series" => series_suite(seed),
        "embedding" => embedding(seed),
        "caracter-forward" => caracter_forward(seed),
        "cauchy-schwarz" => cauchy_schwarz(seed),
        "net-crossval" => net_crossval(seed),
        _ => return None,
    };
    Some(outcome)
}

/// Run all suites in order.
pub fn run_all(seed: u64) -> Vec<SuiteOutcome> {
    SUITE_NAMES
        .iter()
        .map(|n| run_suite(n, seed).expect("known name"))
        .collect()
}

fn work() -> Trunc {
    Trunc::finite(DEFAULT_TRUNC)
}

fn meets(v: &Valuation, bound: i64) -> bool {
    v.lower_bound() >= Trunc::finite(bound)
}

/// Relative noise floor for law checks: accumulated roundoff of a few
/// hundred coefficient operations.
const CHECK_NOISE_REL: f64 = 1e-12;

/// The two values agree at least to `eps^bound`, ignoring coefficients
/// below the noise floor of their own scale.
fn agrees_to(a: &GenNum, b: &GenNum, bound: i64) -> bool {
    let scale = a
        .terms()
        .iter()
        .chain(b.terms())
        .map(|(_, c)| c.norm())
        .fold(0.0_f64, f64::max);
    let floor = CHECK_NOISE_REL * scale;
    let d = a - b;
    let bound = Exp::from_int(bound);
    let clean = d
        .terms()
        .iter()
        .all(|(e, c)| *e >= bound || c.norm() <= floor);
    clean && d.trunc() >= &Trunc::Finite(bound)
}

/// D(x,z) <= max(D(x,y), D(y,z)) as an exact valuation comparison, on
/// 1000 random triples; plus the representation-level sharpening: the
/// valuation of a sum with distinct known valuations is their minimum.
fn ultrametric(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("ultrametric");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let x = corpus::random_gennum(&mut rng, 6, -8, 8);
        let y = corpus::random_gennum(&mut rng, 6, -8, 8);
        let z = corpus::random_gennum(&mut rng, 6, -8, 8);
        let vxz = (&x - &z).valuation_lower();
        let vxy = (&x - &y).valuation_lower();
        let vyz = (&y - &z).valuation_lower();
        let bound = vxy.min_with(&vyz);
        run.case(vxz >= bound, || {
            format!("ultrametric violated: x={x} y={y} z={z}")
        });

        let vx = x.valuation();
        let vy = y.valuation();
        if let (Valuation::Known(a), Valuation::Known(b)) = (&vx, &vy) {
            if a != b {
                let expected = a.clone().min(b.clone());
                let got = (&x + &y).valuation();
                run.case(got == Valuation::Known(expected.clone()), || {
                    format!("strong triangle: x={x} y={y} got {got}, want {expected}")
                });
            }
        }
    }
    run.finish()
}

/// Norm laws: ultrametric additivity and submultiplicativity (with
/// equality for known valuations), definiteness, scalar invariance,
/// the exact scale shift, and the discrete norm on scalars.
fn corollary_norm(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("corollary-norm");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..500 {
        let x = corpus::random_gennum(&mut rng, 6, -8, 8);
        let y = corpus::random_gennum(&mut rng, 6, -8, 8);

        // i) norm(x+y) <= max, norm(xy) = norm(x) norm(y) here.
        let vs = (&x + &y).valuation_lower();
        let bound = x.valuation_lower().min_with(&y.valuation_lower());
        run.case(vs >= bound, || format!("additivity: x={x} y={y}"));
        if let (Valuation::Known(a), Valuation::Known(b)) = (x.valuation(), y.valuation()) {
            let got = (&x * &y).valuation();
            run.case(got == Valuation::Known(&a + &b), || {
                format!("multiplicativity: x={x} y={y} got {got}")
            });
        }

        // ii) definiteness.
        run.case(!x.sharp_norm().is_zero(), || format!("norm zero: x={x}"));
        run.case(GenNum::zero().sharp_norm().is_zero(), || {
            "norm of zero".to_string()
        });

        // iii) nonzero scalar invariance.
        let a = corpus::random_coef(&mut rng);
        run.case(x.scale(a).valuation() == x.valuation(), || {
            format!("scalar invariance: x={x} a={a}")
        });

        // iv) exact valuation shift by a scale element (and its
        // beta form of prescribed norm).
        let r = Exp::new(rng.gen_range(-16..=16), 2);
        let alpha = GenNum::alpha(r.clone()).expect("bounded");
        let shifted = (&alpha * &x).valuation();
        let expect = match x.valuation() {
            Valuation::Known(v) => Valuation::Known(&v + &r),
            other => other,
        };
        run.case(shifted == expect, || format!("scale shift: x={x} r={r}"));
        let beta = GenNum::beta_of_valuation(r.clone()).expect("bounded");
        run.case(beta == GenNum::alpha(r).expect("bounded"), || {
            "beta constructor mismatch".to_string()
        });

        // v) scalars have norm one.
        let s = corpus::random_coef(&mut rng);
        run.case(
            GenNum::from_coef(s).valuation() == Valuation::Known(Exp::zero()),
            || format!("scalar norm: a={s}"),
        );

        // vi) norm(a-b) = 1 - delta_ab on scalars.
        let b = corpus::random_coef(&mut rng);
        let d = GenNum::sharp_distance(&GenNum::from_coef(s), &GenNum::from_coef(b));
        if s == b {
            run.case(d.is_zero(), || format!("delta: a=b={s}"));
        } else {
            run.case(d.norm() == 1.0, || format!("delta: a={s} b={b}"));
        }
        let same = GenNum::sharp_distance(&GenNum::from_coef(s), &GenNum::from_coef(s));
        run.case(same.is_zero(), || "delta on equal scalars".to_string());
    }
    run.finish()
}

/// Working truncation of the derivative-laws suite. Quotient-rule
/// checks invert expansions whose series coefficients grow
/// geometrically; sixteen orders keeps the roundoff amplification of
/// that growth below the coefficient tolerance in double precision.
pub const LAWS_TRUNC: i64 = 16;

/// Pick a pair of polynomials and a base point at which `g` is a
/// well-conditioned unit, so the quotient law is testable: the inverse
/// series of `g(x0)` must keep bounded coefficient growth.
fn laws_instance(rng: &mut ChaCha8Rng, w: &Trunc) -> (GenFunc, GenFunc, GenNum) {
    loop {
        let f = corpus::random_polynomial(rng, 3);
        let g = corpus::random_polynomial(rng, 3);
        let x0 = corpus::random_base_point(rng);
        let Ok(gx) = g.eval(std::slice::from_ref(&x0), w) else {
            continue;
        };
        if gx.valuation() != Valuation::Known(Exp::zero()) {
            continue;
        }
        let Some((_, lead)) = gx.leading() else {
            continue;
        };
        if lead.norm() < 0.5 {
            continue;
        }
        // Conditioning gate: the inverse series of g(x0) is driven by
        // the coefficient mass of its unit part; keep it near one so
        // sixteen orders of series arithmetic stay within the
        // coefficient tolerance in double precision.
        let mass: f64 = gx
            .terms()
            .iter()
            .skip(1)
            .map(|(_, c)| c.norm())
            .sum::<f64>()
            / lead.norm();
        if mass <= 1.25 {
            return (f, g, x0);
        }
    }
}

/// Leibniz, chain, linearity and quotient laws for the sharp
/// derivative on 200 random polynomial pairs; discrepancies must
/// vanish at least to the suite's working truncation.
fn deriv_laws(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("deriv-laws");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = DerivOptions {
        work_trunc: Trunc::finite(LAWS_TRUNC),
        ..DerivOptions::default()
    };
    let w = opts.work_trunc.clone();
    for _ in 0..200 {
        let (f, g, x0) = laws_instance(&mut rng, &w);
        let args = std::slice::from_ref(&x0);
        let (fx, gx) = (f.eval(args, &w).unwrap(), g.eval(args, &w).unwrap());
        let df = match calculus::derivative(&f, &x0, &opts) {
            Ok(r) => r.value,
            Err(e) => {
                run.case(false, || format!("derivative of f failed: {e}"));
                continue;
            }
        };
        let dg = match calculus::derivative(&g, &x0, &opts) {
            Ok(r) => r.value,
            Err(e) => {
                run.case(false, || format!("derivative of g failed: {e}"));
                continue;
            }
        };

        // Leibniz.
        let fg = GenFunc::unary(f.body().clone().mul(g.body().clone()));
        let lhs = calculus::derivative(&fg, &x0, &opts).map(|r| r.value);
        let rhs = (&df * &gx).checked_add(&(&fx * &dg)).unwrap();
        run.case(
            lhs.as_ref().map(|l| agrees_to(l, &rhs, LAWS_TRUNC)).unwrap_or(false),
            || format!("leibniz: f={f} g={g} x0={x0}"),
        );

        // Chain rule: D(g o f) = (D(g) o f) D(f).
        let h = g.compose(std::slice::from_ref(&f));
        let lhs = calculus::derivative(&h, &x0, &opts).map(|r| r.value);
        let dg_at_fx = calculus::derivative(&g, &fx, &opts).map(|r| r.value);
        let ok = match (&lhs, &dg_at_fx) {
            (Ok(l), Ok(d)) => agrees_to(l, &(d * &df), LAWS_TRUNC),
            _ => false,
        };
        run.case(ok, || format!("chain: f={f} g={g} x0={x0}"));

        // Linearity.
        let sum = GenFunc::unary(f.body().clone().add(g.body().clone()));
        let lhs = calculus::derivative(&sum, &x0, &opts).map(|r| r.value);
        let rhs = df.checked_add(&dg).unwrap();
        run.case(
            lhs.map(|l| agrees_to(&l, &rhs, LAWS_TRUNC)).unwrap_or(false),
            || format!("additivity: f={f} g={g} x0={x0}"),
        );
        let c = corpus::random_gennum(&mut rng, 3, 0, 4);
        let cf = GenFunc::unary(Expr::constant(c.clone()).mul(f.body().clone()));
        let lhs = calculus::derivative(&cf, &x0, &opts).map(|r| r.value);
        let rhs = &c * &df;
        run.case(
            lhs.map(|l| agrees_to(&l, &rhs, LAWS_TRUNC)).unwrap_or(false),
            || format!("homogeneity: f={f} c={c} x0={x0}"),
        );

        // Quotient rule (g(x0) is a unit by construction). The
        // reference side squares the inverse of g(x0) rather than
        // inverting its square, which keeps the series well-conditioned.
        let fq = GenFunc::unary(f.body().clone().div(g.body().clone()));
        let lhs = calculus::derivative(&fq, &x0, &opts).map(|r| r.value);
        let ginv = gx.invert(w.clone()).unwrap();
        let rhs = (&(&df * &gx) - &(&fx * &dg))
            .checked_mul(&ginv)
            .unwrap()
            .checked_mul(&ginv)
            .unwrap();
        run.case(
            lhs.map(|l| agrees_to(&l, &rhs, LAWS_TRUNC)).unwrap_or(false),
            || format!("quotient: f={f} g={g} x0={x0}"),
        );
    }
    run.finish()
}

/// The almost-constant function: difference quotients of the
/// norm-square scale map are scale elements of valuation `n`, the
/// accepted derivative is zero at every base point, and yet the
/// function takes distinct values.
fn example_deriv5(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("example-deriv5");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = DerivOptions::default();
    let f = GenFunc::unary(Expr::beta_norm_sq(Expr::var(0)));
    let w = work();

    for i in 0..50 {
        let x0 = if i % 10 == 0 {
            GenNum::zero()
        } else {
            corpus::random_scale_point(&mut rng)
        };
        let v0 = x0.valuation_lower();

        // Quotients below the valuation of the base point are exactly
        // scale elements of valuation n.
        let f0 = f.eval(std::slice::from_ref(&x0), &w).unwrap();
        for n in 1..=3i64 {
            if Trunc::finite(n) >= v0 {
                break;
            }
            let h = GenNum::alpha_int(n);
            let q = (&f.eval(&[&x0 + &h], &w).unwrap() - &f0)
                .checked_mul(&GenNum::alpha_int(-n))
                .unwrap();
            run.case(q.valuation() == Valuation::Known(Exp::from_int(n)), || {
                format!("quotient valuation at n={n}, x0={x0}: got {}", q.valuation())
            });
        }

        match calculus::derivative(&f, &x0, &opts) {
            Ok(r) => {
                run.case(
                    r.value.is_exact_zero() || r.value.valuation().at_least_f64(opts.tau),
                    || format!("derivative not accepted as zero at x0={x0}: {}", r.value),
                );
                run.case(r.depth_used <= opts.depth, || {
                    format!("depth {} exceeded at x0={x0}", r.depth_used)
                });
            }
            Err(e) => run.case(false, || format!("derivative failed at x0={x0}: {e}")),
        }
    }

    // Non-constancy witnessed by two distinct values.
    let v1 = f.eval(&[GenNum::alpha_int(1)], &w).unwrap();
    let v2 = f.eval(&[GenNum::alpha_int(2)], &w).unwrap();
    run.case(v1 != v2, || "function values coincide".to_string());
    run.finish()
}

/// Fundamental theorem of calculus on 100 random polynomials with
/// generalized endpoints, plus the numerical cross-check of the
/// symbolic integral on the net backend.
fn ftc(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("ftc");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = DerivOptions::default();
    let w = work();
    let grid = net::Grid::default_grid();
    for _ in 0..100 {
        let f = corpus::random_polynomial(&mut rng, 5);
        let a = corpus::random_base_point(&mut rng);
        let x = corpus::random_base_point(&mut rng);

        match calculus::ftc_check(&f, &a, &x, &opts) {
            Ok(v) => run.case(meets(&v, DEFAULT_TRUNC), || {
                format!("ftc valuation {v} too small: f={f} a={a} x={x}")
            }),
            Err(e) => run.case(false, || format!("ftc failed: f={f} a={a} x={x}: {e}")),
        }

        // Net cross-check of the symbolic integral.
        let coeffs = calculus::poly_coeffs(&f, &w).unwrap();
        let symbolic = calculus::integrate(&f, &a, &x, &w).unwrap();
        let lower = net::from_gennum(&a, &grid);
        let upper = net::from_gennum(&x, &grid);
        let numeric = calculus::integrate_net(
            |eps, t| {
                let mut acc = 0.0;
                for (k, c) in coeffs.iter().enumerate() {
                    acc += net::eval_gennum_at(c, eps).re * t.powi(k as i32);
                }
                acc
            },
            &lower,
            &upper,
        );
        match numeric {
            Ok(numeric) => {
                let exact = net::from_gennum(&symbolic, &grid);
                let ok = numeric
                    .values()
                    .iter()
                    .zip(exact.values())
                    .all(|(n, e)| (n.re - e.re).abs() <= 1e-9);
                run.case(ok, || {
                    format!("net cross-check drifted: f={f} a={a} x={x}")
                });
            }
            Err(e) => run.case(false, || format!("quadrature failed: f={f}: {e}")),
        }
    }
    run.finish()
}

/// Series laws: the geometric sum inverts `1 - eps`, term-wise
/// differentiation matches the difference quotient, the factorial
/// coefficient identity is exact, and convergence verdicts follow the
/// sign of the term-valuation slope on 100 constructed series.
fn series_suite(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("series");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = DerivOptions::default();

    // Geometric sum = inversion of (1 - eps), to O(eps^(N+1)).
    let geo = PowerSeries::geometric(GenNum::zero());
    let eps = GenNum::alpha_int(1);
    for order in [5usize, 12, 24] {
        let (v, tail) = series::eval_series(&geo, &eps, order).unwrap();
        run.case(tail == Trunc::finite(order as i64 + 1), || {
            format!("tail bound at order {order}: {tail}")
        });
        let inv = (&GenNum::one() - &eps)
            .invert(Trunc::finite(order as i64 + 1))
            .unwrap();
        run.case(
            meets(&(&v - &inv).valuation(), order as i64 + 1),
            || format!("geometric/inversion mismatch at order {order}"),
        );
    }

    // Term-wise derivative vs difference quotient on random series.
    for _ in 0..20 {
        let coeffs: Vec<GenNum> = (0..8)
            .map(|_| corpus::random_gennum(&mut rng, 3, 0, 4))
            .collect();
        let s = PowerSeries::new(GenNum::zero(), coeffs);
        let z = GenNum::alpha_int(2);
        let dq = calculus::sharp_derivative_fn(
            |v, _| series::eval_series(&s, v, 30).map(|(x, _)| x),
            &z,
            &opts,
        );
        let tw = series::eval_series(&s.derivative(1), &z, 30).map(|(x, _)| x);
        let ok = match (&dq, &tw) {
            (Ok(d), Ok(t)) => (&d.value - t).valuation().at_least_f64(opts.tau),
            _ => false,
        };
        run.case(ok, || "term-wise derivative mismatch".to_string());
    }

    // k! a_k identity, exact for k <= 4.
    for _ in 0..20 {
        let coeffs: Vec<GenNum> = (0..6)
            .map(|_| corpus::random_gennum(&mut rng, 3, -4, 4))
            .collect();
        let s = PowerSeries::new(GenNum::zero(), coeffs.clone());
        let mut kfact = 1.0_f64;
        for k in 1..=4u32 {
            kfact *= f64::from(k);
            let (v, _) = series::eval_series(&s.derivative(k), &GenNum::zero(), 0).unwrap();
            run.case(v == coeffs[k as usize].scale_real(kfact), || {
                format!("factorial identity k={k}")
            });
        }
    }

    // Convergence verdicts match the slope sign for a_n = alpha(s n)
    // against z = alpha(r).
    for _ in 0..100 {
        let s_num = rng.gen_range(-6..=6i64);
        let r = rng.gen_range(1..=4i64);
        let step = Exp::new(s_num, 2);
        let ps = PowerSeries::with_rule(
            GenNum::zero(),
            vec![],
            CoeffRule::AlphaPowers { step: step.clone() },
        );
        let z = GenNum::alpha_int(r);
        let expect_slope = s_num as f64 / 2.0 + r as f64;
        match series::converges_at(&ps, &z) {
            Ok((verdict, slope)) => {
                run.case(verdict == (expect_slope > 0.0), || {
                    format!("verdict for step={step} r={r}: got {verdict}")
                });
                run.case((slope - expect_slope).abs() < 1e-6, || {
                    format!("slope for step={step} r={r}: got {slope}")
                });
            }
            Err(e) => run.case(false, || format!("converges_at failed: {e}")),
        }
    }
    run.finish()
}

/// The embedding is an algebra homomorphism (exact on polynomials) and
/// commutes with differentiation on the smooth corpus.
fn embedding(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("embedding");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = DerivOptions::default();
    let w = work();
    let domain = Domain::interval(-1.0, 1.0);

    // Homomorphism on polynomials, exact.
    for _ in 0..50 {
        let f = corpus::random_polynomial(&mut rng, 4);
        let g = corpus::random_polynomial(&mut rng, 4);
        let a = corpus::random_gennum(&mut rng, 2, 0, 3);
        let shadow = rng.gen_range(-0.7..0.7);
        let pert = GenNum::alpha(Exp::new(rng.gen_range(1..=16), 2)).unwrap();
        let x = points::make_point(
            vec![&GenNum::from_real(shadow) + &pert],
            &domain,
        )
        .unwrap();

        let kf = points::kappa(f.clone(), domain.clone()).unwrap();
        let kg = points::kappa(g.clone(), domain.clone()).unwrap();
        let fv = points::pointvalue(&kf, &x, &w).unwrap();
        let gv = points::pointvalue(&kg, &x, &w).unwrap();

        let prod = points::kappa(
            GenFunc::unary(f.body().clone().mul(g.body().clone())),
            domain.clone(),
        )
        .unwrap();
        let pv = points::pointvalue(&prod, &x, &w).unwrap();
        run.case(pv == (&fv * &gv), || format!("multiplicativity: f={f} g={g}"));

        let comb = points::kappa(
            GenFunc::unary(
                Expr::constant(a.clone())
                    .mul(f.body().clone())
                    .add(g.body().clone()),
            ),
            domain.clone(),
        )
        .unwrap();
        let cv = points::pointvalue(&comb, &x, &w).unwrap();
        run.case(cv == (&(&a * &fv) + &gv), || {
            format!("linearity: f={f} g={g} a={a}")
        });
    }

    // Derivative commutation on sin, cos, exp and polynomials.
    for i in 0..50 {
        let shadow = rng.gen_range(-0.7..0.7);
        let pert = GenNum::alpha(Exp::new(rng.gen_range(1..=16), 2)).unwrap();
        let x = points::make_point(
            vec![&GenNum::from_real(shadow) + &pert],
            &domain,
        )
        .unwrap();
        let (f, df) = match i % 4 {
            0 => (
                GenFunc::unary(Expr::call(Builtin::Sin, Expr::var(0))),
                GenFunc::unary(Expr::call(Builtin::Cos, Expr::var(0))),
            ),
            1 => (
                GenFunc::unary(Expr::call(Builtin::Cos, Expr::var(0))),
                GenFunc::unary(Expr::call(Builtin::Sin, Expr::var(0)).neg()),
            ),
            2 => (
                GenFunc::unary(Expr::call(Builtin::Exp, Expr::var(0))),
                GenFunc::unary(Expr::call(Builtin::Exp, Expr::var(0))),
            ),
            _ => {
                let p = corpus::random_polynomial(&mut rng, 4);
                let dp = p.diff(0).unwrap();
                (p, dp)
            }
        };
        let kdf = points::kappa(df, domain.clone()).unwrap();
        let lhs = points::pointvalue(&kdf, &x, &w).unwrap();
        let rhs = calculus::partial(&f, x.components(), 0, &opts).map(|r| r.value);
        let ok = rhs
            .map(|r| (&lhs - &r).valuation().at_least_f64(opts.tau))
            .unwrap_or(false);
        run.case(ok, || format!("commutation failed for {f} at {x}"));
    }
    run.finish()
}

/// Forward zero characterization and pointvalue well-definedness: the
/// zero function vanishes at every sampled point to the truncation,
/// and attaching a negligible perturbation never changes the value.
fn caracter_forward(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("caracter-forward");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = work();
    let domain = Domain::interval(-1.0, 1.0);
    let grid = net::Grid::default_grid();

    // All pointvalues of the zero expression vanish to the truncation.
    let zero = points::kappa(GenFunc::unary(Expr::real(0.0)), domain.clone()).unwrap();
    for _ in 0..100 {
        let shadow = rng.gen_range(-0.7..0.7);
        let pert = GenNum::alpha(Exp::new(rng.gen_range(1..=16), 2)).unwrap();
        let x = points::make_point(vec![&GenNum::from_real(shadow) + &pert], &domain).unwrap();
        let v = points::pointvalue(&zero, &x, &w).unwrap();
        run.case(meets(&v.valuation(), DEFAULT_TRUNC), || {
            format!("pointvalue of zero at {x} has valuation {}", v.valuation())
        });
    }
    let probe = points::zero_probe(&zero, 100, seed, &w);
    run.case(probe.verdict == "consistent-with-zero", || {
        format!("zero probe verdict: {}", probe.verdict)
    });

    // Negligible perturbations never change the pointvalue.
    let pert_net = net::sample_real(|e| e.powi(10), &grid).unwrap();
    let f = GenFunc::unary(Expr::var(0).pow(2).add(Expr::real(1.0)));
    let plain = points::kappa(f.clone(), domain.clone()).unwrap();
    let perturbed = points::kappa(f, domain.clone())
        .unwrap()
        .with_perturbation(pert_net);
    for _ in 0..100 {
        let shadow = rng.gen_range(-0.7..0.7);
        let pert = GenNum::alpha(Exp::new(rng.gen_range(1..=16), 2)).unwrap();
        let x = points::make_point(vec![&GenNum::from_real(shadow) + &pert], &domain).unwrap();
        let a = points::pointvalue(&plain, &x, &w).unwrap();
        let b = points::pointvalue(&perturbed, &x, &w).unwrap();
        run.case(a == b, || format!("perturbation changed the class at {x}"));
    }

    // A moderate perturbation must be rejected.
    let bad = net::sample_real(|e| 1.0 / e, &grid).unwrap();
    let ill = points::kappa(GenFunc::unary(Expr::var(0)), domain.clone())
        .unwrap()
        .with_perturbation(bad);
    let x = points::make_point(vec![&GenNum::from_real(0.5) + &GenNum::alpha_int(1)], &domain)
        .unwrap();
    run.case(
        matches!(
            points::pointvalue(&ill, &x, &w),
            Err(Error::IllFormedPerturbation)
        ),
        || "moderate perturbation accepted".to_string(),
    );

    // The reverse probe finds a witness for a visibly nonzero function.
    let scaled = points::kappa(
        GenFunc::unary(Expr::constant(GenNum::alpha_int(5)).mul(Expr::var(0))),
        domain,
    )
    .unwrap();
    let probe = points::zero_probe(&scaled, 100, seed, &w);
    run.case(probe.verdict == "witness-found", || {
        "no witness for alpha(5) x".to_string()
    });
    run.finish()
}

/// Generalized Cauchy-Schwarz under the leading-coefficient order on
/// 300 random real vector pairs of dimension 2..=5.
fn cauchy_schwarz(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("cauchy-schwarz");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t16 = Trunc::finite(16);
    for _ in 0..300 {
        let dim = rng.gen_range(2..=5);
        let x: Vec<GenNum> = (0..dim)
            .map(|_| corpus::random_gennum(&mut rng, 3, -4, 4).truncate_at(t16.clone()))
            .collect();
        let y: Vec<GenNum> = (0..dim)
            .map(|_| corpus::random_gennum(&mut rng, 3, -4, 4).truncate_at(t16.clone()))
            .collect();
        let ip = gennum::inner_product(&x, &y).unwrap();
        let rhs = gennum::euclidean_module(&x)
            .unwrap()
            .checked_mul(&gennum::euclidean_module(&y).unwrap())
            .unwrap();
        let ok = match ip.modulus() {
            Ok(lhs) => {
                let d = &rhs - &lhs;
                match GenNum::zero().leq(&d) {
                    Ok(b) => b,
                    // Equality to the comparison depth.
                    Err(Error::OrderUndetermined) => true,
                    Err(_) => false,
                }
            }
            // Inner product vanished to truncation: the bound holds.
            Err(Error::SignUndetermined) => true,
            Err(_) => false,
        };
        run.case(ok, || {
            format!(
                "cauchy-schwarz violated: x=({}) y=({})",
                x.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
                y.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
            )
        });
    }
    run.finish()
}

/// Cross-validation of the exact valuation against the sampled
/// estimate on 500 random expansions, plus the three canonical
/// classification verdicts.
fn net_crossval(seed: u64) -> SuiteOutcome {
    let mut run = SuiteRun::new("net-crossval");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = net::Grid::default_grid();
    for _ in 0..500 {
        let x = corpus::random_gennum(&mut rng, 6, -8, 8);
        let r = match x.valuation() {
            Valuation::Known(r) => r.to_f64(),
            _ => continue,
        };
        let est = net::estimate_valuation(&net::from_gennum(&x, &grid));
        let ok = est.as_ref().map(|e| (e - r).abs() <= 0.05).unwrap_or(false);
        run.case(ok, || {
            format!(
                "estimate {} for exact valuation {r}: x={x}",
                est.map(|e| e.to_string()).unwrap_or_else(|e| e.to_string())
            )
        });
    }

    let m = net::sample_real(|e| e.powi(-2), &grid).unwrap();
    run.case(
        matches!(
            net::classify(&m, DEFAULT_NEGLIGIBILITY_SLOPE),
            NetClass::Moderate { .. }
        ),
        || "eps^-2 not moderate".to_string(),
    );
    let n = net::sample_real(|e| e.powi(10), &grid).unwrap();
    run.case(
        matches!(
            net::classify(&n, DEFAULT_NEGLIGIBILITY_SLOPE),
            NetClass::Negligible { .. }
        ),
        || "eps^10 not negligible".to_string(),
    );
    let o = net::sample_real(|e| (1.0 / e) * (1.0 / e).sin().abs().max(1e-6), &grid).unwrap();
    run.case(
        matches!(
            net::classify(&o, DEFAULT_NEGLIGIBILITY_SLOPE),
            NetClass::Neither { .. }
        ),
        || "oscillatory net not neither".to_string(),
    );
    run.finish()
}
