//! Compactly supported generalized points of an open domain, pointvalue
//! evaluation of generalized functions, the embedding of classical
//! smooth functions with derivative commutation, the randomized
//! zero-characterization probe, and sharp-ball geometry checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exp::{Exp, Trunc};
use crate::expr::GenFunc;
use crate::gennum::{Coef, GenNum, DEFAULT_TRUNC};
use crate::net::{classify, Net, NetClass, DEFAULT_NEGLIGIBILITY_SLOPE};

/// Default seed of the randomized probes.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// An open subset of real n-space (or the whole complex plane via
/// `All`), described by membership plus distance to the complement.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Interval { lo: f64, hi: f64 },
    Box(Vec<(f64, f64)>),
    All { dim: usize },
}

impl Domain {
    pub fn interval(lo: f64, hi: f64) -> Domain {
        Domain::Interval { lo, hi }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Box(iv) => iv.len(),
            Domain::All { dim } => *dim,
        }
    }

    pub fn contains(&self, p: &[Coef]) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        match self {
            Domain::Interval { lo, hi } => {
                p[0].im == 0.0 && p[0].re > *lo && p[0].re < *hi
            }
            Domain::Box(iv) => iv
                .iter()
                .zip(p)
                .all(|((lo, hi), c)| c.im == 0.0 && c.re > *lo && c.re < *hi),
            Domain::All { .. } => true,
        }
    }

    /// Euclidean distance from an interior point to the complement.
    pub fn distance_to_complement(&self, p: &[Coef]) -> f64 {
        match self {
            Domain::Interval { lo, hi } => (p[0].re - lo).min(hi - p[0].re),
            Domain::Box(iv) => iv
                .iter()
                .zip(p)
                .map(|((lo, hi), c)| (c.re - lo).min(hi - c.re))
                .fold(f64::INFINITY, f64::min),
            Domain::All { .. } => f64::INFINITY,
        }
    }

    /// Sample a shadow uniformly from a compact core of the domain
    /// (points at distance at least an eighth of the width from the
    /// complement; a fixed box for unbounded domains).
    pub fn sample_core(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self {
            Domain::Interval { lo, hi } => {
                let m = (hi - lo) / 8.0;
                vec![rng.gen_range(lo + m..hi - m)]
            }
            Domain::Box(iv) => iv
                .iter()
                .map(|(lo, hi)| {
                    let m = (hi - lo) / 8.0;
                    rng.gen_range(lo + m..hi - m)
                })
                .collect(),
            Domain::All { dim } => (0..*dim).map(|_| rng.gen_range(-3.0..3.0)).collect(),
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Domain::Interval { lo, hi } => write!(f, "interval({lo},{hi})"),
            Domain::Box(iv) => {
                write!(f, "box(")?;
                for (i, (lo, hi)) in iv.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({lo},{hi})")?;
                }
                write!(f, ")")
            }
            Domain::All { .. } => write!(f, "all"),
        }
    }
}

/// A compactly supported generalized point: components with shadows,
/// the assembled shadow point, and a compact-support witness radius.
#[derive(Clone, Debug, PartialEq)]
pub struct GenPoint {
    components: Vec<GenNum>,
    shadow_point: Vec<Coef>,
    support_margin: f64,
}

impl GenPoint {
    pub fn components(&self) -> &[GenNum] {
        &self.components
    }

    pub fn shadow_point(&self) -> &[Coef] {
        &self.shadow_point
    }

    pub fn support_margin(&self) -> f64 {
        self.support_margin
    }

    /// Max sharp norm over the components; at most one by construction.
    pub fn sharp_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.sharp_norm().norm())
            .fold(0.0, f64::max)
    }
}

impl std::fmt::Display for GenPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Build a generalized point of the domain. Every component needs a
/// shadow, the shadow point must lie in the open domain, and the
/// support margin is half its distance to the complement.
pub fn make_point(components: Vec<GenNum>, domain: &Domain) -> Result<GenPoint> {
    if components.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            left: components.len(),
            right: domain.dim(),
        });
    }
    let mut shadow_point = Vec::with_capacity(components.len());
    for c in &components {
        let s = c.shadow().map_err(|_| Error::NotCompactlySupported {
            detail: format!("component {c} has no shadow"),
        })?;
        shadow_point.push(s);
    }
    if !domain.contains(&shadow_point) {
        return Err(Error::NotCompactlySupported {
            detail: "shadow point outside the open domain".into(),
        });
    }
    let dist = domain.distance_to_complement(&shadow_point);
    if !(dist > 0.0) {
        return Err(Error::NotCompactlySupported {
            detail: "shadow point on the boundary".into(),
        });
    }
    Ok(GenPoint {
        components,
        shadow_point,
        support_margin: dist / 2.0,
    })
}

/// A generalized function on a domain, optionally carrying a sampled
/// representative perturbation that must be negligible.
#[derive(Clone, Debug)]
pub struct GenFuncOnDomain {
    pub func: GenFunc,
    pub domain: Domain,
    pub representative_perturbation: Option<Net>,
}

impl GenFuncOnDomain {
    pub fn new(func: GenFunc, domain: Domain) -> GenFuncOnDomain {
        GenFuncOnDomain {
            func,
            domain,
            representative_perturbation: None,
        }
    }

    pub fn with_perturbation(mut self, net: Net) -> GenFuncOnDomain {
        self.representative_perturbation = Some(net);
        self
    }
}

/// The embedding of a classical smooth function (polynomial or builtin
/// composition) as a generalized function on the domain.
pub fn kappa(f: GenFunc, domain: Domain) -> Result<GenFuncOnDomain> {
    if f.arity() != domain.dim() {
        return Err(Error::ArityMismatch {
            expected: domain.dim(),
            got: f.arity(),
        });
    }
    if !f.body().is_smooth_classical() {
        return Err(Error::GrammarUnsupported {
            detail: "embedding requires a classical smooth expression".into(),
        });
    }
    Ok(GenFuncOnDomain::new(f, domain))
}

/// Pointvalue outcome together with the classification of an attached
/// representative perturbation (well-definedness evidence).
#[derive(Clone, Debug)]
pub struct PointvalueOutcome {
    pub value: GenNum,
    pub perturbation: Option<NetClass>,
}

/// Evaluate a generalized function at a generalized point. An attached
/// perturbation must classify as negligible; being negligible it
/// cannot change the class of the result.
pub fn pointvalue_with_report(
    u: &GenFuncOnDomain,
    x: &GenPoint,
    work: &Trunc,
) -> Result<PointvalueOutcome> {
    if !u.domain.contains(x.shadow_point()) {
        return Err(Error::NotCompactlySupported {
            detail: "point does not belong to the domain".into(),
        });
    }
    let perturbation = match &u.representative_perturbation {
        None => None,
        Some(net) => {
            let class = classify(net, DEFAULT_NEGLIGIBILITY_SLOPE);
            if !matches!(class, NetClass::Negligible { .. }) {
                return Err(Error::IllFormedPerturbation);
            }
            Some(class)
        }
    };
    let value = u.func.eval(x.components(), work)?;
    Ok(PointvalueOutcome {
        value,
        perturbation,
    })
}

pub fn pointvalue(u: &GenFuncOnDomain, x: &GenPoint, work: &Trunc) -> Result<GenNum> {
    pointvalue_with_report(u, x, work).map(|o| o.value)
}

/// Report of the randomized zero probe.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroReport {
    /// `"witness-found"` or `"consistent-with-zero"`.
    pub verdict: String,
    /// Literal form of the best witness point, when one was found.
    pub witness: Option<String>,
    /// Valuation of the pointvalue at the witness.
    pub valuation: Option<String>,
    pub trials: u32,
    pub seed: u64,
}

/// Search random generalized points for a pointvalue that fails to
/// vanish to the working truncation. Shadows are drawn uniformly from
/// a compact core of the domain and perturbed by scale elements with
/// exponents in `[1/2, 8]`. The lowest-valuation witness wins; ties go
/// to the earliest trial.
pub fn zero_probe(u: &GenFuncOnDomain, trials: u32, seed: u64, work: &Trunc) -> ZeroReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let threshold = match work {
        Trunc::Finite(t) => t.clone(),
        Trunc::Infinite => Exp::from_int(DEFAULT_TRUNC),
    };
    let mut best: Option<(Exp, GenPoint)> = None;
    for _ in 0..trials {
        let shadow = u.domain.sample_core(&mut rng);
        let mut components = Vec::with_capacity(shadow.len());
        for s in &shadow {
            // Exponent r = m/2 with m in 1..=16, i.e. r in [1/2, 8].
            let r = Exp::new(rng.gen_range(1..=16), 2);
            let alpha = GenNum::alpha(r).expect("exponent within bound");
            components.push(&GenNum::from_real(*s) + &alpha);
        }
        let point = match make_point(components, &u.domain) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let value = match pointvalue(u, &point, work) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if let Trunc::Finite(v) = value.valuation_lower() {
            if v < threshold {
                let better = match &best {
                    None => true,
                    Some((b, _)) => v < *b,
                };
                if better {
                    best = Some((v, point));
                }
            }
        }
    }
    match best {
        Some((v, point)) => ZeroReport {
            verdict: "witness-found".into(),
            witness: Some(point.to_string()),
            valuation: Some(v.to_string()),
            trials,
            seed,
        },
        None => ZeroReport {
            verdict: "consistent-with-zero".into(),
            witness: None,
            valuation: None,
            trials,
            seed,
        },
    }
}

/// Report of the sharp-ball geometry check.
#[derive(Clone, Debug, Serialize)]
pub struct GeometryReport {
    /// `"ball-contained"` or `"violation"`.
    pub verdict: String,
    /// Literal form of a violating sample, if any.
    pub witness: Option<String>,
    /// Sharp norm of the base point (at most one by construction).
    pub valuation: Option<String>,
    pub trials: u32,
    pub seed: u64,
}

/// Verify that every sampled point of the open unit sharp ball around
/// `x` is again a generalized point of the domain with the same shadow,
/// and that the norm of `x` does not exceed one.
pub fn ball_geometry(x: &GenPoint, domain: &Domain, trials: u32, seed: u64) -> GeometryReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witness = None;
    for _ in 0..trials {
        // Perturbation of strictly positive valuation: distance < 1.
        let mut components = Vec::with_capacity(x.components().len());
        for c in x.components() {
            let r = Exp::new(rng.gen_range(1..=16), 2);
            let alpha = GenNum::alpha(r).expect("exponent within bound");
            components.push(c + &alpha);
        }
        match make_point(components, domain) {
            Ok(y) => {
                if y.shadow_point() != x.shadow_point() {
                    witness = Some(y.to_string());
                    break;
                }
            }
            Err(_) => {
                witness = Some("perturbed point left the domain".into());
                break;
            }
        }
    }
    let norm_ok = x.sharp_norm() <= 1.0;
    GeometryReport {
        verdict: if witness.is_none() && norm_ok {
            "ball-contained".into()
        } else {
            "violation".into()
        },
        witness,
        valuation: Some(format!("{}", x.sharp_norm())),
        trials,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Builtin, Expr};

    fn eps() -> GenNum {
        GenNum::alpha_int(1)
    }

    fn work() -> Trunc {
        Trunc::finite(DEFAULT_TRUNC)
    }

    #[test]
    fn make_point_examples() {
        let d = Domain::interval(0.0, 2.0);
        let p = make_point(vec![&GenNum::one() + &eps()], &d).unwrap();
        assert_eq!(p.shadow_point()[0].re, 1.0);
        assert_eq!(p.support_margin(), 0.5);

        // Shadow on the boundary.
        let err = make_point(vec![&GenNum::from_real(2.0) + &eps()], &d).unwrap_err();
        assert!(matches!(err, Error::NotCompactlySupported { .. }));

        // No shadow at all.
        let err = make_point(vec![GenNum::alpha_int(-1)], &d).unwrap_err();
        assert!(matches!(err, Error::NotCompactlySupported { .. }));
    }

    #[test]
    fn pointvalue_examples() {
        let d = Domain::interval(0.0, 2.0);
        let u = kappa(GenFunc::unary(Expr::var(0).pow(2)), d.clone()).unwrap();
        let x = make_point(vec![&GenNum::one() + &eps()], &d).unwrap();
        let v = pointvalue(&u, &x, &work()).unwrap();
        assert_eq!(v, (&GenNum::one() + &eps()).pow(2).unwrap());
    }

    #[test]
    fn pointvalue_with_negligible_perturbation() {
        let d = Domain::interval(0.0, 2.0);
        let g = crate::net::Grid::default_grid();
        let pert = crate::net::sample_real(|e| e.powi(10), &g).unwrap();
        let u = kappa(GenFunc::unary(Expr::var(0).pow(2)), d.clone())
            .unwrap()
            .with_perturbation(pert);
        let x = make_point(vec![&GenNum::one() + &eps()], &d).unwrap();
        let out = pointvalue_with_report(&u, &x, &work()).unwrap();
        assert_eq!(out.value, (&GenNum::one() + &eps()).pow(2).unwrap());
        assert!(matches!(out.perturbation, Some(NetClass::Negligible { .. })));

        // A moderate perturbation is rejected.
        let bad = crate::net::sample_real(|e| 1.0 / e, &g).unwrap();
        let u = kappa(GenFunc::unary(Expr::var(0).pow(2)), d.clone())
            .unwrap()
            .with_perturbation(bad);
        assert!(matches!(
            pointvalue_with_report(&u, &x, &work()),
            Err(Error::IllFormedPerturbation)
        ));
    }

    #[test]
    fn kappa_rejects_non_classical_nodes() {
        let d = Domain::interval(0.0, 2.0);
        let err = kappa(GenFunc::unary(Expr::beta_norm_sq(Expr::var(0))), d).unwrap_err();
        assert!(matches!(err, Error::GrammarUnsupported { .. }));
    }

    #[test]
    fn kappa_is_multiplicative_on_polynomials() {
        let d = Domain::interval(0.0, 2.0);
        let f = GenFunc::unary(Expr::var(0).pow(2).add(Expr::real(1.0)));
        let g = GenFunc::unary(Expr::var(0).sub(Expr::real(0.5)));
        let fg = GenFunc::unary(f.body().clone().mul(g.body().clone()));
        let x = make_point(vec![&GenNum::one() + &eps()], &d).unwrap();
        let w = work();
        let lhs = pointvalue(&kappa(fg, d.clone()).unwrap(), &x, &w).unwrap();
        let a = pointvalue(&kappa(f, d.clone()).unwrap(), &x, &w).unwrap();
        let b = pointvalue(&kappa(g, d).unwrap(), &x, &w).unwrap();
        assert_eq!(lhs, a.checked_mul(&b).unwrap());
    }

    #[test]
    fn derivative_commutation_for_sin() {
        // kappa(cos) agrees with the sharp partial of kappa(sin).
        let d = Domain::interval(-1.0, 1.0);
        let x = make_point(vec![eps()], &d).unwrap();
        let w = work();
        let sin_f = GenFunc::unary(Expr::call(Builtin::Sin, Expr::var(0)));
        let cos_f = GenFunc::unary(Expr::call(Builtin::Cos, Expr::var(0)));
        let lhs = pointvalue(&kappa(cos_f, d.clone()).unwrap(), &x, &w).unwrap();
        let opts = crate::calculus::DerivOptions::default();
        let rhs = crate::calculus::partial(&sin_f, x.components(), 0, &opts)
            .unwrap()
            .value;
        let diff = &lhs - &rhs;
        assert!(diff.valuation().at_least_f64(opts.tau), "{diff}");
    }

    #[test]
    fn zero_probe_on_zero_expression() {
        let d = Domain::interval(-1.0, 1.0);
        let u = kappa(GenFunc::unary(Expr::real(0.0)), d).unwrap();
        let r = zero_probe(&u, 100, DEFAULT_SEED, &work());
        assert_eq!(r.verdict, "consistent-with-zero");
        assert!(r.witness.is_none());
    }

    #[test]
    fn zero_probe_finds_scale_witness() {
        // U = alpha(5) * x: nonzero with pointvalues of valuation <= 13.
        let d = Domain::interval(-1.0, 1.0);
        let u = kappa(
            GenFunc::unary(Expr::constant(GenNum::alpha_int(5)).mul(Expr::var(0))),
            d,
        )
        .unwrap();
        let r = zero_probe(&u, 100, DEFAULT_SEED, &work());
        assert_eq!(r.verdict, "witness-found");
        let v: f64 = r.valuation.as_deref().unwrap().parse().unwrap_or(f64::NAN);
        assert!(v <= 13.0, "witness valuation {v}");
    }

    #[test]
    fn zero_probe_on_syntactically_nonzero_zero() {
        let d = Domain::interval(-1.0, 1.0);
        let u = kappa(GenFunc::unary(Expr::var(0).sub(Expr::var(0))), d).unwrap();
        let r = zero_probe(&u, 50, DEFAULT_SEED, &work());
        assert_eq!(r.verdict, "consistent-with-zero");
    }

    #[test]
    fn ball_geometry_examples() {
        let d = Domain::interval(0.0, 2.0);
        let x = make_point(vec![&GenNum::one() + &eps()], &d).unwrap();
        let r = ball_geometry(&x, &d, 50, DEFAULT_SEED);
        assert_eq!(r.verdict, "ball-contained");
        assert!(x.sharp_norm() <= 1.0);
    }

    #[test]
    fn shadow_map_is_eventually_constant_on_sharp_sequences() {
        // x_n = x + alpha(n) converges sharply to x; shadows agree for
        // every n >= 1.
        let x = &GenNum::one() + &eps();
        let sx = x.shadow().unwrap();
        for n in 1..10 {
            let xn = &x + &GenNum::alpha_int(n);
            assert_eq!(xn.shadow().unwrap(), sx);
        }
    }
}
