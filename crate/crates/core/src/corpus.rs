//! Seeded random generators shared by the verification suites, the
//! property tests and the benchmarks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::exp::{Exp, Trunc};
use crate::expr::{Expr, GenFunc};
use crate::gennum::{Coef, GenNum};

/// Random expansion: up to `max_terms` terms, leading exponent a
/// quarter-integer in `[lo, hi]`, gaps of at least one half, and
/// coefficient magnitudes in `[0.5, 4]`. The gap and magnitude bounds
/// keep the leading term dominant on the default sampling grid.
pub fn random_gennum(rng: &mut ChaCha8Rng, max_terms: usize, lo: i64, hi: i64) -> GenNum {
    let terms = rng.gen_range(1..=max_terms.max(1));
    let mut exp = Exp::new(rng.gen_range(lo * 4..=hi * 4), 4);
    let mut raw = Vec::with_capacity(terms);
    for _ in 0..terms {
        raw.push((exp.clone(), random_coef(rng)));
        // Gap in [1/2, 3].
        exp = &exp + &Exp::new(rng.gen_range(1..=6), 2);
    }
    GenNum::normalize(raw, Trunc::Infinite).expect("exponents within bounds")
}

/// Random nonzero real coefficient with magnitude in `[0.5, 4]`.
pub fn random_coef(rng: &mut ChaCha8Rng) -> Coef {
    let mag = rng.gen_range(0.5..4.0);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Coef::new(sign * mag, 0.0)
}

/// Random base point with a nonzero shadow: constant term plus up to
/// two moderate higher-order terms at half-integer exponents with gaps
/// of at least one. Perturbation magnitudes stay below one so that
/// inverse and composite expansions keep tame coefficient growth.
pub fn random_base_point(rng: &mut ChaCha8Rng) -> GenNum {
    let lead = {
        let mag = rng.gen_range(0.5..2.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        Coef::new(sign * mag, 0.0)
    };
    let mut raw = vec![(Exp::zero(), lead)];
    let extra = rng.gen_range(0..=2);
    let mut exp = Exp::new(rng.gen_range(2..=5), 2);
    for _ in 0..extra {
        let mag = rng.gen_range(0.1..1.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        raw.push((exp.clone(), Coef::new(sign * mag, 0.0)));
        exp = &exp + &Exp::new(rng.gen_range(2..=5), 2);
    }
    GenNum::normalize(raw, Trunc::Infinite).expect("bounded exponents")
}

/// Random point of known positive valuation `m/2`, `m in 1..=12`.
pub fn random_scale_point(rng: &mut ChaCha8Rng) -> GenNum {
    let lead = Exp::new(rng.gen_range(1..=12), 2);
    let mut raw = vec![(lead.clone(), random_coef(rng))];
    if rng.gen_bool(0.5) {
        raw.push((&lead + &Exp::new(rng.gen_range(1..=4), 2), random_coef(rng)));
    }
    GenNum::normalize(raw, Trunc::Infinite).expect("bounded exponents")
}

/// Random polynomial of degree `1..=max_deg` with small integer
/// coefficients (and occasionally a scale-element coefficient).
pub fn random_polynomial(rng: &mut ChaCha8Rng, max_deg: u32) -> GenFunc {
    let deg = rng.gen_range(1..=max_deg);
    let mut body: Option<Expr> = None;
    for k in 0..=deg {
        let c = if rng.gen_bool(0.15) {
            Expr::constant(GenNum::alpha_int(rng.gen_range(1..=2)))
        } else {
            let v = rng.gen_range(-3..=3i32);
            if v == 0 && k != deg {
                continue;
            }
            let v = if v == 0 { 1 } else { v };
            Expr::real(f64::from(v))
        };
        let term = if k == 0 {
            c
        } else {
            c.mul(Expr::var(0).pow(k as i32))
        };
        body = Some(match body {
            None => term,
            Some(acc) => acc.add(term),
        });
    }
    GenFunc::unary(body.expect("degree at least one"))
}
