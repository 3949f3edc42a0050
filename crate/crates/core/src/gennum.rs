//! Exact arithmetic on generalized numbers represented as truncated
//! asymptotic expansions `sum c * eps^e + O(eps^T)` with strictly
//! increasing rational exponents, together with the valuation, the
//! sharp norm and ultrametric, inversion, association and shadow,
//! modulus, the leading-coefficient order, and the euclidean inner
//! product.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exp::{Exp, Trunc};

/// Scalar coefficients; the imaginary part stays zero in real mode.
pub type Coef = Complex64;

/// Default working truncation when none is specified.
pub const DEFAULT_TRUNC: i64 = 32;

/// Exponents must stay `>= -P_MAX`; `alpha(r)` requires `|r| <= P_MAX`.
pub const P_MAX: i64 = 64;

/// A coefficient is dropped when its magnitude is below this fraction
/// of the largest raw coefficient magnitude at or below its exponent.
/// Exact-integer arithmetic never triggers it.
pub const COEF_REL_TOL: f64 = 1e-14;

/// A generalized number: a finite expansion plus an unknown tail of
/// order at least `trunc`. Canonical form: exponents strictly
/// increasing, all coefficients nonzero, every exponent below `trunc`.
#[derive(Clone, PartialEq, Debug)]
pub struct GenNum {
    terms: Vec<(Exp, Coef)>,
    trunc: Trunc,
}

/// The valuation of an expansion: the exponent of the leading term, or
/// a lower bound when the expansion is empty up to its truncation.
/// `AtLeast(Trunc::Infinite)` is the valuation of the exact zero.
#[derive(Clone, PartialEq, Debug)]
pub enum Valuation {
    Known(Exp),
    AtLeast(Trunc),
}

impl Valuation {
    /// Lower bound on the valuation as a truncation-order value.
    pub fn lower_bound(&self) -> Trunc {
        match self {
            Valuation::Known(r) => Trunc::Finite(r.clone()),
            Valuation::AtLeast(t) => t.clone(),
        }
    }

    pub fn known(&self) -> Option<&Exp> {
        match self {
            Valuation::Known(r) => Some(r),
            Valuation::AtLeast(_) => None,
        }
    }

    pub fn is_known(&self) -> bool {
        matches!(self, Valuation::Known(_))
    }

    /// True when the valuation is certainly `>= bound`.
    pub fn at_least(&self, bound: &Exp) -> bool {
        self.lower_bound() >= Trunc::Finite(bound.clone())
    }

    /// True when the valuation is certainly `>= tau` (float threshold).
    pub fn at_least_f64(&self, tau: f64) -> bool {
        self.lower_bound().to_f64() >= tau
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Known(r) => write!(f, "{r}"),
            Valuation::AtLeast(Trunc::Finite(t)) => write!(f, ">= {t}"),
            Valuation::AtLeast(Trunc::Infinite) => write!(f, "inf"),
        }
    }
}

/// The sharp norm `e^(-V)` of an expansion, reported exactly through
/// its valuation. When the valuation is only a lower bound the norm is
/// an upper bound and `bound_only` is set; comparisons must be done on
/// the valuation, never on the floating power.
#[derive(Clone, PartialEq, Debug)]
pub struct SharpValue {
    valuation: Valuation,
}

impl SharpValue {
    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    /// Floating value of `e^(-V)` (an upper bound when `bound_only`).
    pub fn norm(&self) -> f64 {
        match self.valuation.lower_bound() {
            Trunc::Finite(e) => (-e.to_f64()).exp(),
            Trunc::Infinite => 0.0,
        }
    }

    /// True when the underlying expansion was empty up to a finite
    /// truncation, so only `norm() <=` this value is known.
    pub fn bound_only(&self) -> bool {
        matches!(self.valuation, Valuation::AtLeast(Trunc::Finite(_)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.valuation, Valuation::AtLeast(Trunc::Infinite))
    }
}

impl fmt::Display for SharpValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.valuation {
            Valuation::Known(r) => {
                if r.is_zero() {
                    write!(f, "1 (valuation 0)")
                } else {
                    write!(f, "e^-{r} (valuation {r})")
                }
            }
            Valuation::AtLeast(Trunc::Finite(t)) => {
                write!(f, "<= e^-{t} (valuation >= {t})")
            }
            Valuation::AtLeast(Trunc::Infinite) => write!(f, "0 (valuation inf)"),
        }
    }
}

fn coef_is_finite(c: &Coef) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

impl GenNum {
    /// Canonicalize a raw term list: merge equal exponents, drop
    /// coefficients below the relative tolerance, drop terms absorbed
    /// by the truncation, sort ascending.
    ///
    /// The tolerance scale for a term is the largest raw coefficient
    /// magnitude at or below its exponent: cancellation dust always
    /// cancels against same-exponent terms, while legitimate small
    /// coefficients ahead of large high-order ones survive.
    pub fn normalize(raw: Vec<(Exp, Coef)>, trunc: Trunc) -> Result<GenNum> {
        for (_, c) in &raw {
            if !coef_is_finite(c) {
                return Err(Error::NonFiniteCoefficient);
            }
        }
        let mut sorted = raw;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));

        // Merge equal exponents, remembering the largest raw magnitude
        // that entered each merged coefficient.
        let mut merged: Vec<(Exp, Coef, f64)> = Vec::with_capacity(sorted.len());
        for (e, c) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == e => {
                    last.1 += c;
                    last.2 = last.2.max(c.norm());
                }
                _ => {
                    let n = c.norm();
                    merged.push((e, c, n));
                }
            }
        }

        let bound = Exp::from_int(-P_MAX);
        let mut running_scale = 0.0_f64;
        let mut terms = Vec::with_capacity(merged.len());
        for (e, c, raw_scale) in merged {
            running_scale = running_scale.max(raw_scale);
            if c.norm() <= COEF_REL_TOL * running_scale {
                continue;
            }
            if let Trunc::Finite(t) = &trunc {
                if e >= *t {
                    continue;
                }
            }
            if e < bound {
                return Err(Error::ExponentBoundViolated { exp: e });
            }
            terms.push((e, c));
        }
        Ok(GenNum { terms, trunc })
    }

    pub fn zero() -> GenNum {
        GenNum {
            terms: Vec::new(),
            trunc: Trunc::Infinite,
        }
    }

    /// The class `0 + O(eps^t)`: zero up to an unknown tail.
    pub fn zero_to(trunc: Trunc) -> GenNum {
        GenNum {
            terms: Vec::new(),
            trunc,
        }
    }

    pub fn one() -> GenNum {
        GenNum::from_real(1.0)
    }

    pub fn from_real(c: f64) -> GenNum {
        GenNum::from_coef(Coef::new(c, 0.0))
    }

    pub fn from_coef(c: Coef) -> GenNum {
        if c.norm() == 0.0 {
            return GenNum::zero();
        }
        GenNum {
            terms: vec![(Exp::zero(), c)],
            trunc: Trunc::Infinite,
        }
    }

    /// The scale element `eps^r`, an invertible unit of norm `e^(-r)`.
    pub fn alpha(r: Exp) -> Result<GenNum> {
        if r.abs() > Exp::from_int(P_MAX) {
            return Err(Error::ExponentBoundViolated { exp: r });
        }
        Ok(GenNum {
            terms: vec![(r, Coef::new(1.0, 0.0))],
            trunc: Trunc::Infinite,
        })
    }

    /// `alpha` with an integer exponent; panics only outside `|r| <= P_MAX`.
    pub fn alpha_int(r: i64) -> GenNum {
        GenNum::alpha(Exp::from_int(r)).expect("alpha exponent within bound")
    }

    /// The element of prescribed sharp norm `e^(-v)`. Norms in this
    /// model are always `e^(-V)` with `V` rational, where the
    /// beta-scale element coincides with `alpha(v)`.
    pub fn beta_of_valuation(v: Exp) -> Result<GenNum> {
        GenNum::alpha(v)
    }

    pub fn terms(&self) -> &[(Exp, Coef)] {
        &self.terms
    }

    pub fn trunc(&self) -> &Trunc {
        &self.trunc
    }

    /// True only for the exact zero (no terms, no unknown tail).
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc.is_infinite()
    }

    pub fn leading(&self) -> Option<(&Exp, &Coef)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// Coefficient at a given exponent (zero when absent).
    pub fn coef_at(&self, e: &Exp) -> Coef {
        match self.terms.binary_search_by(|(te, _)| te.cmp(e)) {
            Ok(i) => self.terms[i].1,
            Err(_) => Coef::new(0.0, 0.0),
        }
    }

    /// Lower bound for the valuation: leading exponent, else truncation.
    pub fn valuation_lower(&self) -> Trunc {
        match self.terms.first() {
            Some((e, _)) => Trunc::Finite(e.clone()),
            None => self.trunc.clone(),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Known(e.clone()),
            None => Valuation::AtLeast(self.trunc.clone()),
        }
    }

    pub fn sharp_norm(&self) -> SharpValue {
        SharpValue {
            valuation: self.valuation(),
        }
    }

    /// The sharp ultrametric `D(x, y) = e^(-V(x - y))`.
    pub fn sharp_distance(x: &GenNum, y: &GenNum) -> SharpValue {
        (x - y).sharp_norm()
    }

    pub fn checked_add(&self, other: &GenNum) -> Result<GenNum> {
        let trunc = self.trunc.min_with(&other.trunc);
        let mut raw = Vec::with_capacity(self.terms.len() + other.terms.len());
        raw.extend_from_slice(&self.terms);
        raw.extend_from_slice(&other.terms);
        GenNum::normalize(raw, trunc)
    }

    pub fn checked_mul(&self, other: &GenNum) -> Result<GenNum> {
        let vx = self.valuation_lower();
        let vy = other.valuation_lower();
        let trunc = self
            .trunc
            .plus(&vy)
            .min_with(&other.trunc.plus(&vx))
            .min_with(&self.trunc.plus(&other.trunc));
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if let Trunc::Finite(t) = &trunc {
                    if e >= *t {
                        continue;
                    }
                }
                raw.push((e, c1 * c2));
            }
        }
        GenNum::normalize(raw, trunc)
    }

    pub fn negate(&self) -> GenNum {
        GenNum {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Multiply by an exact scalar of the coefficient field.
    pub fn scale(&self, a: Coef) -> GenNum {
        if a.norm() == 0.0 {
            return GenNum::zero();
        }
        GenNum {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * a)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn scale_real(&self, a: f64) -> GenNum {
        self.scale(Coef::new(a, 0.0))
    }

    /// Shift all exponents by `dr` (multiplication by `eps^dr`).
    pub fn shift_exp(&self, dr: &Exp) -> Result<GenNum> {
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| (e + dr, *c))
            .collect::<Vec<_>>();
        GenNum::normalize(raw, self.trunc.shift(dr))
    }

    /// Drop terms at or above `t` and cap the truncation at `t`.
    pub fn truncate_at(&self, t: Trunc) -> GenNum {
        let trunc = self.trunc.min_with(&t);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| match &trunc {
                Trunc::Finite(b) => e < b,
                Trunc::Infinite => true,
            })
            .cloned()
            .collect();
        GenNum { terms, trunc }
    }

    pub fn pow(&self, k: u32) -> Result<GenNum> {
        let mut acc = GenNum::one();
        let mut base = self.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            k >>= 1;
            if k == 0 {
                return Ok(acc);
            }
            base = base.checked_mul(&base)?;
        }
    }

    /// Invert an expansion with a nonzero leading term. The result `y`
    /// satisfies `valuation(x*y - 1) >= out_trunc` (capped by what the
    /// truncation of `x` itself allows).
    pub fn invert(&self, out_trunc: Trunc) -> Result<GenNum> {
        let (r, c) = match self.leading() {
            Some((e, c)) => (e.clone(), *c),
            None => return Err(Error::NotInvertibleAtTruncation),
        };
        // The product contract x * y = 1 + O(eps^out) requires the
        // inverse itself to be known to O(eps^(out - r)); the unknown
        // tail of x caps this at O(eps^(trunc_x - 2r)).
        let cap = self.trunc.shift(&-&r).shift(&-&r);
        let t_out = out_trunc.shift(&-&r).min_with(&cap);

        // x = c eps^r (1 + u); invert the unit part by the geometric series.
        let inv_c = Coef::new(1.0, 0.0) / c;
        let unit = self.shift_exp(&-&r)?.scale(inv_c);
        let u = &unit - &GenNum::one();

        let s_t = t_out.shift(&r);
        let neg_u = u.negate().truncate_at(s_t.clone());
        let mut acc = GenNum::one().truncate_at(s_t.clone());
        let mut power = GenNum::one().truncate_at(s_t.clone());
        while !power.terms().is_empty() {
            power = power.checked_mul(&neg_u)?.truncate_at(s_t.clone());
            if power.terms().is_empty() {
                break;
            }
            acc = acc.checked_add(&power)?;
        }
        let res = acc.shift_exp(&-&r)?.scale(inv_c);
        Ok(res.truncate_at(t_out))
    }

    /// The shadow: the classical limit of the representative, defined
    /// for expansions with nonnegative valuation.
    pub fn shadow(&self) -> Result<Coef> {
        match self.valuation() {
            Valuation::Known(r) => {
                if r.is_negative() {
                    Err(Error::NotAssociated)
                } else {
                    Ok(self.coef_at(&Exp::zero()))
                }
            }
            Valuation::AtLeast(Trunc::Finite(t)) => {
                if t.is_negative() {
                    Err(Error::NotAssociated)
                } else {
                    Ok(Coef::new(0.0, 0.0))
                }
            }
            Valuation::AtLeast(Trunc::Infinite) => Ok(Coef::new(0.0, 0.0)),
        }
    }

    /// True when the expansion is certainly associated to zero, i.e.
    /// its valuation is positive.
    pub fn associated_zero(&self) -> bool {
        match self.valuation() {
            Valuation::Known(r) => !r.is_negative() && !r.is_zero(),
            Valuation::AtLeast(Trunc::Finite(t)) => !t.is_negative() && !t.is_zero(),
            Valuation::AtLeast(Trunc::Infinite) => true,
        }
    }

    pub fn conj(&self) -> GenNum {
        GenNum {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn re_part(&self) -> GenNum {
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), Coef::new(c.re, 0.0)))
            .collect();
        GenNum::normalize(raw, self.trunc.clone()).expect("re_part cannot fail")
    }

    pub fn im_part(&self) -> GenNum {
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), Coef::new(c.im, 0.0)))
            .collect();
        GenNum::normalize(raw, self.trunc.clone()).expect("im_part cannot fail")
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.im == 0.0)
    }

    /// The modulus `|x|`. Real expansions flip the sign of the whole
    /// expansion when the leading coefficient is negative (exact);
    /// complex expansions take the series square root of `x * conj(x)`.
    pub fn modulus(&self) -> Result<GenNum> {
        if self.is_exact_zero() {
            return Ok(GenNum::zero());
        }
        if self.terms.is_empty() {
            // Empty up to a finite truncation: the sign of the tail is
            // undetermined.
            return Err(Error::SignUndetermined);
        }
        if self.is_real() {
            let (_, c) = self.leading().expect("nonempty");
            if c.re >= 0.0 {
                Ok(self.clone())
            } else {
                Ok(self.negate())
            }
        } else {
            let sq = self.checked_mul(&self.conj())?;
            // x*conj(x) has real coefficients up to roundoff; scrub the
            // imaginary dust before taking the square root.
            sq.re_part().series_sqrt()
        }
    }

    /// Series square root of an expansion with positive real leading
    /// coefficient; exponents may be halved. The branch is fixed by a
    /// positive leading coefficient.
    pub fn series_sqrt(&self) -> Result<GenNum> {
        if self.terms.is_empty() {
            let trunc = match &self.trunc {
                Trunc::Finite(t) => Trunc::Finite(t.half()),
                Trunc::Infinite => Trunc::Infinite,
            };
            return Ok(GenNum::zero_to(trunc));
        }
        let (r, c) = self.leading().expect("nonempty");
        let (r, c) = (r.clone(), *c);
        if c.im != 0.0 || c.re <= 0.0 {
            return Err(Error::SignUndetermined);
        }
        let unit = self.shift_exp(&-&r)?.scale(Coef::new(1.0 / c.re, 0.0));
        let u = &unit - &GenNum::one();

        // sqrt(1 + u) by the binomial series, at the working truncation
        // when the input carries no truncation of its own.
        let s_t = if self.trunc.is_infinite() && !u.terms().is_empty() {
            Trunc::finite(DEFAULT_TRUNC)
        } else {
            self.trunc.clone()
        };
        let mut acc = GenNum::one().truncate_at(s_t.clone());
        let mut power = GenNum::one().truncate_at(s_t.clone());
        let mut binom = 1.0_f64;
        let mut k = 0u32;
        while !power.terms().is_empty() || k == 0 {
            k += 1;
            binom *= (0.5 - f64::from(k - 1)) / f64::from(k);
            power = power.checked_mul(&u)?.truncate_at(s_t.clone());
            if power.terms().is_empty() {
                break;
            }
            acc = acc.checked_add(&power.scale_real(binom))?;
        }
        let res = acc.shift_exp(&r.half())?.scale_real(c.re.sqrt());
        Ok(res.truncate_at(match &s_t {
            Trunc::Finite(t) => Trunc::Finite(t.clone()),
            Trunc::Infinite => Trunc::Infinite,
        }))
    }

    /// Leading-coefficient order: `self <= other` iff the difference is
    /// zero or has positive leading coefficient. Real mode only.
    pub fn leq(&self, other: &GenNum) -> Result<bool> {
        let d = other - self;
        match d.leading() {
            None => {
                if d.trunc().is_infinite() {
                    Ok(true)
                } else {
                    Err(Error::OrderUndetermined)
                }
            }
            Some((_, c)) => {
                if c.im != 0.0 {
                    return Err(Error::OrderUndetermined);
                }
                Ok(c.re > 0.0)
            }
        }
    }
}

/// Hermitian inner product `sum x_i * conj(y_i)`.
pub fn inner_product(x: &[GenNum], y: &[GenNum]) -> Result<GenNum> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut acc = GenNum::zero();
    for (a, b) in x.iter().zip(y) {
        acc = acc.checked_add(&a.checked_mul(&b.conj())?)?;
    }
    Ok(acc)
}

/// Euclidean module `(sum |x_i|^2)^(1/2)`.
pub fn euclidean_module(x: &[GenNum]) -> Result<GenNum> {
    let mut acc = GenNum::zero();
    for a in x {
        acc = acc.checked_add(&a.checked_mul(&a.conj())?)?;
    }
    acc.re_part().series_sqrt()
}

impl Add for &GenNum {
    type Output = GenNum;
    fn add(self, rhs: &GenNum) -> GenNum {
        self.checked_add(rhs).expect("addition cannot overflow bounds")
    }
}

impl Sub for &GenNum {
    type Output = GenNum;
    fn sub(self, rhs: &GenNum) -> GenNum {
        self.checked_add(&rhs.negate())
            .expect("subtraction cannot overflow bounds")
    }
}

impl Mul for &GenNum {
    type Output = GenNum;
    fn mul(self, rhs: &GenNum) -> GenNum {
        self.checked_mul(rhs).expect("product within exponent bounds")
    }
}

impl Neg for &GenNum {
    type Output = GenNum;
    fn neg(self) -> GenNum {
        self.negate()
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    write!(f, "{v}")
}

fn write_coef(f: &mut fmt::Formatter<'_>, c: &Coef) -> fmt::Result {
    if c.im == 0.0 {
        write_real(f, c.re)
    } else if c.im < 0.0 {
        write!(f, "({}-{}i)", c.re, -c.im)
    } else {
        write!(f, "({}+{}i)", c.re, c.im)
    }
}

fn write_eps(f: &mut fmt::Formatter<'_>, e: &Exp) -> fmt::Result {
    if *e == Exp::from_int(1) {
        write!(f, "eps")
    } else {
        write!(f, "eps^{e}")
    }
}

impl fmt::Display for GenNum {
    /// Canonical literal form, bit-exact round trip with the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (e, c)) in self.terms.iter().enumerate() {
                let real = c.im == 0.0;
                if i == 0 {
                    if real && c.re < 0.0 {
                        write!(f, "-")?;
                    }
                } else if real && c.re < 0.0 {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                let mag = if real { Coef::new(c.re.abs(), 0.0) } else { *c };
                if e.is_zero() {
                    write_coef(f, &mag)?;
                } else if real && mag.re == 1.0 {
                    write_eps(f, e)?;
                } else {
                    write_coef(f, &mag)?;
                    write!(f, "*")?;
                    write_eps(f, e)?;
                }
            }
        }
        if let Trunc::Finite(t) = &self.trunc {
            write!(f, " + O(eps^{t})")?;
        }
        Ok(())
    }
}
