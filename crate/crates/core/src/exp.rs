//! Exact rational exponents of the scale parameter, and truncation
//! orders (an exponent or `+inf`). Exponents keep a reduced
//! small-integer representation on the hot path and spill to
//! arbitrary-precision rationals only when they must.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// A dimensionless exponent of `eps`, an exact rational so that all
/// valuation and norm comparisons are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exp(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced fraction with positive denominator.
    Small { num: i64, den: i64 },
    Big(Box<BigRational>),
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Reduce a fraction and keep the small representation if it fits.
fn make(num: i128, den: i128) -> Repr {
    debug_assert!(den != 0);
    let sign = if den < 0 { -1 } else { 1 };
    let g = gcd(num, den) * sign;
    let (num, den) = (num / g, den / g);
    if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
        Repr::Small { num: n, den: d }
    } else {
        Repr::Big(Box::new(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }
}

impl Exp {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Exp(make(numer as i128, denom as i128))
    }

    pub fn from_int(n: i64) -> Self {
        Exp(Repr::Small { num: n, den: 1 })
    }

    pub fn zero() -> Self {
        Exp::from_int(0)
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(r) => (**r).clone(),
        }
    }

    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Exp(Repr::Small { num: n, den: d });
        }
        Exp(Repr::Big(Box::new(r)))
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num == 0,
            Repr::Big(r) => r.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Halve the exponent (used for square roots and shifted probes).
    pub fn half(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => Exp(make(*num as i128, 2 * *den as i128)),
            Repr::Big(r) => {
                Exp::from_big((**r).clone() / BigRational::from_integer(BigInt::from(2)))
            }
        }
    }

    pub fn double(&self) -> Self {
        self.scale_int(2)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        match &self.0 {
            Repr::Small { num, den } => Exp(make(*num as i128 * k as i128, *den as i128)),
            Repr::Big(r) => {
                Exp::from_big((**r).clone() * BigRational::from_integer(BigInt::from(k)))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Add for &Exp {
    type Output = Exp;
    fn add(self, rhs: &Exp) -> Exp {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: n1, den: d1 }, Repr::Small { num: n2, den: d2 }) => {
                let (n1, d1, n2, d2) = (*n1 as i128, *d1 as i128, *n2 as i128, *d2 as i128);
                Exp(make(n1 * d2 + n2 * d1, d1 * d2))
            }
            _ => Exp::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Exp {
    type Output = Exp;
    fn sub(self, rhs: &Exp) -> Exp {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: n1, den: d1 }, Repr::Small { num: n2, den: d2 }) => {
                let (n1, d1, n2, d2) = (*n1 as i128, *d1 as i128, *n2 as i128, *d2 as i128);
                Exp(make(n1 * d2 - n2 * d1, d1 * d2))
            }
            _ => Exp::from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl Neg for &Exp {
    type Output = Exp;
    fn neg(self) -> Exp {
        match &self.0 {
            Repr::Small { num, den } => Exp(Repr::Small {
                num: -*num,
                den: *den,
            }),
            Repr::Big(r) => Exp::from_big(-(**r).clone()),
        }
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: n1, den: d1 }, Repr::Small { num: n2, den: d2 }) => {
                // Denominators are positive: cross-multiply in i128.
                (*n1 as i128 * *d2 as i128).cmp(&(*n2 as i128 * *d1 as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den } => {
                if *den == 1 {
                    write!(f, "{num}")
                } else {
                    write!(f, "{num}/{den}")
                }
            }
            Repr::Big(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Exp {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        BigRational::from_str(s)
            .map(Exp::from_big)
            .map_err(|e| format!("invalid exponent {s:?}: {e}"))
    }
}

impl From<i64> for Exp {
    fn from(n: i64) -> Self {
        Exp::from_int(n)
    }
}

/// A truncation order: the expansion is exact below this exponent.
/// `Infinite` marks an exact expansion with no unknown tail.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Trunc {
    Finite(Exp),
    Infinite,
}

impl Trunc {
    pub fn finite(e: impl Into<Exp>) -> Self {
        Trunc::Finite(e.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Trunc::Infinite)
    }

    pub fn as_finite(&self) -> Option<&Exp> {
        match self {
            Trunc::Finite(e) => Some(e),
            Trunc::Infinite => None,
        }
    }

    /// Shift by a rational exponent; `inf + r = inf`.
    pub fn shift(&self, by: &Exp) -> Trunc {
        match self {
            Trunc::Finite(e) => Trunc::Finite(e + by),
            Trunc::Infinite => Trunc::Infinite,
        }
    }

    /// Sum of two truncation orders (`inf` absorbs).
    pub fn plus(&self, other: &Trunc) -> Trunc {
        match (self, other) {
            (Trunc::Finite(a), Trunc::Finite(b)) => Trunc::Finite(a + b),
            _ => Trunc::Infinite,
        }
    }

    pub fn min_with(&self, other: &Trunc) -> Trunc {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Trunc::Finite(e) => e.to_f64(),
            Trunc::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for Trunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Trunc {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Trunc::Infinite, Trunc::Infinite) => Ordering::Equal,
            (Trunc::Infinite, Trunc::Finite(_)) => Ordering::Greater,
            (Trunc::Finite(_), Trunc::Infinite) => Ordering::Less,
            (Trunc::Finite(a), Trunc::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Trunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trunc::Finite(e) => write!(f, "{e}"),
            Trunc::Infinite => write!(f, "inf"),
        }
    }
}

impl From<Exp> for Trunc {
    fn from(e: Exp) -> Self {
        Trunc::Finite(e)
    }
}

impl From<i64> for Trunc {
    fn from(n: i64) -> Self {
        Trunc::Finite(Exp::from_int(n))
    }
}

impl FromStr for Trunc {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "inf" {
            Ok(Trunc::Infinite)
        } else {
            Exp::from_str(s).map(Trunc::Finite)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rational_order() {
        let a = Exp::new(1, 2);
        let b = Exp::new(2, 4);
        assert_eq!(a, b);
        assert!(Exp::new(1, 3) < a);
        assert_eq!(&a + &a, Exp::from_int(1));
        assert_eq!((&a - &Exp::from_int(1)).to_f64(), -0.5);
        assert_eq!(Exp::new(-3, -6), Exp::new(1, 2));
        assert_eq!(Exp::new(7, 3).abs(), Exp::new(7, 3));
        assert_eq!(Exp::new(-7, 3).abs(), Exp::new(7, 3));
    }

    #[test]
    fn overflow_spills_to_big() {
        let huge = Exp::new(i64::MAX, 3);
        let sum = &huge + &huge;
        assert_eq!(&sum - &huge, huge);
        assert!(sum > huge);
    }

    #[test]
    fn trunc_ordering_and_shift() {
        let t = Trunc::finite(5);
        assert!(t < Trunc::Infinite);
        assert_eq!(t.shift(&Exp::from_int(-2)), Trunc::finite(3));
        assert_eq!(Trunc::Infinite.shift(&Exp::from_int(3)), Trunc::Infinite);
        assert_eq!(t.plus(&Trunc::finite(1)), Trunc::finite(6));
        assert_eq!(t.plus(&Trunc::Infinite), Trunc::Infinite);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3", "-1/2", "7/3", "0"] {
            let e: Exp = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert_eq!("inf".parse::<Trunc>().unwrap(), Trunc::Infinite);
        assert_eq!("32".parse::<Trunc>().unwrap(), Trunc::finite(32));
    }
}
