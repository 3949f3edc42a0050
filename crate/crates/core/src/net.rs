//! Numerical backend: representatives sampled on geometric grids in
//! the scale parameter, empirical valuation estimation by log-log
//! regression, and moderate/negligible classification. This backend is
//! independent of the expansion arithmetic and cross-validates it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gennum::{Coef, GenNum};

/// Magnitudes at or below this floor are treated as numerical zero.
pub const UNDERFLOW_FLOOR: f64 = 1e-290;

/// Default slope threshold above which a net counts as negligible.
pub const DEFAULT_NEGLIGIBILITY_SLOPE: f64 = 8.0;

/// RMS residual bound (in log space) separating power-law nets from
/// `Neither`.
pub const FIT_RESIDUAL_BOUND: f64 = 0.1;

/// A geometric sampling grid `eps_k = base^k`, `k = k_min ..= k_max`.
#[derive(Clone, PartialEq, Debug)]
pub struct Grid {
    base: f64,
    k_min: i32,
    k_max: i32,
}

impl Grid {
    pub fn new(base: f64, k_min: i32, k_max: i32) -> Result<Grid> {
        if !(base > 0.0 && base < 1.0) || !base.is_finite() {
            return Err(Error::NonFiniteSample { eps: base });
        }
        if k_max - k_min < 8 {
            return Err(Error::AllBelowFloor);
        }
        Ok(Grid { base, k_min, k_max })
    }

    /// Base 1/2, k = 6..24: nineteen points over five decades without
    /// underflow for exponents up to 8 in absolute value.
    pub fn default_grid() -> Grid {
        Grid {
            base: 0.5,
            k_min: 6,
            k_max: 24,
        }
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn len(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (self.k_min..=self.k_max).map(move |k| self.base.powi(k))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.base, self.k_min, self.k_max)
    }
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("expected base,kmin,kmax, got {s:?}"));
        }
        let base: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
        let k_min: i32 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
        let k_max: i32 = parts[2].trim().parse().map_err(|e| format!("{e}"))?;
        Grid::new(base, k_min, k_max).map_err(|e| e.to_string())
    }
}

/// A sampled representative: one value per grid point.
#[derive(Clone, PartialEq, Debug)]
pub struct Net {
    grid: Grid,
    values: Vec<Coef>,
    truncation_only: bool,
}

impl Net {
    pub fn new(grid: Grid, values: Vec<Coef>) -> Result<Net> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                left: grid.len(),
                right: values.len(),
            });
        }
        for (eps, v) in grid.points().zip(&values) {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteSample { eps });
            }
        }
        Ok(Net {
            grid,
            values,
            truncation_only: false,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Coef] {
        &self.values
    }

    /// Set when the net came from an expansion with no terms, i.e. it
    /// carries truncation information only.
    pub fn truncation_only(&self) -> bool {
        self.truncation_only
    }

    /// Pointwise sum (grids must match).
    pub fn add(&self, other: &Net) -> Result<Net> {
        if self.grid != other.grid {
            return Err(Error::DimensionMismatch {
                left: self.values.len(),
                right: other.values.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Net::new(self.grid.clone(), values)
    }

    /// Serialize as CSV with header `eps,re,im`, one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,re,im\n");
        for (eps, v) in self.grid.points().zip(&self.values) {
            out.push_str(&format!("{eps},{},{}\n", v.re, v.im));
        }
        out
    }

    /// Parse the CSV net format. The grid is reconstructed from the
    /// sampled eps column.
    pub fn from_csv(text: &str) -> Result<Net> {
        let mut eps = Vec::new();
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if i == 0 && line.starts_with("eps") {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::Parse {
                    offset: i,
                    message: format!("expected 3 columns, got {}", cols.len()),
                });
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| Error::Parse {
                    offset: i,
                    message: format!("invalid number {s:?}"),
                })
            };
            eps.push(parse(cols[0])?);
            values.push(Coef::new(parse(cols[1])?, parse(cols[2])?));
        }
        if eps.len() < 2 {
            return Err(Error::AllBelowFloor);
        }
        // Recover base and k-range from the first two eps values.
        let ratio = eps[1] / eps[0];
        let base = ratio;
        let k_min = (eps[0].ln() / base.ln()).round() as i32;
        let grid = Grid::new(base, k_min, k_min + eps.len() as i32 - 1)?;
        Net::new(grid, values)
    }
}

/// Outcome of the growth classification of a net.
#[derive(Clone, PartialEq, Debug)]
pub enum NetClass {
    /// Bounded by `C eps^(-p)` with the given `p >= 0`.
    Moderate { p: f64 },
    /// Log-log slope at or above the negligibility threshold.
    Negligible { slope: f64 },
    /// No power-law fit (oscillatory or interleaved nets).
    Neither { residual: f64 },
}

impl fmt::Display for NetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetClass::Moderate { p } => write!(f, "moderate (p = {p:.3})"),
            NetClass::Negligible { slope } => write!(f, "negligible (slope = {slope:.3})"),
            NetClass::Neither { residual } => write!(f, "neither (residual = {residual:.3})"),
        }
    }
}

/// Sample a scalar function of eps on a grid.
pub fn sample(f: impl Fn(f64) -> Coef, grid: &Grid) -> Result<Net> {
    let mut values = Vec::with_capacity(grid.len());
    for eps in grid.points() {
        let v = f(eps);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFiniteSample { eps });
        }
        values.push(v);
    }
    Net::new(grid.clone(), values)
}

/// Sample a real-valued function of eps.
pub fn sample_real(f: impl Fn(f64) -> f64, grid: &Grid) -> Result<Net> {
    sample(|eps| Coef::new(f(eps), 0.0), grid)
}

/// Evaluate the expansion part of a generalized number at a concrete
/// scale value (the unknown tail is ignored).
pub fn eval_gennum_at(x: &GenNum, eps: f64) -> Coef {
    let mut acc = Coef::new(0.0, 0.0);
    for (e, c) in x.terms() {
        acc += c * eps.powf(e.to_f64());
    }
    acc
}

/// Evaluate an expansion exactly at each grid point (the unknown tail
/// is ignored; an empty expansion yields the zero net flagged
/// truncation-only).
pub fn from_gennum(x: &GenNum, grid: &Grid) -> Net {
    let values = grid.points().map(|eps| eval_gennum_at(x, eps)).collect();
    let mut net = Net::new(grid.clone(), values).expect("finite by construction");
    net.truncation_only = x.terms().is_empty();
    net
}

/// Least-squares fit of log|value| against log eps over the deepest
/// samples. Returns `(slope, rms_residual, points_used)`.
fn log_log_fit(net: &Net) -> Result<(f64, f64, usize)> {
    let pairs: Vec<(f64, f64)> = net
        .grid
        .points()
        .zip(&net.values)
        .filter(|(_, v)| v.norm() > UNDERFLOW_FLOOR)
        .map(|(eps, v)| (eps.ln(), v.norm().ln()))
        .collect();
    if pairs.len() < 8 {
        return Err(Error::AllBelowFloor);
    }
    // Subdominant terms pollute the shallow end of the grid; fit on the
    // deepest half (but never fewer than 8 points).
    let keep = (pairs.len() / 2).max(8).min(pairs.len());
    let tail = &pairs[pairs.len() - keep..];

    let n = tail.len() as f64;
    let sx: f64 = tail.iter().map(|(x, _)| x).sum();
    let sy: f64 = tail.iter().map(|(_, y)| y).sum();
    let sxx: f64 = tail.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = tail.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let rms = (tail
        .iter()
        .map(|(x, y)| {
            let d = y - (slope * x + intercept);
            d * d
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok((slope, rms, tail.len()))
}

/// Estimate the valuation of a net as the fitted log-log slope. For a
/// net sampled from an expansion with known valuation `r`, the estimate
/// lands within 0.05 of `r` on the default grid.
pub fn estimate_valuation(net: &Net) -> Result<f64> {
    let (slope, _, _) = log_log_fit(net)?;
    Ok(slope)
}

/// Classify a net as moderate, negligible or neither. All samples
/// below the floor count as negligible of unbounded slope.
pub fn classify(net: &Net, negligibility_slope: f64) -> NetClass {
    match log_log_fit(net) {
        Err(_) => NetClass::Negligible {
            slope: f64::INFINITY,
        },
        Ok((slope, rms, _)) => {
            if rms > FIT_RESIDUAL_BOUND {
                NetClass::Neither { residual: rms }
            } else if slope >= negligibility_slope {
                NetClass::Negligible { slope }
            } else {
                NetClass::Moderate {
                    p: (-slope).max(0.0),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exp::{Exp, Trunc};

    #[test]
    fn sample_examples() {
        let g = Grid::default_grid();
        let net = sample_real(|e| e * e, &g).unwrap();
        assert_eq!(net.values().len(), 19);
        assert!((net.values()[0].re - 0.5f64.powi(6).powi(2)).abs() < 1e-18);
        let c = sample_real(|_| 1.0, &g).unwrap();
        assert!(c.values().iter().all(|v| v.re == 1.0));
        let growing = sample_real(|e| 1.0 / e, &g).unwrap();
        assert!(growing.values().last().unwrap().re > growing.values()[0].re);
        assert!(matches!(
            sample_real(|e| 1.0 / (e - e), &g),
            Err(Error::NonFiniteSample { .. })
        ));
    }

    #[test]
    fn estimate_valuation_on_exact_powers() {
        let g = Grid::default_grid();
        // The regression itself is the oracle: exact powers give exact slopes.
        for r in [-1.0_f64, 0.0, 2.0] {
            let net = sample_real(|e| e.powf(r), &g).unwrap();
            assert!((estimate_valuation(&net).unwrap() - r).abs() < 1e-9);
        }
        let x = GenNum::normalize(
            vec![
                (Exp::new(1, 2), Coef::new(3.0, 0.0)),
                (Exp::from_int(1), Coef::new(1.0, 0.0)),
            ],
            Trunc::Infinite,
        )
        .unwrap();
        let est = estimate_valuation(&from_gennum(&x, &g)).unwrap();
        assert!((est - 0.5).abs() < 0.05, "estimate {est}");
        let c = sample_real(|_| 7.0, &g).unwrap();
        assert!(estimate_valuation(&c).unwrap().abs() < 0.05);
    }

    #[test]
    fn classify_examples() {
        let g = Grid::default_grid();
        let neg = sample_real(|e| e.powi(10), &g).unwrap();
        match classify(&neg, 5.0) {
            NetClass::Negligible { slope } => assert!((slope - 10.0).abs() < 0.1),
            other => panic!("expected negligible, got {other:?}"),
        }
        let moderate = sample_real(|e| e.powi(-2), &g).unwrap();
        match classify(&moderate, DEFAULT_NEGLIGIBILITY_SLOPE) {
            NetClass::Moderate { p } => assert!((p - 2.0).abs() < 0.1),
            other => panic!("expected moderate, got {other:?}"),
        }
        let osc = sample_real(|e| (1.0 / e) * (1.0 / e).sin().abs().max(1e-6), &g).unwrap();
        assert!(matches!(
            classify(&osc, DEFAULT_NEGLIGIBILITY_SLOPE),
            NetClass::Neither { .. }
        ));
    }

    #[test]
    fn from_gennum_examples() {
        let g = Grid::default_grid();
        let net = from_gennum(&GenNum::alpha_int(2), &g);
        for (eps, v) in g.points().zip(net.values()) {
            assert!((v.re - eps * eps).abs() < 1e-18);
        }
        let z = from_gennum(&GenNum::zero_to(Trunc::finite(5)), &g);
        assert!(z.truncation_only());
        assert!(z.values().iter().all(|v| v.norm() == 0.0));
        assert!(matches!(
            classify(&z, DEFAULT_NEGLIGIBILITY_SLOPE),
            NetClass::Negligible { .. }
        ));
    }

    #[test]
    fn csv_round_trip() {
        let g = Grid::default_grid();
        let net = sample_real(|e| 3.0 * e.sqrt(), &g).unwrap();
        let text = net.to_csv();
        assert!(text.starts_with("eps,re,im\n"));
        let back = Net::from_csv(&text).unwrap();
        assert_eq!(back.values().len(), net.values().len());
        for (a, b) in back.values().iter().zip(net.values()) {
            assert_eq!(a, b);
        }
    }
}
