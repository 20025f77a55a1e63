//! Small numerical helpers: golden-section search and power-law fitting.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// `(sqrt(5) - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenSection {
    /// Stop once the bracket is narrower than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GoldenSection {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
        }
    }
}

impl GoldenSection {
    /// Minimizes over `[lo, hi]` using only pairwise comparisons:
    /// `compare(x, y)` orders `f(x)` against `f(y)`. Passing a comparator
    /// rather than `f` lets callers evaluate `f(x) - f(y)` in a form that
    /// does not cancel near the minimum, which is what limits plain
    /// value comparisons to `sqrt(eps)` accuracy in `x`.
    pub fn minimize_by<C>(&self, lo: f64, hi: f64, mut compare: C) -> Result<f64>
    where
        C: FnMut(f64, f64) -> Ordering,
    {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidBracket {
                lo,
                hi,
                reason: "need finite lo < hi".into(),
            });
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::param("tol", "must be > 0"));
        }
        let (mut a, mut b) = (lo, hi);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        for _ in 0..self.max_iter {
            if b - a <= self.tol || c >= d {
                break;
            }
            if compare(c, d) == Ordering::Less {
                b = d;
                d = c;
                c = b - INV_PHI * (b - a);
            } else {
                a = c;
                c = d;
                d = a + INV_PHI * (b - a);
            }
        }
        Ok(0.5 * (a + b))
    }

    /// Plain value-comparison variant.
    pub fn minimize<F>(&self, lo: f64, hi: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> f64,
    {
        self.minimize_by(lo, hi, |x, y| f(x).total_cmp(&f(y)))
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "loglog_slope: length mismatch");
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
