//! Numerical estimates of the Hausdorff dimension of the set of points whose
//! digits all lie in `[min_digit, max_digit]`.
//!
//! The dimension is the `s` at which the pressure of the weighted system of
//! inverse branches `x -> N/(k+x)` vanishes. Two independent methods locate
//! it: the spectral radius of a collocated transfer operator, and the growth
//! factor of `sum |I_n|^s` over enumerated words.

mod collocation;
mod quadrature;
mod words;

use serde::Serialize;

pub use collocation::{estimate_dim_collocation, spectral_radius, DEFAULT_GRID};
pub use words::{default_depth, estimate_dim_words, growth_factor, DEFAULT_WORD_BUDGET};

use crate::bounds::{jarnik_lower, jarnik_upper, BoundValue};
use crate::error::{Error, Result};
use crate::expansion::NParam;

pub const DEFAULT_S_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlphabetSpec {
    #[serde(rename = "N")]
    pub n: NParam,
    pub min_digit: u64,
    pub max_digit: u64,
}

impl AlphabetSpec {
    pub fn new(n: NParam, min_digit: u64, max_digit: u64) -> Result<Self> {
        if min_digit < n.get() {
            return Err(Error::range("min_digit", min_digit, n));
        }
        if max_digit < min_digit {
            return Err(Error::range("max_digit", max_digit, min_digit));
        }
        Ok(AlphabetSpec {
            n,
            min_digit,
            max_digit,
        })
    }

    /// The alphabet `{N, ..., M}`.
    pub fn bounded(n: NParam, m: u64) -> Result<Self> {
        Self::new(n, n.get(), m)
    }

    pub fn branches(&self) -> u64 {
        self.max_digit - self.min_digit + 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.min_digit == self.max_digit
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Collocation,
    WordEnumeration,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Collocation => "COLLOCATION",
            Method::WordEnumeration => "WORD_ENUMERATION",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Collocation degree, for the collocation method.
    pub grid: Option<usize>,
    /// Word length, for word enumeration.
    pub depth: Option<usize>,
    /// Bisection steps on `s`.
    pub iterations: usize,
    /// `|rho(s) - 1|` at the estimate for collocation; the change of the
    /// per-level root between the last two depths for word enumeration.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub value: f64,
    pub tolerance: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl DimensionEstimate {
    fn degenerate(method: Method, grid: Option<usize>, depth: Option<usize>) -> Self {
        DimensionEstimate {
            value: 0.0,
            tolerance: f64::EPSILON,
            method,
            diagnostics: Diagnostics {
                grid,
                depth,
                iterations: 0,
                residual: 0.0,
            },
        }
    }
}

/// Bisection for the root of a function decreasing on `[lo, hi]`, stopping
/// once the bracket is no wider than `2 tol`. Returns the midpoint and the
/// number of halvings.
pub(crate) fn bisect_decreasing(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut positive: impl FnMut(f64) -> Result<bool>,
) -> Result<(f64, usize)> {
    let mut steps = 0;
    while hi - lo > 2.0 * tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if positive(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    Ok((0.5 * (lo + hi), steps))
}

fn check_tol(s_tol: f64) -> Result<()> {
    if !(s_tol > 0.0 && s_tol < 1.0) {
        return Err(Error::domain("s_tol", s_tol, "(0, 1)"));
    }
    Ok(())
}

/// Outcome of comparing a dimension estimate with the bounded-digit bracket.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    #[serde(rename = "N")]
    pub n: NParam,
    #[serde(rename = "M")]
    pub m: u64,
    pub lower: BoundValue,
    pub upper: BoundValue,
    pub estimate: f64,
    pub tolerance: f64,
    /// Whether the lower side was tested: its hypothesis holds and it is
    /// above zero.
    pub lower_checked: bool,
    pub lower_ok: bool,
    pub upper_checked: bool,
    pub upper_ok: bool,
    pub pass: bool,
}

/// Checks `lower - tol <= estimate <= upper + tol` for the alphabet
/// `{N, ..., M}`. Sides whose hypothesis fails, and a non-positive lower
/// bound, are reported but not tested.
pub fn sandwich_check(n: NParam, m: u64, estimates: &[DimensionEstimate]) -> Result<SandwichReport> {
    let lower = jarnik_lower(n, m)?;
    let upper = jarnik_upper(n, m)?;
    if estimates.is_empty() {
        return Err(Error::domain("estimates", "[]", "non-empty lists"));
    }
    let estimate = estimates.iter().map(|e| e.value).sum::<f64>() / estimates.len() as f64;
    let spread = estimates.iter().map(|e| (e.value - estimate).abs()).fold(0.0, f64::max);
    let tolerance = estimates.iter().map(|e| e.tolerance).fold(0.0, f64::max) + spread;
    let lower_checked = lower.valid && lower.value > 0.0;
    let upper_checked = upper.valid;
    let lower_ok = !lower_checked || lower.value <= estimate + tolerance;
    let upper_ok = !upper_checked || estimate - tolerance <= upper.value;
    Ok(SandwichReport {
        n,
        m,
        lower,
        upper,
        estimate,
        tolerance,
        lower_checked,
        lower_ok,
        upper_checked,
        upper_ok,
        pass: lower_ok && upper_ok,
    })
}
