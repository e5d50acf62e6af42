//! Closed-form and implicit Hausdorff dimension bounds.
//!
//! `E_M` is the set of points whose digits all lie in `[N, M]`, and `F_alpha`
//! the set whose digits are all at least `alpha`. Logarithms are natural.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::NParam;
use crate::hp::{precision_bits, to_f64, Hp};

/// A bound together with whether its theorem's hypothesis holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub valid: bool,
}

/// Lower bound for `dim_H E_M`: `1 - 2(N+1) / ((M+1) ln(N+1))`, valid when
/// `M > 2N + 1`.
pub fn jarnik_lower(n: NParam, m: u64) -> Result<BoundValue> {
    check_m(n, m)?;
    let mut h = Hp::new(precision_bits());
    let n1 = h.int(n.get() + 1);
    let ln = h.ln(&n1);
    let num = h.mul(&h.int(2), &n1);
    let den = h.mul(&h.int(m + 1), &ln);
    let value = h.sub(&h.int(1), &h.div(&num, &den));
    Ok(BoundValue {
        value: to_f64(&value),
        valid: m > 2 * n.get() + 1,
    })
}

/// Upper bound for `dim_H E_M`: `1 - N / ((M+1) ln((M+1)^2 / N))`, valid
/// when `M > N`.
pub fn jarnik_upper(n: NParam, m: u64) -> Result<BoundValue> {
    check_m(n, m)?;
    let mut h = Hp::new(precision_bits());
    let m1 = h.int(m + 1);
    let arg = h.div(&h.mul(&m1, &m1), &h.int(n.get()));
    let ln = h.ln(&arg);
    let value = h.sub(&h.int(1), &h.div(&h.int(n.get()), &h.mul(&m1, &ln)));
    Ok(BoundValue {
        value: to_f64(&value),
        valid: m > n.get(),
    })
}

fn check_m(n: NParam, m: u64) -> Result<()> {
    if m < n.get() {
        return Err(Error::range("M", m, n));
    }
    Ok(())
}

/// Lower and upper dimension bounds, clamped to `[0, 1]`, with the raw values
/// kept alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionBracket {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub lower_valid: bool,
    pub upper_valid: bool,
    pub raw_lower: Option<f64>,
    pub raw_upper: Option<f64>,
}

impl DimensionBracket {
    fn new(raw_lower: Option<f64>, raw_upper: Option<f64>, lower_valid: bool, upper_valid: bool) -> Self {
        let clamp = |v: f64| v.clamp(0.0, 1.0);
        DimensionBracket {
            lower: raw_lower.map(clamp),
            upper: raw_upper.map(clamp),
            lower_valid,
            upper_valid,
            raw_lower,
            raw_upper,
        }
    }
}

pub fn jarnik_bracket(n: NParam, m: u64) -> Result<DimensionBracket> {
    let lo = jarnik_lower(n, m)?;
    let hi = jarnik_upper(n, m)?;
    Ok(DimensionBracket::new(
        Some(lo.value),
        Some(hi.value),
        lo.valid,
        hi.valid,
    ))
}

/// Bounds for `dim_H F_alpha`:
/// `1/2 + 1/(2 ln(alpha+2))` and `1/2 + ln ln(alpha-1) / (2 ln(alpha-1))`,
/// both valid when `ln(alpha-1) > e^(1+N)`. The upper bound is absent for
/// `alpha <= 2`, where `ln ln(alpha-1)` is undefined.
pub fn good_bracket(n: NParam, alpha: f64) -> Result<DimensionBracket> {
    if !alpha.is_finite() || alpha <= 1.0 {
        return Err(Error::domain("alpha", alpha, "finite reals > 1"));
    }
    if alpha < n.as_f64() {
        return Err(Error::range("alpha", alpha, n));
    }
    let mut h = Hp::new(precision_bits());
    let a = h.float(alpha);
    let half = h.div(&h.int(1), &h.int(2));

    let ln_a2 = {
        let v = h.add(&a, &h.int(2));
        h.ln(&v)
    };
    let lower = h.add(&half, &h.div(&h.int(1), &h.mul(&h.int(2), &ln_a2)));

    let (upper, valid) = if alpha > 2.0 {
        let ln_a1 = {
            let v = h.sub(&a, &h.int(1));
            h.ln(&v)
        };
        let lnln = h.ln(&ln_a1);
        let upper = h.add(&half, &h.div(&lnln, &h.mul(&h.int(2), &ln_a1)));
        let threshold = {
            let v = h.int(1 + n.get());
            h.exp(&v)
        };
        let valid = to_f64(&h.sub(&ln_a1, &threshold)) > 0.0;
        (Some(to_f64(&upper)), valid)
    } else {
        (None, false)
    };
    Ok(DimensionBracket::new(Some(to_f64(&lower)), upper, valid, valid))
}

/// Root `s` in `(1/2, 1]` of `(2s-1)(alpha-1)^(2s-1) = 1 + N`, by bisection
/// to absolute tolerance `tol`.
pub fn solve_implicit_s(n: NParam, alpha: f64, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("tol", tol, "positive reals"));
    }
    let needed = n.get() + 2;
    if alpha.is_nan() || alpha < needed as f64 {
        return Err(Error::NoRoot { alpha, needed });
    }
    let target = n.as_f64() + 1.0;
    let f = |s: f64| implicit_lhs(alpha, s) - target;
    let (mut lo, mut hi) = (0.5 + f64::EPSILON, 1.0);
    if f(hi) <= 0.0 {
        return Ok(hi);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `(2s-1)(alpha-1)^(2s-1)`.
pub fn implicit_lhs(alpha: f64, s: f64) -> f64 {
    let x = 2.0 * s - 1.0;
    x * (x * (alpha - 1.0).ln()).exp()
}

/// Bracket on `sum_{k >= alpha} k^(-2s)`: the partial sum to `cutoff` plus
/// integral bounds on the remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBracket {
    pub low: f64,
    pub high: f64,
    pub cutoff: u64,
}

pub fn tail_bracket(alpha: u64, s: f64, cutoff: u64) -> Result<TailBracket> {
    if s.is_nan() || s <= 0.5 {
        return Err(Error::Divergence(s));
    }
    if alpha == 0 {
        return Err(Error::range("alpha", 0, 1));
    }
    if cutoff < alpha {
        return Err(Error::range("K", cutoff, alpha));
    }
    let t = 2.0 * s - 1.0;
    let partial = power_sum(alpha, cutoff, 2.0 * s);
    let low = partial + ((cutoff + 1) as f64).powf(-t) / t;
    let high = partial + (cutoff as f64).powf(-t) / t;
    Ok(TailBracket { low, high, cutoff })
}

/// `sum_{k=a}^{b} k^(-p)`, smallest terms first with compensation.
pub fn power_sum(a: u64, b: u64, p: f64) -> f64 {
    let mut acc = Neumaier::default();
    for k in (a..=b).rev() {
        acc.add((k as f64).powf(-p));
    }
    acc.sum()
}

/// Compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

/// The covering condition for `F_alpha`: `sum_{k >= alpha} k^(-2s) <=
/// (1+N)^(-s)`, tested with the upper tail bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KeyCondition {
    pub tail: TailBracket,
    pub rhs: f64,
    pub holds: bool,
}

pub fn key_condition(n: NParam, alpha: u64, s: f64, cutoff: u64) -> Result<KeyCondition> {
    let tail = tail_bracket(alpha, s, cutoff)?;
    let rhs = (1.0 + n.as_f64()).powf(-s);
    Ok(KeyCondition {
        tail,
        rhs,
        holds: tail.high <= rhs,
    })
}

/// Exponent used by the lower-bound construction on `[alpha, beta]`.
pub fn good_lower_s(alpha: u64) -> f64 {
    0.5 + 0.5 / (alpha as f64 + 2.0).ln()
}

fn good_lower_threshold(n: NParam, s: f64) -> f64 {
    (3.0 / n.as_f64()).powf(s)
}

/// `N^s 3^(-s) sum_{k=alpha}^{beta} k^(-2s) >= 1` at `s = good_lower_s(alpha)`.
pub fn good_lower_condition(n: NParam, alpha: u64, beta: u64) -> Result<bool> {
    check_alpha_beta(n, alpha, beta)?;
    let s = good_lower_s(alpha);
    Ok(power_sum(alpha, beta, 2.0 * s) >= good_lower_threshold(n, s))
}

fn check_alpha_beta(n: NParam, alpha: u64, beta: u64) -> Result<()> {
    if alpha < n.get() {
        return Err(Error::range("alpha", alpha, n));
    }
    if beta <= alpha {
        return Err(Error::range("beta", beta, alpha + 1));
    }
    Ok(())
}

/// Result of searching for a `beta` making [`good_lower_condition`] true.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaSearch {
    pub s: f64,
    /// First `beta` in the sequence `2 alpha, 4 alpha, ...` that works.
    pub beta: u64,
    /// Smallest `beta` that works.
    pub beta_min: u64,
}

pub const DEFAULT_BETA_CAP: u64 = 1 << 32;

/// Doubling search from `beta = 2 alpha`, also reporting the exact minimal
/// `beta`. Fails with `CapExceeded` when no `beta <= cap` works.
pub fn search_good_beta(n: NParam, alpha: u64, cap: u64) -> Result<BetaSearch> {
    if alpha < n.get() || alpha == 0 {
        return Err(Error::range("alpha", alpha, n));
    }
    let s = good_lower_s(alpha);
    let need = good_lower_threshold(n, s);
    // Even the whole tail may be too small.
    let whole = tail_bracket(alpha, s, alpha)?;
    if whole.high < need {
        return Err(Error::CapExceeded { cap });
    }
    // The condition is monotone in beta, so one upward scan finds the minimum.
    let mut acc = Neumaier::default();
    let mut beta_min = None;
    let mut k = alpha;
    while k <= cap {
        acc.add((k as f64).powf(-2.0 * s));
        if k > alpha && acc.sum() >= need {
            beta_min = Some(k);
            break;
        }
        k += 1;
    }
    let beta_min = beta_min.ok_or(Error::CapExceeded { cap })?;
    let mut beta = alpha.checked_mul(2).ok_or(Error::CapExceeded { cap })?;
    while beta < beta_min {
        beta = beta.checked_mul(2).ok_or(Error::CapExceeded { cap })?;
    }
    if beta > cap {
        return Err(Error::CapExceeded { cap });
    }
    Ok(BetaSearch { s, beta, beta_min })
}

/// `(N+1)^(1-s) (1 - (N+1)/(M+1))`: the sufficiency factor at its worst case
/// over all prefixes.
pub fn sufficiency_worst_case(n: NParam, m: u64, s: f64) -> f64 {
    let n1 = n.as_f64() + 1.0;
    n1.powf(1.0 - s) * (1.0 - n1 / (m as f64 + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn np(v: u64) -> NParam {
        NParam::new(v).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    // Reference values computed with 40-digit arithmetic.
    #[test]
    fn jarnik_values() {
        let cases = [
            (1, 100, 0.9428635627370708, 0.9989273313597251),
            (1, 20, 0.7252009445925784, 0.9921795538392131),
            (1, 4, -0.1541560327111707, 0.9378665065440388),
            (2, 6, 0.2197949486055679, 0.9106772479667864),
            (2, 12, 0.5798895877106904, 0.9653245955617306),
        ];
        for (n, m, lo, hi) in cases {
            let l = jarnik_lower(np(n), m).unwrap();
            let u = jarnik_upper(np(n), m).unwrap();
            assert!(close(l.value, lo, 1e-14), "{n} {m} {}", l.value);
            assert!(close(u.value, hi, 1e-14), "{n} {m} {}", u.value);
        }
    }

    #[test]
    fn jarnik_validity() {
        assert!(!jarnik_lower(np(1), 3).unwrap().valid);
        assert!(jarnik_lower(np(1), 4).unwrap().valid);
        assert!(!jarnik_upper(np(1), 1).unwrap().valid);
        assert!(jarnik_upper(np(1), 2).unwrap().valid);
        assert!(matches!(jarnik_lower(np(2), 1), Err(Error::Range { .. })));
        let b = jarnik_bracket(np(1), 4).unwrap();
        assert_eq!(b.lower, Some(0.0));
        assert!(b.raw_lower.unwrap() < 0.0);
    }

    #[test]
    fn good_values() {
        let b = good_bracket(np(1), 2000.0).unwrap();
        assert!(close(b.lower.unwrap(), 0.5657730134694095, 1e-14));
        assert!(close(b.upper.unwrap(), 0.6334272249927183, 1e-14));
        assert!(b.lower_valid && b.upper_valid);
        let b = good_bracket(np(1), 100.0).unwrap();
        assert!(!b.lower_valid && !b.upper_valid);
        assert!(good_bracket(np(1), 1.0).is_err());
        assert!(matches!(good_bracket(np(3), 2.5), Err(Error::Range { .. })));
        assert_eq!(good_bracket(np(1), 1.5).unwrap().upper, None);
    }

    #[test]
    fn implicit_root() {
        let s = solve_implicit_s(np(1), 2000.0, 1e-13).unwrap();
        assert!((s - 0.6328107424210161).abs() < 1e-12, "{s}");
        assert!((implicit_lhs(2000.0, s) - 2.0).abs() < 1e-10);
        assert!(matches!(
            solve_implicit_s(np(1), 2.0, 1e-10),
            Err(Error::NoRoot { needed: 3, .. })
        ));
        assert_eq!(solve_implicit_s(np(1), 3.0, 1e-10).unwrap(), 1.0);
    }

    #[test]
    fn tails() {
        let t = tail_bracket(2, 1.0, 10_000).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0 - 1.0;
        assert!(t.low <= exact && exact <= t.high);
        assert!(t.high - t.low < 1e-8);
        let t = tail_bracket(1000, 0.6, 1_000_000).unwrap();
        assert!(0.0 < t.low && t.low <= t.high);
        assert_eq!(tail_bracket(2, 0.5, 10), Err(Error::Divergence(0.5)));
    }

    #[test]
    fn key_condition_at_upper_bound() {
        let s = good_bracket(np(1), 2000.0).unwrap().upper.unwrap();
        let k = key_condition(np(1), 2000, s, 100_000).unwrap();
        assert!(k.holds);
        assert!((k.tail.high - 0.4930148289).abs() < 1e-6);
    }

    #[test]
    fn beta_search() {
        assert!(!good_lower_condition(np(1), 2000, 2001).unwrap());
        let r = search_good_beta(np(1), 2000, DEFAULT_BETA_CAP).unwrap();
        assert_eq!(r.beta_min, 8_276_644);
        assert_eq!(r.beta, 16_384_000);
        assert!(good_lower_condition(np(1), 2000, r.beta_min).unwrap());
        assert!(!good_lower_condition(np(1), 2000, r.beta_min - 1).unwrap());
        assert_eq!(search_good_beta(np(1), 1, 1000), Err(Error::CapExceeded { cap: 1000 }));
    }

    #[test]
    fn sufficiency_at_lower_bound() {
        for (n, m) in [(1, 10), (1, 50), (2, 6), (3, 20)] {
            let s = jarnik_lower(np(n), m).unwrap().value;
            assert!(sufficiency_worst_case(np(n), m, s) >= 1.0);
        }
    }
}
