//! Gauss-Legendre quadrature on geometric panels.

use std::sync::OnceLock;

pub const POINTS: usize = 32;

/// Nodes and weights on `[-1, 1]`, by Newton iteration on the Legendre
/// three-term recurrence.
fn rule() -> &'static [(f64, f64); POINTS] {
    static RULE: OnceLock<[(f64, f64); POINTS]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = POINTS;
        let mut out = [(0.0, 0.0); POINTS];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

/// Calls `f(u, w)` for quadrature nodes `u` and weights `w` covering
/// `[lo, hi]`, split into panels whose endpoints grow by a factor of two
/// from `lo`. Suits integrands with a power-law singularity below `lo`.
pub fn geometric_panels(lo: f64, hi: f64, mut f: impl FnMut(f64, f64)) {
    debug_assert!(0.0 < lo && lo < hi);
    let mut a = lo;
    while a < hi {
        let b = (2.0 * a).min(hi);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for &(x, w) in rule() {
            f(mid + half * x, half * w);
        }
        a = b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let s: f64 = rule().iter().map(|&(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_singular_power() {
        // int_{1e-8}^{1} u^{-0.7} du
        let mut acc = 0.0;
        geometric_panels(1e-8, 1.0, |u, w| acc += w * u.powf(-0.7));
        let exact = (1.0 - 1e-8f64.powf(0.3)) / 0.3;
        assert!((acc / exact - 1.0).abs() < 1e-13, "{acc} {exact}");
    }
}
