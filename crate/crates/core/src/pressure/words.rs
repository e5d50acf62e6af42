//! Dimension from the growth of `S_n(s) = sum_{|w| = n} |I_n(w)|^s`.
//!
//! For each of the last few levels the root of `S_n(s) / S_{n-1}(s) = 1` is
//! found by regula falsi. These per-level roots converge geometrically to the
//! dimension, so the last three are combined by Aitken extrapolation.

use std::ops::ControlFlow;

use super::{check_tol, AlphabetSpec, Diagnostics, DimensionEstimate, Method};
use crate::bounds::Neumaier;
use crate::error::{Error, Result};
use crate::words::{ln_length, Denom, Node, Visitor, WordSpace};

/// Words at the deepest level used when choosing the default depth.
pub const DEFAULT_WORD_BUDGET: u128 = 10_000_000;
/// Hard limit on words at the deepest level.
pub const MAX_WORD_BUDGET: u128 = 50_000_000;
/// Levels whose roots enter the extrapolation.
const ROOT_LEVELS: usize = 4;

/// Largest `n` with `branches^n <= DEFAULT_WORD_BUDGET`, at least 2.
pub fn default_depth(spec: &AlphabetSpec) -> usize {
    let b = spec.branches() as u128;
    if b <= 1 {
        return 2;
    }
    let mut depth = 0;
    let mut words: u128 = 1;
    while words * b <= DEFAULT_WORD_BUDGET {
        words *= b;
        depth += 1;
    }
    depth.max(2)
}

fn level_count(spec: &AlphabetSpec, depth: usize) -> u128 {
    (spec.branches() as u128).saturating_pow(depth as u32)
}

/// Log-lengths of every word, grouped by length, for lengths
/// `first..=depth`.
struct LogLengths {
    n: u64,
    first: usize,
    levels: Vec<Vec<f64>>,
}

impl Visitor for LogLengths {
    type Break = ();
    fn visit<D: Denom>(&mut self, node: Node<'_, D>) -> ControlFlow<()> {
        let len = node.digits.len();
        if len >= self.first {
            // q + q_prev never overflows where q did not
            let l = ln_length(self.n, len, node.q, node.q_prev).unwrap_or(f64::NAN);
            self.levels[len - self.first].push(l);
        }
        ControlFlow::Continue(())
    }
}

fn collect(spec: &AlphabetSpec, depth: usize, first: usize) -> Result<Vec<Vec<f64>>> {
    let words = level_count(spec, depth);
    if words > MAX_WORD_BUDGET {
        return Err(Error::BudgetExceeded {
            words,
            budget: MAX_WORD_BUDGET,
        });
    }
    let space = WordSpace {
        n: spec.n.get(),
        lo: spec.min_digit,
        hi: spec.max_digit,
        max_len: depth,
    };
    let (v, _) = space.walk_exact(|| LogLengths {
        n: spec.n.get(),
        first,
        levels: vec![Vec::new(); depth - first + 1],
    });
    Ok(v.levels)
}

/// `ln S(s)` where `S(s) = sum exp(s L)`.
fn log_sum(levels: &[f64], s: f64) -> f64 {
    let top = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = Neumaier::default();
    for &l in levels {
        acc.add((s * (l - top)).exp());
    }
    s * top + acc.sum().ln()
}

/// `S_depth(s) / S_{depth-1}(s)`.
pub fn growth_factor(spec: &AlphabetSpec, depth: usize, s: f64) -> Result<f64> {
    if depth == 0 {
        return Err(Error::range("depth", 0, 1));
    }
    let levels = collect(spec, depth, depth - 1)?;
    Ok((log_sum(&levels[1], s) - log_sum(&levels[0], s)).exp())
}

/// Root of the decreasing `g` in `[0, 1]`, searched first near `guess`, by
/// the Illinois variant of regula falsi.
fn level_root(g: impl Fn(f64) -> f64, guess: Option<(f64, f64)>, tol: f64) -> (f64, usize) {
    let mut bracket = None;
    if let Some((centre, width)) = guess {
        let (a, b) = ((centre - width).max(0.0), (centre + width).min(1.0));
        let (ga, gb) = (g(a), g(b));
        if ga > 0.0 && gb <= 0.0 {
            bracket = Some((a, ga, b, gb));
        }
    }
    let (mut a, mut ga, mut b, mut gb) = bracket.unwrap_or_else(|| (0.0, g(0.0), 1.0, g(1.0)));
    if gb > 0.0 {
        return (1.0, 0);
    }
    let mut steps = 0;
    let mut c = b;
    let mut side = 0;
    while (b - a).abs() > tol && steps < 200 {
        let next = b - gb * (b - a) / (gb - ga);
        // fall back to bisection if the secant leaves the bracket
        let next = if next > a.min(b) && next < a.max(b) {
            next
        } else {
            0.5 * (a + b)
        };
        let gc = g(next);
        steps += 1;
        if (next - c).abs() <= 0.5 * tol {
            c = next;
            break;
        }
        c = next;
        if gc == 0.0 {
            break;
        }
        if (gc > 0.0) == (ga > 0.0) {
            a = c;
            ga = gc;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            gb = gc;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    (c, steps)
}

/// Aitken extrapolation of `a, b, c`, or `c` itself when the differences are
/// at rounding level or not contracting.
fn aitken(a: f64, b: f64, c: f64, noise: f64) -> f64 {
    let (d1, d2) = (b - a, c - b);
    let denom = d2 - d1;
    if d2.abs() <= noise || d2.abs() >= d1.abs() || denom == 0.0 {
        return c;
    }
    c - d2 * d2 / denom
}

/// Dimension estimate from words of length up to `depth` (at least 2).
///
/// The tolerance is `s_tol` plus the change between the last two
/// extrapolated values (or the last two raw roots, for shallow depths).
pub fn estimate_dim_words(spec: &AlphabetSpec, depth: usize, s_tol: f64) -> Result<DimensionEstimate> {
    check_tol(s_tol)?;
    if depth < 2 {
        return Err(Error::range("depth", depth, 2));
    }
    if spec.is_degenerate() {
        return Ok(DimensionEstimate::degenerate(
            Method::WordEnumeration,
            None,
            Some(depth),
        ));
    }
    let first = depth.saturating_sub(ROOT_LEVELS);
    let levels = collect(spec, depth, first)?;
    let root_tol = (0.1 * s_tol).clamp(1e-15, 1e-13);

    let mut roots: Vec<f64> = Vec::new();
    let mut iterations = 0;
    let mut prev_log = None;
    for level in &levels {
        if let Some(prev) = prev_log {
            let guess = match roots.as_slice() {
                [.., a, b] => Some((*b, 4.0 * (b - a).abs() + 1e-9)),
                _ => None,
            };
            let g = |s: f64| log_sum(level, s) - log_sum(prev, s);
            let (r, steps) = level_root(g, guess, root_tol);
            roots.push(r);
            iterations += steps;
        }
        prev_log = Some(level.as_slice());
    }

    let noise = 64.0 * root_tol;
    let last = roots[roots.len() - 1];
    let residual = (last - roots[roots.len() - 2]).abs();
    let (value, spread) = match roots.as_slice() {
        [.., a, b, c, d] => {
            let now = aitken(*b, *c, *d, noise);
            let before = aitken(*a, *b, *c, noise);
            (now, (now - before).abs())
        }
        [a, b, c] => {
            let now = aitken(*a, *b, *c, noise);
            (now, (now - c).abs())
        }
        _ => (last, residual),
    };
    Ok(DimensionEstimate {
        value: value.clamp(0.0, 1.0),
        tolerance: s_tol + spread + noise,
        method: Method::WordEnumeration,
        diagnostics: Diagnostics {
            grid: None,
            depth: Some(depth),
            iterations,
            residual,
        },
    })
}
