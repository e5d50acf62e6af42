//! Transfer operator `(L_s f)(x) = sum_k (N/(k+x)^2)^s f(N/(k+x))` collocated
//! at Chebyshev points on `[0, 1]`.

use super::quadrature::geometric_panels;
use super::{bisect_decreasing, check_tol, AlphabetSpec, Diagnostics, DimensionEstimate, Method};
use crate::error::{Error, Result};

pub const DEFAULT_GRID: usize = 32;
const MIN_GRID: usize = 8;
/// Branches summed one by one before switching to an integral for the rest.
const DIRECT_BRANCHES: u64 = 4096;
const DRIFT: f64 = 1e-12;
const ITERATION_CAP: usize = 10_000;

/// Interpolation at first-kind Chebyshev points, in barycentric form.
struct Basis {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Basis {
    fn new(m: usize) -> Self {
        let theta = |j: usize| (2 * j + 1) as f64 * std::f64::consts::PI / (2 * m) as f64;
        let nodes = (0..m).map(|j| 0.5 * (1.0 - theta(j).cos())).collect();
        let weights = (0..m)
            .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } * theta(j).sin())
            .collect();
        Basis { nodes, weights }
    }

    /// Adds `scale * l_j(y)` to `row[j]` for every cardinal function `l_j`.
    fn accumulate(&self, y: f64, scale: f64, row: &mut [f64], buf: &mut [f64]) {
        let mut total = 0.0;
        for (j, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let d = y - x;
            if d == 0.0 {
                row[j] += scale;
                return;
            }
            buf[j] = w / d;
            total += buf[j];
        }
        let f = scale / total;
        for (r, b) in row.iter_mut().zip(buf.iter()) {
            *r += f * b;
        }
    }
}

/// Row-major `m x m` matrix of `L_s` acting on the cardinal functions,
/// sampled at the nodes.
fn operator(spec: &AlphabetSpec, basis: &Basis, s: f64) -> Vec<f64> {
    operator_with(spec, basis, s, DIRECT_BRANCHES)
}

fn operator_with(spec: &AlphabetSpec, basis: &Basis, s: f64, direct: u64) -> Vec<f64> {
    let m = basis.nodes.len();
    let n = spec.n.as_f64();
    let ln_n = n.ln();
    let mut a = vec![0.0; m * m];
    let mut buf = vec![0.0; m];
    let direct_hi = spec.max_digit.min(spec.min_digit.saturating_add(direct));
    for (i, &x) in basis.nodes.iter().enumerate() {
        let row = &mut a[i * m..(i + 1) * m];
        for k in spec.min_digit..=direct_hi {
            let y = n / (k as f64 + x);
            let weight = (s * (2.0 * y.ln() - ln_n)).exp();
            basis.accumulate(y, weight, row, &mut buf);
        }
        if spec.max_digit > direct_hi {
            // sum_{k=c}^{b} h(k) ~ int_{c-1/2}^{b+1/2} h, and with u = N/(k+x)
            // the integral is N^(1-s) int u^(2s-2) f(u) du.
            let c = (direct_hi + 1) as f64;
            let b = spec.max_digit as f64;
            let lo = n / (b + 0.5 + x);
            let hi = n / (c - 0.5 + x);
            let coef = ((1.0 - s) * ln_n).exp();
            geometric_panels(lo, hi, |u, w| {
                let scale = coef * w * ((2.0 * s - 2.0) * u.ln()).exp();
                basis.accumulate(u, scale, row, &mut buf);
            });
        }
    }
    a
}

/// Dominant eigenvalue by power iteration, stopped when the Rayleigh
/// quotient moves by less than `1e-12` relative.
fn dominant_eigenvalue(a: &[f64], m: usize) -> Result<f64> {
    let mut v = vec![1.0 / (m as f64).sqrt(); m];
    let mut w = vec![0.0; m];
    let mut previous = f64::NAN;
    for _ in 0..ITERATION_CAP {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = a[i * m..(i + 1) * m].iter().zip(&v).map(|(x, y)| x * y).sum();
        }
        let rayleigh: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NonConvergence {
                iterations: ITERATION_CAP,
            });
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
        if (rayleigh - previous).abs() <= DRIFT * rayleigh.abs() {
            return Ok(rayleigh);
        }
        previous = rayleigh;
    }
    Err(Error::NonConvergence {
        iterations: ITERATION_CAP,
    })
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < MIN_GRID {
        return Err(Error::range("grid", grid, MIN_GRID));
    }
    Ok(())
}

/// Spectral radius of the collocated `L_s`.
pub fn spectral_radius(spec: &AlphabetSpec, grid: usize, s: f64) -> Result<f64> {
    check_grid(grid)?;
    let basis = Basis::new(grid);
    dominant_eigenvalue(&operator(spec, &basis, s), grid)
}

/// The `s` in `[0, 1]` at which the spectral radius is 1, to within `s_tol`.
pub fn estimate_dim_collocation(spec: &AlphabetSpec, grid: usize, s_tol: f64) -> Result<DimensionEstimate> {
    check_grid(grid)?;
    check_tol(s_tol)?;
    if spec.is_degenerate() {
        return Ok(DimensionEstimate::degenerate(Method::Collocation, Some(grid), None));
    }
    let basis = Basis::new(grid);
    let rho = |s: f64| dominant_eigenvalue(&operator(spec, &basis, s), grid);
    let (value, iterations) = bisect_decreasing(0.0, 1.0, s_tol, |s| Ok(rho(s)? > 1.0))?;
    let residual = (rho(value)? - 1.0).abs();
    Ok(DimensionEstimate {
        value,
        tolerance: s_tol,
        method: Method::Collocation,
        diagnostics: Diagnostics {
            grid: Some(grid),
            depth: None,
            iterations,
            residual,
        },
    })
}
