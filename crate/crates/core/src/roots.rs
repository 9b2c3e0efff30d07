//! Simultaneous (Ehrlich–Aberth) iteration for all roots of a complex polynomial.
//!
//! Coefficients are stored constant term first. Convergence is judged by residuals
//! scaled to the size of the polynomial, never by iteration count; callers pass
//! their own acceptance test so each caller can state its own residual contract.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_ITERATIONS: usize = 800;
const RESTARTS: usize = 3;

/// Value and derivative of the polynomial at `z`, plus the running-error bound
/// `sum |c_i| |z|^i` used to recognise residuals at rounding level.
pub(crate) fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let az = z.norm();
    for c in coeffs.iter().rev() {
        deriv = deriv * z + value;
        value = value * z + c;
        bound = bound * az + c.norm();
    }
    (value, deriv, bound)
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

pub(crate) fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect()
}

/// Drop leading coefficients that are negligible relative to the largest one.
/// Returns the trimmed slice and the number of dropped degrees (roots at infinity).
pub(crate) fn trim_leading(coeffs: &[Complex64], rel: f64) -> (&[Complex64], usize) {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut n = coeffs.len();
    while n > 1 && coeffs[n - 1].norm() <= rel * scale {
        n -= 1;
    }
    (&coeffs[..n], coeffs.len() - n)
}

/// Outcome of one simultaneous solve.
#[derive(Debug, Clone)]
pub(crate) struct Solve {
    pub roots: Vec<Complex64>,
    /// Largest absolute residual `|p(z)|` over the returned roots.
    pub residual: f64,
}

/// Find all roots of the monic polynomial `coeffs` (last entry must be 1).
///
/// `accept(roots, residual)` decides whether a candidate solution satisfies the
/// caller's residual contract. With `hint` present the iteration starts there
/// (continuation); otherwise from a jittered circle of radius `1 + max|c_i|`.
/// On failure the best candidate seen is returned in `Err`.
pub(crate) fn aberth<F>(coeffs: &[Complex64], hint: Option<&[Complex64]>, accept: F) -> Result<Solve, Solve>
where
    F: Fn(&[Complex64], f64) -> bool,
{
    let d = coeffs.len() - 1;
    debug_assert!((coeffs[d] - 1.0).norm() < 1e-12);
    if d == 0 {
        return Ok(Solve {
            roots: vec![],
            residual: 0.0,
        });
    }
    if d == 1 {
        let roots = vec![-coeffs[0]];
        let residual = horner(coeffs, roots[0]).norm();
        return Ok(Solve { roots, residual });
    }

    let mut best: Option<Solve> = None;
    let hinted = hint.filter(|h| h.len() == d && h.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    let attempts = if hinted.is_some() { RESTARTS + 1 } else { RESTARTS };
    for attempt in 0..attempts {
        let start = match (attempt, hinted) {
            (0, Some(h)) => separate(h),
            _ => circle_start(coeffs, attempt as u64),
        };
        let solve = iterate(coeffs, start);
        if accept(&solve.roots, solve.residual) {
            return Ok(solve);
        }
        if best.as_ref().is_none_or(|b| solve.residual < b.residual) {
            best = Some(solve);
        }
    }
    Err(best.expect("at least one attempt"))
}

fn circle_start(coeffs: &[Complex64], attempt: u64) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let radius = 1.0 + coeffs[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + attempt);
    let phase0: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let r = radius * (1.0 + 0.1 * attempt as f64);
    (0..d)
        .map(|k| {
            let jitter: f64 = (rng.random::<f64>() - 0.5) * 0.2;
            let angle = phase0 + (k as f64 + jitter) * std::f64::consts::TAU / d as f64;
            Complex64::from_polar(r, angle)
        })
        .collect()
}

/// Coincident starting points stall the Aberth correction; nudge duplicates apart.
fn separate(hint: &[Complex64]) -> Vec<Complex64> {
    let scale = 1.0 + hint.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut out = hint.to_vec();
    for k in 1..out.len() {
        for j in 0..k {
            if (out[k] - out[j]).norm() < 1e-14 * scale {
                let angle = 2.399963 * k as f64;
                out[k] += Complex64::from_polar(1e-9 * scale, angle);
            }
        }
    }
    out
}

fn iterate(coeffs: &[Complex64], mut z: Vec<Complex64>) -> Solve {
    let d = z.len();
    let eps = f64::EPSILON;
    let mut done = vec![false; d];
    for _ in 0..MAX_ITERATIONS {
        let mut active = false;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (p, dp, bound) = eval_with_derivative(coeffs, z[k]);
            if p.norm() <= 4.0 * eps * bound {
                done[k] = true;
                continue;
            }
            active = true;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm_sqr() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let correction = if dp.norm_sqr() == 0.0 {
                Complex64::from_polar(1e-8 * (1.0 + z[k].norm()), 0.7 * k as f64 + 0.3)
            } else {
                let newton = p / dp;
                let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
                if denom.norm_sqr() == 0.0 {
                    newton
                } else {
                    newton / denom
                }
            };
            if !(correction.re.is_finite() && correction.im.is_finite()) {
                continue;
            }
            z[k] -= correction;
            if correction.norm() <= 2.0 * eps * z[k].norm() {
                done[k] = true;
            }
        }
        if !active {
            break;
        }
    }
    let residual = z.iter().map(|&x| horner(coeffs, x).norm()).fold(0.0, f64::max);
    Solve { roots: z, residual }
}

/// Reorder `roots` so that entry `k` is matched to `hint[k]`.
///
/// Greedy matching on globally sorted pair distances; exact for the well-separated
/// configurations produced by continuation with step control.
pub(crate) fn match_to_hint(roots: &[Complex64], hint: &[Complex64]) -> Vec<Complex64> {
    let idx = match_indices(hint.len(), roots.len(), |i, j| (hint[i] - roots[j]).norm());
    idx.into_iter().map(|j| roots[j]).collect()
}

/// Greedy assignment: for each of `n` targets pick a distinct source among `m >= n`,
/// processing pairs in increasing distance. Returns `source index` per target.
pub(crate) fn match_indices<D: Fn(usize, usize) -> f64>(n: usize, m: usize, dist: D) -> Vec<usize> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            pairs.push((dist(i, j), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut target = vec![usize::MAX; n];
    let mut used = vec![false; m];
    let mut left = n;
    for (_, i, j) in pairs {
        if left == 0 {
            break;
        }
        if target[i] == usize::MAX && !used[j] {
            target[i] = j;
            used[j] = true;
            left -= 1;
        }
    }
    target
}
