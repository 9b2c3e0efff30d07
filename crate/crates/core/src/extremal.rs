//! Derivative-free search for monic polynomials with long lemniscates.
//!
//! The objective `Z -> |E(p_Z)|` is invariant under translation and rotation of
//! the roots, has square-root kinks wherever a critical value crosses the unit
//! circle, and (conjecturally) peaks exactly at such a kink. A Nelder–Mead
//! simplex with restarts copes with that; gradients would not.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::levelset;
use crate::measure::length_integral;
use crate::poly::MonicPolynomial;

/// Quadrature tolerance of the objective.
pub const OBJECTIVE_TOL: f64 = 1e-4;
/// Tolerance for re-evaluating improvements, so the reported length is accurate.
pub const REPORT_TOL: f64 = 1e-10;
/// Root sets wider than this are rejected unevaluated: the length tends to 0 as they spread.
pub const MAX_ROOT_DIAMETER: f64 = 8.0;
/// Budget used by [`erdos_comparison`].
pub const DEFAULT_BUDGET: usize = 3000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOptions {
    /// Objective evaluations allowed.
    pub budget: usize,
    pub seed: u64,
    /// Roots for the first simplex; restarts follow as usual.
    pub start: Option<Vec<Complex64>>,
    /// Initial simplex edge.
    pub initial_step: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            seed: 0,
            start: None,
            initial_step: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best: MonicPolynomial,
    pub best_length: f64,
    pub evaluations: usize,
    /// `(evaluation index, length)` at every improvement of the best.
    pub history: Vec<(usize, f64)>,
    pub critical_value_moduli: Vec<f64>,
    pub connected: bool,
}

/// `| |a_j| - 1 |` over the critical values `a_j`, sorted descending.
pub fn critical_value_report(p: &MonicPolynomial) -> Result<Vec<f64>> {
    if p.degree() < 2 {
        return Err(Error::InvalidInput("critical values need degree >= 2".into()));
    }
    let mut out: Vec<f64> = p.critical_values()?.iter().map(|a| (a.norm() - 1.0).abs()).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

pub fn search(d: usize, budget: usize, seed: u64) -> Result<SearchResult> {
    search_with(
        d,
        &SearchOptions {
            budget,
            seed,
            ..Default::default()
        },
    )
}

struct Tracker {
    budget: usize,
    evaluations: usize,
    proposals: usize,
    best: Option<(Vec<Complex64>, f64)>,
    history: Vec<(usize, f64)>,
}

impl Tracker {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget || self.proposals >= 8 * self.budget
    }

    /// Negated length, `+inf` for rejected or failed points.
    fn objective(&mut self, x: &[f64]) -> f64 {
        self.proposals += 1;
        if self.evaluations >= self.budget {
            return f64::INFINITY;
        }
        let roots = to_roots(x);
        if diameter(&roots) > MAX_ROOT_DIAMETER {
            return f64::INFINITY;
        }
        self.evaluations += 1;
        let Ok(p) = MonicPolynomial::from_roots(&roots) else {
            return f64::INFINITY;
        };
        let Ok(len) = length_integral(&p, OBJECTIVE_TOL) else {
            return f64::INFINITY;
        };
        let current = self.best.as_ref().map_or(f64::NEG_INFINITY, |b| b.1);
        if len > current {
            let refined = length_integral(&p, REPORT_TOL).unwrap_or(len);
            if refined > current {
                self.best = Some((roots, refined));
                self.history.push((self.evaluations, refined));
            }
        }
        -len
    }
}

fn to_roots(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

fn to_vector(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

fn diameter(z: &[Complex64]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            d = d.max((z[i] - z[j]).norm());
        }
    }
    d
}

/// Translate so the roots sum to zero.
fn gauge(x: &mut [f64]) {
    let n = (x.len() / 2) as f64;
    let (mut sr, mut si) = (0.0, 0.0);
    for c in x.chunks(2) {
        sr += c[0];
        si += c[1];
    }
    for c in x.chunks_mut(2) {
        c[0] -= sr / n;
        c[1] -= si / n;
    }
}

/// Multi-start Nelder–Mead over root configurations in `C^d`.
///
/// Restarts cycle through a perturbed `z^d + 1`, a perturbed `z^d` and uniform
/// random roots in `|z| < 1.5`, each with its own generator derived from the
/// seed. Every simplex vertex is translated to `sum z = 0` after each step.
pub fn search_with(d: usize, opts: &SearchOptions) -> Result<SearchResult> {
    if !(2..=6).contains(&d) {
        return Err(Error::InvalidInput(format!("search degree must be in 2..=6, got {d}")));
    }
    if opts.budget < 500 {
        return Err(Error::InvalidInput(format!("search budget must be at least 500, got {}", opts.budget)));
    }
    if !(opts.initial_step > 0.0 && opts.initial_step.is_finite()) {
        return Err(Error::InvalidInput("initial_step must be positive".into()));
    }
    if let Some(s) = &opts.start {
        if s.len() != d {
            return Err(Error::InvalidInput(format!("start has {} roots, expected {d}", s.len())));
        }
    }
    let mut tracker = Tracker {
        budget: opts.budget,
        evaluations: 0,
        proposals: 0,
        best: None,
        history: Vec::new(),
    };
    // Odd restarts re-seed a shrinking simplex at the incumbent: a collapsed
    // simplex on a kink is not a local maximum, and a fresh one often escapes.
    let per_run = (opts.budget / 8).max(60 * d);
    let mut restart = 0u64;
    let mut polish = 0i32;
    while !tracker.exhausted() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9e37_79b9).wrapping_add(restart));
        let (start, step) = match (restart, &opts.start, &tracker.best) {
            (0, Some(s), _) => (s.clone(), opts.initial_step),
            (r, _, Some(best)) if r % 2 == 1 => {
                polish += 1;
                let step = (opts.initial_step * 0.5f64.powi(polish)).max(1e-4);
                (best.0.clone(), step)
            }
            _ => (restart_point(d, restart / 2, &mut rng), opts.initial_step),
        };
        let mut x0 = to_vector(&start);
        gauge(&mut x0);
        let limit = (tracker.evaluations + per_run).min(tracker.budget);
        nelder_mead(&mut tracker, x0, step, limit);
        restart += 1;
    }

    let (roots, best_length) = tracker
        .best
        .clone()
        .ok_or_else(|| Error::InvalidInput("no admissible point evaluated within the budget".into()))?;
    let best = MonicPolynomial::from_roots(&roots)?;
    Ok(SearchResult {
        critical_value_moduli: critical_value_report(&best)?,
        connected: levelset::is_connected(&best)?,
        best,
        best_length,
        evaluations: tracker.evaluations,
        history: tracker.history,
    })
}

fn restart_point(d: usize, restart: u64, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut jitter = |scale: f64| Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale));
    match restart % 3 {
        0 => {
            // The length has a cusp at z^d + 1 (it drops like |dz|^{0.3} for d = 3),
            // so the first visit only breaks the symmetry.
            let scale = if restart == 0 { 1e-9 } else { 0.05 };
            let candidate = MonicPolynomial::power_plus(d, Complex64::new(1.0, 0.0)).expect("degree in range");
            candidate.roots().iter().map(|z| z + jitter(scale)).collect()
        }
        1 => (0..d).map(|_| jitter(0.3)).collect(),
        _ => (0..d)
            .map(|_| {
                let r = 1.5 * rng.random::<f64>().sqrt();
                Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
            })
            .collect(),
    }
}

/// Minimises `tracker.objective` from a regular-ish simplex around `x0` until the
/// simplex collapses or `limit` evaluations have been spent.
fn nelder_mead(tracker: &mut Tracker, x0: Vec<f64>, step: f64, limit: usize) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = tracker.objective(&x0);
    simplex.push((x0.clone(), f0));
    for k in 0..n {
        let mut x = x0.clone();
        x[k] += step;
        gauge(&mut x);
        let f = tracker.objective(&x);
        simplex.push((x, f));
    }

    let done = |t: &Tracker| t.evaluations >= limit || t.exhausted();
    while !done(tracker) {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[n].1);
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if size < 1e-7 || (worst.is_finite() && (worst - best).abs() < 1e-10 && size < 1e-4) {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (c - w)).collect();
            gauge(&mut p);
            p
        };

        let xr = along(1.0);
        let fr = tracker.objective(&xr);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = tracker.objective(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(0.5);
                let fc = tracker.objective(&xc);
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = tracker.objective(&xc);
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let mut x: Vec<f64> = anchor.iter().zip(&entry.0).map(|(a, v)| a + 0.5 * (v - a)).collect();
                    gauge(&mut x);
                    entry.1 = tracker.objective(&x);
                    entry.0 = x;
                    if done(tracker) {
                        break;
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErdosComparison {
    pub degree: usize,
    pub candidate_length: f64,
    pub search_length: f64,
    /// `search_length - candidate_length`; the conjecture predicts `<= 0`.
    pub margin: f64,
}

/// `|E(z^d + 1)|` against the best length found by [`search`].
pub fn erdos_comparison(d: usize, seed: u64) -> Result<ErdosComparison> {
    erdos_comparison_with(
        d,
        &SearchOptions {
            seed,
            ..Default::default()
        },
    )
}

pub fn erdos_comparison_with(d: usize, opts: &SearchOptions) -> Result<ErdosComparison> {
    let candidate = MonicPolynomial::power_plus(d, Complex64::new(1.0, 0.0))?;
    let candidate_length = length_integral(&candidate, REPORT_TOL)?;
    let found = search_with(d, opts)?;
    Ok(ErdosComparison {
        degree: d,
        candidate_length,
        search_length: found.best_length,
        margin: found.best_length - candidate_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_centres_roots() {
        let mut x = vec![1.0, 2.0, 3.0, -4.0];
        gauge(&mut x);
        assert_eq!(x, vec![-1.0, 3.0, 1.0, -3.0]);
    }

    #[test]
    fn report_of_shifted_square() {
        let p = MonicPolynomial::power_plus(2, Complex64::new(-4.0, 0.0)).unwrap();
        let r = critical_value_report(&p).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_arguments() {
        assert!(search(7, 1000, 0).is_err());
        assert!(search(2, 100, 0).is_err());
    }
}
