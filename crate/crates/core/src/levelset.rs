//! Tracing the lemniscate `E(p) = {z : |p(z)| = 1}` as the preimage of the unit
//! circle, with its boundary monodromy and connected components.
//!
//! Preimages of `e^{i theta}` are continued in `theta`. When a critical value of
//! `p` lies on the circle the phase circle is cut there, open arcs are traced
//! separately and the branches that meet at the critical point are glued
//! through it (the figure-eight of `z^2 + 1` is the standard case).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::continuation::{self, Fiber, GlueNode, Split, StepControl};
use crate::error::{Error, Result};
use crate::poly::{clusters, MonicPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TraceOptions {
    /// Largest phase advance per step (radians).
    pub phase_step_max: f64,
    /// Largest displacement of any preimage per step; `None` means
    /// `0.05 * (diam Z + 2)`, a bound on the diameter of `E(p)`.
    pub spatial_step_max: Option<f64>,
    /// Largest accepted gap between predicted and corrected preimages; `None`
    /// means `5e-5 * (diam Z + 2)`.
    pub max_deviation: Option<f64>,
    pub residual_tol: f64,
    /// Critical values with `||a| - 1|` below this are treated as lying on the circle.
    pub critical_phase_tol: f64,
    /// Critical points closer than this are merged into a single touch point.
    pub touch_merge_tol: f64,
    /// Run the phase backwards.
    pub reverse: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            phase_step_max: PI / 64.0,
            spatial_step_max: None,
            max_deviation: None,
            residual_tol: 1e-9,
            critical_phase_tol: 1e-6,
            touch_merge_tol: 1e-6,
            reverse: false,
        }
    }
}

/// Smallest accepted `phase_step_max`; below it a trace takes millions of steps.
pub const MIN_PHASE_STEP: f64 = 1e-5;

impl TraceOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.phase_step_max,
            self.spatial_step_max.unwrap_or(1.0),
            self.max_deviation.unwrap_or(1.0),
            self.residual_tol,
            self.critical_phase_tol,
            self.touch_merge_tol,
        ];
        if !positive.iter().all(|x| *x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidInput("trace tolerances must be positive and finite".into()));
        }
        if !(MIN_PHASE_STEP..=std::f64::consts::FRAC_PI_4).contains(&self.phase_step_max) {
            return Err(Error::InvalidInput(format!("phase_step_max must be in [{MIN_PHASE_STEP}, pi/4]")));
        }
        Ok(())
    }

    fn scale(p: &MonicPolynomial) -> f64 {
        p.root_diameter() + 2.0
    }

    pub fn resolved_spatial_step(&self, p: &MonicPolynomial) -> f64 {
        self.spatial_step_max.unwrap_or(0.05 * Self::scale(p))
    }

    pub fn resolved_max_deviation(&self, p: &MonicPolynomial) -> f64 {
        self.max_deviation.unwrap_or(5e-5 * Self::scale(p))
    }

    fn step_control(&self, p: &MonicPolynomial) -> StepControl {
        StepControl {
            phase_step_max: self.phase_step_max,
            spatial_step_max: self.resolved_spatial_step(p),
            max_deviation: self.resolved_max_deviation(p),
            min_phase_step: 1e-15,
        }
    }
}

/// A traced vertex: its position, the phase of `p(z)` and the branch it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vertex {
    pub z: Complex64,
    pub theta: f64,
    pub branch: usize,
}

/// A traced lemniscate.
#[derive(Debug, Clone, Serialize)]
pub struct LevelCurve {
    pub degree: usize,
    /// Closed polylines; the last vertex connects back to the first.
    pub components: Vec<Vec<Vertex>>,
    /// `monodromy[k]` is the preimage of `1` reached by continuing preimage `k`
    /// once around the circle.
    pub monodromy: Vec<usize>,
    /// Set when a critical value sits on the circle and the monodromy was taken
    /// on the circle of radius `1 + 2 * critical_phase_tol` instead.
    pub monodromy_perturbed: bool,
    pub critical_phases: Vec<f64>,
    /// Critical points lying on the curve, where components cross themselves or meet.
    pub touch_points: Vec<Complex64>,
}

impl LevelCurve {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.components.iter().flatten().map(|v| v.z)
    }

    pub fn polylines(&self) -> Vec<Vec<Complex64>> {
        self.components.iter().map(|c| c.iter().map(|v| v.z).collect()).collect()
    }

    pub fn monodromy_cycles(&self) -> Vec<Vec<usize>> {
        cycles(&self.monodromy)
    }
}

/// Critical points whose critical value sits on the unit circle at one phase.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPhase {
    pub theta: f64,
    /// Touch points with the number of preimage branches meeting there.
    pub points: Vec<(Complex64, usize)>,
}

/// Phases in `[0, 2 pi)` at which critical values lie on the circle of radius `radius`.
pub fn critical_phases(p: &MonicPolynomial, radius: f64, phase_tol: f64, merge_tol: f64) -> Result<Vec<CriticalPhase>> {
    let cps = p.critical_points()?;
    let on_circle: Vec<(f64, Complex64)> = cps
        .iter()
        .map(|&c| (c, p.evaluate(c)))
        .filter(|(_, a)| (a.norm() - radius).abs() < phase_tol)
        .map(|(c, a)| (snap_phase(a.arg()), c))
        .collect();
    // Multiple critical points come back from the solver as a small cluster.
    let cluster_tol = merge_tol.max(1e-3 * (1.0 + p.max_root_modulus()));
    Ok(group_phases(on_circle, phase_tol, cluster_tol))
}

/// Group `(phase, critical point)` pairs by phase (wrapping at `2 pi`) and merge
/// clustered points into touch points with their branch counts.
pub(crate) fn group_phases(mut on_circle: Vec<(f64, Complex64)>, phase_tol: f64, cluster_tol: f64) -> Vec<CriticalPhase> {
    on_circle.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<Vec<(f64, Complex64)>> = Vec::new();
    for entry in on_circle {
        match groups.last_mut() {
            Some(g) if entry.0 - g[0].0 < phase_tol => g.push(entry),
            _ => groups.push(vec![entry]),
        }
    }
    if groups.len() > 1 {
        let first = groups[0][0].0;
        let last = groups.last().unwrap()[0].0;
        if first + TAU - last < phase_tol {
            let tail = groups.pop().unwrap();
            groups[0].extend(tail);
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let theta = g[0].0;
            let locs: Vec<Complex64> = g.iter().map(|e| e.1).collect();
            let points = clusters(&locs, cluster_tol)
                .into_iter()
                .map(|idx| {
                    let centre = idx.iter().map(|&i| locs[i]).sum::<Complex64>() / idx.len() as f64;
                    (centre, idx.len() + 1)
                })
                .collect();
            CriticalPhase { theta, points }
        })
        .collect()
}

/// `arg` mapped into `[0, 2 pi)`, with values within 1e-12 of `2 pi` sent to `0`.
pub(crate) fn snap_phase(arg: f64) -> f64 {
    let mut t = if arg < 0.0 { arg + TAU } else { arg };
    if !(1e-15..TAU - 1e-12).contains(&t) {
        t = 0.0;
    }
    t
}

pub(crate) struct PolyFiber<'a> {
    pub p: &'a MonicPolynomial,
    pub radius: f64,
}

impl Fiber for PolyFiber<'_> {
    type Point = Complex64;

    fn degree(&self) -> usize {
        self.p.degree()
    }

    fn solve(&self, t: f64, hints: Option<&[Complex64]>) -> Result<Vec<Complex64>> {
        let w = Complex64::from_polar(self.radius, t);
        let mut z = self.p.solve_preimages(w, hints)?;
        if hints.is_none() {
            z.sort_by(|a, b| {
                snap_phase(a.arg())
                    .total_cmp(&snap_phase(b.arg()))
                    .then(a.norm().total_cmp(&b.norm()))
            });
        }
        Ok(z)
    }

    fn velocity(&self, t: f64, z: &Complex64) -> Complex64 {
        let w = Complex64::from_polar(self.radius, t);
        Complex64::i() * w / self.p.derivative_at(*z)
    }

    fn shift(&self, z: &Complex64, delta: Complex64) -> Complex64 {
        z + delta
    }

    fn distance(&self, a: &Complex64, b: &Complex64) -> f64 {
        (a - b).norm()
    }

    fn metric_norm(&self, _z: &Complex64, v: Complex64) -> f64 {
        v.norm()
    }
}

/// Boundary monodromy together with the circle it was computed on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Monodromy {
    pub permutation: Vec<usize>,
    pub perturbed: bool,
}

pub fn trace(p: &MonicPolynomial, opts: &TraceOptions) -> Result<LevelCurve> {
    opts.validate()?;
    let ctl = opts.step_control(p);
    let phases = critical_phases(p, 1.0, opts.critical_phase_tol, opts.touch_merge_tol)?;
    let fiber = PolyFiber { p, radius: 1.0 };
    let splits: Vec<Split<Complex64>> = phases
        .iter()
        .map(|cp| Split {
            t: cp.theta,
            nodes: cp
                .points
                .iter()
                .map(|&(point, branches)| GlueNode { point, branches })
                .collect(),
        })
        .collect();
    let glue_radius = 2.0 * ctl.spatial_step_max;
    let traced = continuation::trace_closed(&fiber, &splits, 0.0, opts.reverse, glue_radius, &ctl)?;

    let (monodromy, monodromy_perturbed) = match traced.monodromy {
        Some(sigma) => (sigma, false),
        None => (monodromy_with(p, opts)?.permutation, true),
    };
    let components = traced
        .components
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|v| Vertex {
                    z: v.point,
                    theta: v.t,
                    branch: v.branch,
                })
                .collect()
        })
        .collect();
    Ok(LevelCurve {
        degree: p.degree(),
        components,
        monodromy,
        monodromy_perturbed,
        critical_phases: phases.iter().map(|c| c.theta).collect(),
        touch_points: traced.touch_points,
    })
}

pub fn monodromy(p: &MonicPolynomial) -> Result<Monodromy> {
    monodromy_with(p, &TraceOptions::default())
}

/// Monodromy of the preimages of `1` around the unit circle, or around the
/// circle of radius `1 + 2 * critical_phase_tol` when a critical value is on it.
pub fn monodromy_with(p: &MonicPolynomial, opts: &TraceOptions) -> Result<Monodromy> {
    opts.validate()?;
    let on_circle = !critical_phases(p, 1.0, opts.critical_phase_tol, opts.touch_merge_tol)?.is_empty();
    let radius = if on_circle {
        1.0 + 2.0 * opts.critical_phase_tol
    } else {
        1.0
    };
    let fiber = PolyFiber { p, radius };
    let permutation = continuation::monodromy(&fiber, 0.0, opts.reverse, &opts.step_control(p))?;
    Ok(Monodromy {
        permutation,
        perturbed: on_circle,
    })
}

pub fn component_count(p: &MonicPolynomial) -> Result<usize> {
    Ok(trace(p, &TraceOptions::default())?.component_count())
}

pub fn is_connected(p: &MonicPolynomial) -> Result<bool> {
    Ok(component_count(p)? == 1)
}

/// Cycle decomposition of a permutation, each cycle starting at its smallest element.
pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut cycle = vec![];
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            cycle.push(k);
            k = perm[k];
        }
        out.push(cycle);
    }
    out
}

pub fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_of_rotation() {
        assert_eq!(cycles(&[1, 2, 0]), vec![vec![0, 1, 2]]);
        assert_eq!(cycles(&[0, 1]).len(), 2);
    }

    #[test]
    fn snap_phase_wraps_near_two_pi() {
        assert_eq!(snap_phase(-1e-17), 0.0);
        assert!((snap_phase(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn bad_options_rejected() {
        let opts = TraceOptions {
            residual_tol: 0.0,
            ..Default::default()
        };
        assert!(opts.validate().is_err());
    }

    #[test]
    fn z2_plus_1_has_one_critical_phase_at_zero() {
        let p = MonicPolynomial::power_plus(2, Complex64::new(1.0, 0.0)).unwrap();
        let phases = critical_phases(&p, 1.0, 1e-6, 1e-6).unwrap();
        assert_eq!(phases.len(), 1);
        assert_eq!(phases[0].theta, 0.0);
        assert_eq!(phases[0].points.len(), 1);
        assert_eq!(phases[0].points[0].1, 2);
    }
}
