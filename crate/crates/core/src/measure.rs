//! Length of `E(p)` and the quantitative facts about it.
//!
//! Three independent length estimates are provided:
//!
//! - [`length_integral`]: `int_0^{2 pi} sum_k 1/|p'(z_k(theta))| d theta`, where `z_k`
//!   are the preimages of `e^{i theta}`; the inverse function has derivative
//!   `1/p'`, so this is exactly the arc length pulled back to the circle.
//! - [`length_polyline`]: summed segment lengths of a traced curve.
//! - [`crofton_length`]: `1/2 int_0^pi int N(theta, x) dx d theta`, the average
//!   number of crossings with lines.
//!
//! Bound checks cover the `2d` line-crossing count, the projection inequality
//! for connected pieces, and Cartan's disc cover of sublevel sets.

use std::cell::RefCell;
use std::f64::consts::{E, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry;
use crate::levelset::{self, LevelCurve, TraceOptions};
use crate::poly::MonicPolynomial;
use crate::quadrature::{self, QuadOptions, QuadResult};

/// `pi (sqrt 10 - 3 sqrt 2 + 4)`, the hull-perimeter bound for connected sets of capacity 1.
pub fn alpha0_bound() -> f64 {
    PI * (10f64.sqrt() - 3.0 * 2f64.sqrt() + 4.0)
}

/// Borwein's linear constant `8 pi e`.
pub fn borwein_constant() -> f64 {
    8.0 * PI * E
}

/// Default panel budget for [`length_integral`].
pub const MAX_PANELS: usize = 1 << 12;

/// Critical values this close to the circle (but off it) seed extra panel breaks.
const NEAR_CIRCLE: f64 = 0.25;

/// Exact length of `E(p)`, to an estimated absolute error `tol * (1 + length)`.
pub fn length_integral(p: &MonicPolynomial, tol: f64) -> Result<f64> {
    Ok(length_integral_detailed(p, tol)?.value)
}

/// [`length_integral`] with the quadrature diagnostics.
pub fn length_integral_detailed(p: &MonicPolynomial, tol: f64) -> Result<QuadResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput("quadrature tolerance must be positive".into()));
    }
    let defaults = TraceOptions::default();
    let phases = levelset::critical_phases(p, 1.0, defaults.critical_phase_tol, defaults.touch_merge_tol)?;
    let near: Vec<f64> = p
        .critical_values()?
        .into_iter()
        .filter(|a| {
            let off = (a.norm() - 1.0).abs();
            off >= defaults.critical_phase_tol && off < NEAR_CIRCLE
        })
        .map(|a| levelset::snap_phase(a.arg()))
        .collect();

    let opts = QuadOptions {
        tol,
        max_panels: MAX_PANELS,
        min_width: 1e-12,
    };
    let hint: RefCell<Option<Vec<Complex64>>> = RefCell::new(None);
    let density = |base: f64, offset: f64| -> Result<f64> {
        let w = Complex64::from_polar(1.0, base) * Complex64::from_polar(1.0, offset);
        let mut slot = hint.borrow_mut();
        let z = p.solve_preimages(w, slot.as_deref())?;
        let value = z.iter().map(|&zk| 1.0 / p.derivative_at(zk).norm()).sum();
        *slot = Some(z);
        Ok(value)
    };

    if phases.is_empty() {
        let mut breaks: Vec<f64> = (0..=8).map(|k| TAU * k as f64 / 8.0).collect();
        breaks.extend(near.iter().copied());
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        return quadrature::integrate(|t| density(0.0, t), &breaks, &opts);
    }

    // On-circle critical values make the density blow up like |theta - s|^{1/m - 1}
    // with m branches meeting. Each half-arc is mapped by theta = s + H u^m, which
    // turns the density into a smooth function of u.
    let m = phases.len();
    let mut total = QuadResult {
        value: 0.0,
        error: 0.0,
        panels: 0,
        evaluations: 0,
    };
    for i in 0..m {
        let a = phases[i].theta;
        let b = if i + 1 < m { phases[i + 1].theta } else { phases[0].theta + TAU };
        let half = 0.5 * (b - a);
        // Anchor the right half at the unshifted phase: e^{i (s + 2 pi)} carries a
        // rounding error that swamps offsets of order 1e-14.
        let b_base = phases[(i + 1) % m].theta;
        for (anchor, base, sign, order) in [
            (a, a, 1.0, meeting(&phases[i])),
            (b, b_base, -1.0, meeting(&phases[(i + 1) % m])),
        ] {
            let order_f = order as f64;
            let mut breaks = vec![0.0, 0.5, 1.0];
            for &t in &near {
                for shift in [-TAU, 0.0, TAU] {
                    let off = (t + shift - anchor) * sign;
                    if off > 0.0 && off < half {
                        breaks.push((off / half).powf(1.0 / order_f));
                    }
                }
            }
            breaks.sort_by(f64::total_cmp);
            breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
            let r = quadrature::integrate(
                |u| {
                    let offset = sign * half * u.powi(order as i32);
                    let jac = half * order_f * u.powi(order as i32 - 1);
                    Ok(density(base, offset)? * jac)
                },
                &breaks,
                &opts,
            )?;
            total.value += r.value;
            total.error += r.error;
            total.panels += r.panels;
            total.evaluations += r.evaluations;
        }
    }
    Ok(total)
}

fn meeting(phase: &levelset::CriticalPhase) -> usize {
    phase.points.iter().map(|p| p.1).max().unwrap_or(2)
}

fn closed_length(points: &[Complex64]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    (0..n).map(|i| (points[(i + 1) % n] - points[i]).norm()).sum()
}

/// Sum of closed-polyline lengths over all components.
pub fn length_polyline(curve: &LevelCurve) -> f64 {
    curve.polylines().iter().map(|pl| closed_length(pl)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CroftonEstimate {
    pub length: f64,
    /// Standard error of the direction average.
    pub stderr: f64,
}

/// Crofton estimate `1/2 int_0^pi int N(theta, x) dx d theta` on an `n_theta x n_x`
/// midpoint grid over polyline segments.
///
/// Segments are counted on half-open projection intervals `[lo, hi)`, so a vertex
/// lying on a test line counts once when the curve passes through and twice or
/// not at all when it only touches.
pub fn crofton_polylines(polylines: &[Vec<Complex64>], n_theta: usize, n_x: usize) -> Result<CroftonEstimate> {
    if n_theta < 8 || n_x < 8 {
        return Err(Error::InvalidInput("Crofton grid needs n_theta, n_x >= 8".into()));
    }
    if polylines.iter().all(|p| p.len() < 2) {
        return Err(Error::InvalidInput("empty curve".into()));
    }
    let mut per_direction = Vec::with_capacity(n_theta);
    let mut counts = vec![0i64; n_x + 1];
    for i in 0..n_theta {
        let theta = (i as f64 + 0.5) * PI / n_theta as f64;
        let (c, s) = (theta.cos(), theta.sin());
        let proj = |z: Complex64| z.re * c + z.im * s;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for z in polylines.iter().flatten() {
            let x = proj(*z);
            lo = lo.min(x);
            hi = hi.max(x);
        }
        let dx = (hi - lo) / n_x as f64;
        if dx <= 0.0 {
            per_direction.push(0.0);
            continue;
        }
        counts.iter_mut().for_each(|v| *v = 0);
        let index = |x: f64| -> usize { (((x - lo) / dx - 0.5).ceil().max(0.0) as usize).min(n_x) };
        for pl in polylines {
            let n = pl.len();
            if n < 2 {
                continue;
            }
            for k in 0..n {
                let (xa, xb) = (proj(pl[k]), proj(pl[(k + 1) % n]));
                let (a, b) = if xa <= xb { (xa, xb) } else { (xb, xa) };
                let (ja, jb) = (index(a), index(b));
                if ja < jb {
                    counts[ja] += 1;
                    counts[jb] -= 1;
                }
            }
        }
        let mut running = 0i64;
        let mut total = 0i64;
        for v in &counts[..n_x] {
            running += v;
            total += running;
        }
        per_direction.push(total as f64 * dx);
    }
    let n = per_direction.len() as f64;
    let mean = per_direction.iter().sum::<f64>() / n;
    let var = per_direction.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(CroftonEstimate {
        length: 0.5 * PI * mean,
        stderr: 0.5 * PI * (var / n).sqrt(),
    })
}

pub fn crofton_length(curve: &LevelCurve, n_theta: usize, n_x: usize) -> Result<CroftonEstimate> {
    crofton_polylines(&curve.polylines(), n_theta, n_x)
}

/// The line `{z : Re(z e^{-i theta}) = x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct Line {
    pub theta: f64,
    pub x: f64,
}

impl Line {
    /// Normalises `theta` into `[0, pi)`, flipping the offset sign when needed.
    pub fn new(theta: f64, x: f64) -> Self {
        let t = theta.rem_euclid(TAU);
        if t >= PI {
            Self { theta: t - PI, x: -x }
        } else {
            Self { theta: t, x }
        }
    }

    /// Signed offset of `z` from the line.
    pub fn offset(&self, z: Complex64) -> f64 {
        z.re * self.theta.cos() + z.im * self.theta.sin() - self.x
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineIntersections {
    /// Distinct intersection points (crossings closer than the merge radius coincide).
    pub points: Vec<Complex64>,
    /// The line touched a vertex tangentially and was shifted by `1e-9`.
    pub perturbed: bool,
}

fn crossing_points(curve: &LevelCurve, line: &Line) -> (Vec<Complex64>, bool) {
    let scale = 1.0 + curve.points().map(|z| z.norm()).fold(0.0, f64::max);
    let tie = 1e-12 * scale;
    let mut tangent = false;
    let mut points = Vec::new();
    for comp in &curve.components {
        let n = comp.len();
        if n < 2 {
            continue;
        }
        let s: Vec<f64> = comp.iter().map(|v| line.offset(v.z)).collect();
        for k in 0..n {
            let (sa, sb) = (s[k], s[(k + 1) % n]);
            if sa.abs() <= tie {
                let prev = s[(k + n - 1) % n];
                if prev.abs() > tie && sb.abs() > tie && prev.signum() == sb.signum() {
                    tangent = true;
                }
            }
            if sa.min(sb) <= 0.0 && 0.0 < sa.max(sb) {
                let (za, zb) = (comp[k].z, comp[(k + 1) % n].z);
                let frac = sa / (sa - sb);
                points.push(za + (zb - za) * frac);
            }
        }
    }
    (points, tangent)
}

/// Intersections of a traced curve with a line.
pub fn line_intersections(curve: &LevelCurve, line: &Line) -> LineIntersections {
    let (mut raw, tangent) = crossing_points(curve, line);
    let mut perturbed = false;
    if tangent {
        raw = crossing_points(curve, &Line { x: line.x + 1e-9, ..*line }).0;
        perturbed = true;
    }
    let scale = 1.0 + curve.points().map(|z| z.norm()).fold(0.0, f64::max);
    let merge = 1e-6 * scale;
    let mut distinct: Vec<Complex64> = Vec::new();
    for z in raw {
        if distinct.iter().all(|q| (q - z).norm() > merge) {
            distinct.push(z);
        }
    }
    LineIntersections {
        points: distinct,
        perturbed,
    }
}

/// Number of distinct points where the curve meets the line.
pub fn line_intersection_count(curve: &LevelCurve, line: &Line) -> usize {
    line_intersections(curve, line).points.len()
}

fn union_measure(mut intervals: Vec<(f64, f64)>) -> f64 {
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for (a, b) in intervals {
        current = match current {
            Some((ca, cb)) if a <= cb => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((a, b)) = current {
        total += b - a;
    }
    total
}

/// Lebesgue measure of the projections of closed polylines onto the two axes.
pub fn polyline_projections(polylines: &[Vec<Complex64>]) -> (f64, f64) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for pl in polylines {
        let n = pl.len();
        if n == 1 {
            xs.push((pl[0].re, pl[0].re));
            ys.push((pl[0].im, pl[0].im));
        }
        let closing = if n > 2 { n } else { n.saturating_sub(1) };
        for k in 0..closing {
            let (a, b) = (pl[k], pl[(k + 1) % n]);
            xs.push((a.re.min(b.re), a.re.max(b.re)));
            ys.push((a.im.min(b.im), a.im.max(b.im)));
        }
    }
    (union_measure(xs), union_measure(ys))
}

pub fn projection_lengths(curve: &LevelCurve) -> (f64, f64) {
    polyline_projections(&curve.polylines())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentProjection {
    pub length: f64,
    pub px: f64,
    pub py: f64,
    pub diameter: f64,
    /// `length <= 2d (px + py)`
    pub projection_bound_holds: bool,
    /// `2d (px + py) <= 4d diam`
    pub diameter_bound_holds: bool,
}

/// Per-component check of `|l| <= 2d(|pi_x l| + |pi_y l|) <= 4d diam(l)`.
pub fn projection_corollary(curve: &LevelCurve, d: usize) -> Vec<ComponentProjection> {
    let d = d as f64;
    curve
        .polylines()
        .into_iter()
        .map(|pl| {
            let length = closed_length(&pl);
            let (px, py) = polyline_projections(std::slice::from_ref(&pl));
            let diameter = geometry::convex_hull(&pl).diameter;
            let tol = 1e-6 * length;
            let middle = 2.0 * d * (px + py);
            ComponentProjection {
                length,
                px,
                py,
                diameter,
                projection_bound_holds: length <= middle + tol,
                diameter_bound_holds: middle <= 4.0 * d * diameter + tol,
            }
        })
        .collect()
}

pub fn verify_projection_corollary(curve: &LevelCurve, d: usize) -> bool {
    projection_corollary(curve, d)
        .iter()
        .all(|c| c.projection_bound_holds && c.diameter_bound_holds)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
}

/// Discs covering `{z : |p(z)| < M}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscCover {
    pub discs: Vec<Disc>,
    pub level: f64,
    pub total_radius: f64,
    /// `2 e M^{1/d}`
    pub bound: f64,
}

impl DiscCover {
    pub fn contains(&self, z: Complex64) -> bool {
        self.discs.iter().any(|d| (z - d.center).norm() <= d.radius)
    }

    pub fn certificate_holds(&self) -> bool {
        self.total_radius <= self.bound + 1e-9 && self.discs.iter().all(|d| d.radius > 0.0)
    }
}

/// Cartan's covering of the sublevel set `{|p| < M}`.
///
/// With `rho = e M^{1/d} / d`, repeatedly take the largest `lambda` for which some
/// disc of radius `lambda rho` holds `lambda` of the remaining roots, remove them,
/// and record the concentric disc of radius `2 lambda rho`. Outside the recorded
/// discs the `k`-th nearest root is at distance at least `k rho`, so
/// `|p| >= d! rho^d >= M`; the radii sum to exactly `2 e M^{1/d}`.
pub fn cartan_cover(p: &MonicPolynomial, level: f64) -> Result<DiscCover> {
    if level <= 0.0 || !level.is_finite() {
        return Err(Error::InvalidInput("Cartan level M must be positive".into()));
    }
    let d = p.degree();
    let h = E * level.powf(1.0 / d as f64);
    let rho = h / d as f64;
    let mut remaining: Vec<Complex64> = p.roots().to_vec();
    let mut discs = Vec::new();
    while !remaining.is_empty() {
        let (lambda, center) = largest_cluster(&remaining, rho);
        let radius = lambda as f64 * rho;
        let mut order: Vec<usize> = (0..remaining.len()).collect();
        order.sort_by(|&a, &b| (remaining[a] - center).norm().total_cmp(&(remaining[b] - center).norm()));
        let take: Vec<usize> = order[..lambda].to_vec();
        remaining = remaining
            .iter()
            .enumerate()
            .filter(|(i, _)| !take.contains(i))
            .map(|(_, z)| *z)
            .collect();
        discs.push(Disc {
            center,
            radius: 2.0 * radius,
        });
    }
    let total_radius = discs.iter().map(|d| d.radius).sum();
    Ok(DiscCover {
        discs,
        level,
        total_radius,
        bound: 2.0 * h,
    })
}

/// Largest `lambda` such that a disc of radius `lambda rho` contains at least
/// `lambda` points, with a centre achieving it.
///
/// A disc holding a given set can always be moved until it is centred on one of
/// the points or has two of them on its boundary, so those centres suffice.
fn largest_cluster(points: &[Complex64], rho: f64) -> (usize, Complex64) {
    let n = points.len();
    let count_within = |c: Complex64, r: f64| points.iter().filter(|z| (*z - c).norm() <= r * (1.0 + 1e-12) + 1e-300).count();
    for lambda in (1..=n).rev() {
        let r = lambda as f64 * rho;
        for &c in points {
            if count_within(c, r) >= lambda {
                return (lambda, c);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (points[i], points[j]);
                let chord = (b - a).norm();
                if chord > 2.0 * r || chord == 0.0 {
                    continue;
                }
                let mid = 0.5 * (a + b);
                let depth = (r * r - 0.25 * chord * chord).max(0.0).sqrt();
                let normal = (b - a) * Complex64::i() / chord;
                for c in [mid + normal * depth, mid - normal * depth] {
                    if count_within(c, r) >= lambda {
                        return (lambda, c);
                    }
                }
            }
        }
    }
    (1, points[0])
}

/// All three length estimates and the bound checks for one polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthReport {
    pub degree: usize,
    pub exact_integral: f64,
    pub exact_error: f64,
    pub polyline: f64,
    pub crofton: f64,
    pub crofton_stderr: f64,
    pub bound_alpha0: f64,
    pub satisfies_theorem1: bool,
    pub borwein_bound: f64,
    pub satisfies_borwein: bool,
    pub connected: bool,
    pub components: usize,
}

/// Crofton grid used by [`verify_theorem1`].
pub const REPORT_CROFTON_GRID: usize = 256;

/// Check `|E(p)| <= alpha_0 d` with `alpha_0 < pi (sqrt 10 - 3 sqrt 2 + 4)`.
pub fn verify_theorem1(p: &MonicPolynomial, tol: f64) -> Result<LengthReport> {
    let curve = levelset::trace(p, &TraceOptions::default())?;
    report_for(p, &curve, tol)
}

/// [`verify_theorem1`] on an already traced curve.
pub fn report_for(p: &MonicPolynomial, curve: &LevelCurve, tol: f64) -> Result<LengthReport> {
    let exact = length_integral_detailed(p, tol)?;
    let crofton = crofton_length(curve, REPORT_CROFTON_GRID, REPORT_CROFTON_GRID)?;
    let d = p.degree() as f64;
    let bound_alpha0 = alpha0_bound();
    let borwein_bound = borwein_constant() * d;
    Ok(LengthReport {
        degree: p.degree(),
        exact_integral: exact.value,
        exact_error: exact.error,
        polyline: length_polyline(curve),
        crofton: crofton.length,
        crofton_stderr: crofton.stderr,
        bound_alpha0,
        satisfies_theorem1: exact.value <= bound_alpha0 * d + 1e-6,
        borwein_bound,
        satisfies_borwein: exact.value <= borwein_bound,
        connected: curve.component_count() == 1,
        components: curve.component_count(),
    })
}
