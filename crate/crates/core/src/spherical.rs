//! Preimages of circles under rational maps, measured on the Riemann sphere.
//!
//! Both the map `f` and the circle `C` are reduced to one rational function
//! `G = A / B` with `f^{-1}(C) = {|G| = 1}`, and the preimages of `e^{it}` are
//! continued in `t` exactly as for polynomial lemniscates. Solving happens in a
//! coordinate `s` related to `z` by a rotation of the sphere chosen so that `s = inf`
//! is far from the curve; vertices are then reported in the plane chart `z` or
//! the inverted chart `u = 1/z`.
//!
//! Lengths are in the spherical metric `2|dz| / (1 + |z|^2)`, in which great
//! circles have length `2 pi`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::continuation::{self, Fiber, GlueNode, Split, StepControl};
use crate::error::{Error, Result};
use crate::levelset::{group_phases, snap_phase};
use crate::roots;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `f = numerator / denominator`, coefficients constant term first, denominator monic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalFunction {
    numerator: Vec<Complex64>,
    denominator: Vec<Complex64>,
    degree: usize,
}

fn trim(mut c: Vec<Complex64>) -> Vec<Complex64> {
    while c.len() > 1 && c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    c
}

fn roots_of(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let lead = *c.last().expect("nonempty");
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let scale = 1.0 + monic.iter().map(|x| x.norm()).sum::<f64>();
    roots::aberth(&monic, None, |_, r| r <= 1e-10 * scale.powi(2))
        .map(|s| s.roots)
        .map_err(|best| Error::NoConvergence {
            stage: "rational roots",
            w: ZERO,
            residual: best.residual,
        })
}

impl RationalFunction {
    /// Normalises the denominator to be monic and checks that numerator and
    /// denominator have no common root (within `1e-8` relative).
    pub fn new(numerator: &[Complex64], denominator: &[Complex64]) -> Result<Self> {
        if numerator.iter().chain(denominator).any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite("rational coefficients"));
        }
        let num = trim(numerator.to_vec());
        let den = trim(denominator.to_vec());
        if num.is_empty() || den.is_empty() || den.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::InvalidInput("denominator is identically zero".into()));
        }
        if num.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::DegreeZero);
        }
        let lead = *den.last().expect("nonempty");
        let num: Vec<Complex64> = num.iter().map(|c| c / lead).collect();
        let den: Vec<Complex64> = den.iter().map(|c| c / lead).collect();
        let degree = (num.len() - 1).max(den.len() - 1);
        if degree == 0 {
            return Err(Error::DegreeZero);
        }
        if degree > crate::poly::MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree,
                max: crate::poly::MAX_DEGREE,
            });
        }
        if num.len() > 1 && den.len() > 1 {
            let zn = roots_of(&num)?;
            let zd = roots_of(&den)?;
            for a in &zn {
                for b in &zd {
                    if (a - b).norm() <= 1e-8 * (1.0 + a.norm()) {
                        return Err(Error::InvalidInput(format!("numerator and denominator share the root {a}")));
                    }
                }
            }
        }
        Ok(Self {
            numerator: num,
            denominator: den,
            degree,
        })
    }

    /// `z^d`.
    pub fn monomial(d: usize) -> Result<Self> {
        let mut num = vec![ZERO; d + 1];
        num[d] = ONE;
        Self::new(&num, &[ONE])
    }

    /// `(a z + b) / (c z + d)`.
    pub fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        if (a * d - b * c).norm() < 1e-12 {
            return Err(Error::InvalidInput("degenerate Mobius map (ad - bc = 0)".into()));
        }
        Self::new(&[b, a], &[d, c])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.denominator
    }

    /// `f(z)` as a point of the sphere.
    pub fn evaluate(&self, z: Complex64) -> SpherePoint {
        let n = roots::horner(&self.numerator, z);
        let d = roots::horner(&self.denominator, z);
        SpherePoint::ratio(n, d)
    }
}

/// A circle on the sphere: a Euclidean circle, or a line (a circle through `inf`)
/// `{z : Re(z e^{-i theta}) = x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CircleOnSphere {
    Circle { center: Complex64, radius: f64 },
    Line { theta: f64, x: f64 },
}

impl CircleOnSphere {
    pub fn unit_circle() -> Self {
        Self::Circle {
            center: ZERO,
            radius: 1.0,
        }
    }

    pub fn real_line() -> Self {
        Self::Line { theta: PI / 2.0, x: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Circle { center, radius } => {
                if !(radius > 0.0 && radius.is_finite() && center.re.is_finite() && center.im.is_finite()) {
                    return Err(Error::InvalidInput("circle radius must be positive and finite".into()));
                }
            }
            Self::Line { theta, x } => {
                if !(theta.is_finite() && x.is_finite()) {
                    return Err(Error::NonFinite("line parameters"));
                }
            }
        }
        Ok(())
    }
}

/// A point of the sphere in one of the two charts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SpherePoint {
    /// `z`
    Plane(Complex64),
    /// `u = 1/z`; `Inverted(0)` is `inf`.
    Inverted(Complex64),
}

impl SpherePoint {
    /// `z` in whichever chart keeps the coordinate inside the unit disc.
    pub fn new(z: Complex64) -> Self {
        if z.norm() <= 1.0 {
            Self::Plane(z)
        } else {
            Self::Inverted(z.inv())
        }
    }

    pub fn infinity() -> Self {
        Self::Inverted(ZERO)
    }

    /// `num / den`, with `den = 0` giving `inf`.
    pub fn ratio(num: Complex64, den: Complex64) -> Self {
        if num.norm() <= den.norm() {
            Self::Plane(num / den)
        } else {
            Self::Inverted(den / num)
        }
    }

    /// The chart coordinate.
    pub fn coordinate(&self) -> Complex64 {
        match *self {
            Self::Plane(z) | Self::Inverted(z) => z,
        }
    }

    pub fn is_inverted(&self) -> bool {
        matches!(self, Self::Inverted(_))
    }

    /// `z`, or `None` at `inf`.
    pub fn plane(&self) -> Option<Complex64> {
        match *self {
            Self::Plane(z) => Some(z),
            Self::Inverted(u) if u.norm() > 0.0 => Some(u.inv()),
            Self::Inverted(_) => None,
        }
    }

    /// The same point in the other chart, when that chart contains it.
    pub fn flipped(&self) -> Option<Self> {
        match *self {
            Self::Plane(z) if z.norm() > 0.0 => Some(Self::Inverted(z.inv())),
            Self::Inverted(u) if u.norm() > 0.0 => Some(Self::Plane(u.inv())),
            _ => None,
        }
    }

    /// Stereographic image on the unit sphere; `0` is the south pole, `inf` the north.
    pub fn unit_vector(&self) -> [f64; 3] {
        match *self {
            Self::Plane(z) => {
                let n = 1.0 + z.norm_sqr();
                [2.0 * z.re / n, 2.0 * z.im / n, (z.norm_sqr() - 1.0) / n]
            }
            Self::Inverted(u) => {
                let n = 1.0 + u.norm_sqr();
                [2.0 * u.re / n, -2.0 * u.im / n, (1.0 - u.norm_sqr()) / n]
            }
        }
    }

    /// Chordal distance, at most 2.
    pub fn chordal(&self, other: &Self) -> f64 {
        let (a, b) = (self.unit_vector(), other.unit_vector());
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }

    /// Great-circle distance.
    pub fn geodesic(&self, other: &Self) -> f64 {
        2.0 * (0.5 * self.chordal(other)).min(1.0).asin()
    }
}

/// Rotation of the sphere `z = (a s + b) / (-conj(b) s + conj(a))`, `|a|^2 + |b|^2 = 1`.
#[derive(Debug, Clone, Copy)]
struct Rotation {
    a: Complex64,
    b: Complex64,
}

impl Rotation {
    /// The rotation sending `s = inf` to `q`.
    fn with_pole(q: Complex64) -> Self {
        let n = (1.0 + q.norm_sqr()).sqrt();
        Self {
            a: q / n,
            b: Complex64::new(-1.0 / n, 0.0),
        }
    }

    fn apply(&self, s: Complex64) -> SpherePoint {
        SpherePoint::ratio(self.a * s + self.b, -self.b.conj() * s + self.a.conj())
    }

    /// `P(z(s)) (-conj(b) s + conj(a))^d` as a polynomial in `s`.
    fn pull_back(&self, p: &[Complex64], d: usize) -> Vec<Complex64> {
        let num = [self.b, self.a];
        let den = [self.a.conj(), -self.b.conj()];
        let mut out = vec![ZERO; d + 1];
        for (k, c) in p.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let mut term = vec![*c];
            for _ in 0..k {
                term = poly_mul(&term, &num);
            }
            for _ in k..d {
                term = poly_mul(&term, &den);
            }
            for (o, t) in out.iter_mut().zip(term) {
                *o += t;
            }
        }
        out
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pad(mut p: Vec<Complex64>, len: usize) -> Vec<Complex64> {
    p.resize(len, ZERO);
    p
}

/// `(A, B)` with `f^{-1}(C) = {|A / B| = 1}`, both padded to degree `d`.
fn reduce(f: &RationalFunction, c: &CircleOnSphere) -> (Vec<Complex64>, Vec<Complex64>) {
    let d = f.degree();
    let n = pad(f.numerator.clone(), d + 1);
    let den = pad(f.denominator.clone(), d + 1);
    match *c {
        // |f - c| = r  <=>  |N - c D| = r |D|
        CircleOnSphere::Circle { center, radius } => (
            n.iter().zip(&den).map(|(a, b)| a - center * b).collect(),
            den.iter().map(|b| b * radius).collect(),
        ),
        // Re(f e^{-i theta}) = x  <=>  |g - (x+1)| = |g - (x-1)|, g = f e^{-i theta}
        CircleOnSphere::Line { theta, x } => {
            let rot = Complex64::from_polar(1.0, -theta);
            (
                n.iter().zip(&den).map(|(a, b)| rot * a - (x + 1.0) * b).collect(),
                n.iter().zip(&den).map(|(a, b)| rot * a - (x - 1.0) * b).collect(),
            )
        }
    }
}

fn fibonacci_sphere(n: usize) -> Vec<SpherePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let zc = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - zc * zc).sqrt();
            let phi = golden * k as f64;
            let v = [r * phi.cos(), r * phi.sin(), zc];
            // inverse stereographic projection from the north pole
            SpherePoint::Plane(Complex64::new(v[0], v[1]) / (1.0 - v[2]))
        })
        .collect()
}

/// The fiber `{A(s) = e^{it} B(s)}` in the rotated coordinate.
struct SphereFiber {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    da: Vec<Complex64>,
    db: Vec<Complex64>,
}

impl SphereFiber {
    fn degree(&self) -> usize {
        self.a.len() - 1
    }

    fn value(&self, s: Complex64) -> SpherePoint {
        SpherePoint::ratio(roots::horner(&self.a, s), roots::horner(&self.b, s))
    }
}

fn chordal_plane(a: Complex64, b: Complex64) -> f64 {
    2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
}

impl Fiber for SphereFiber {
    type Point = Complex64;

    fn degree(&self) -> usize {
        SphereFiber::degree(self)
    }

    fn solve(&self, t: f64, hints: Option<&[Complex64]>) -> Result<Vec<Complex64>> {
        let zeta = Complex64::from_polar(1.0, t);
        let h: Vec<Complex64> = self.a.iter().zip(&self.b).map(|(a, b)| a - zeta * b).collect();
        let lead = *h.last().expect("nonempty");
        let monic: Vec<Complex64> = h.iter().map(|c| c / lead).collect();
        let size = 1.0 + monic.iter().map(|c| c.norm()).sum::<f64>();
        let d = self.degree();
        let accept = |zs: &[Complex64], residual: f64| {
            let zmax = zs.iter().map(|z| z.norm()).fold(1.0, f64::max);
            residual <= 1e-10 * size * zmax.powi(d as i32)
        };
        let hint = hints.filter(|h| h.len() == d);
        let solve = roots::aberth(&monic, hint, accept).map_err(|best| Error::NoConvergence {
            stage: "sphere preimages",
            w: zeta,
            residual: best.residual,
        })?;
        Ok(match hint {
            Some(h) => roots::match_to_hint(&solve.roots, h),
            None => {
                let mut z = solve.roots;
                z.sort_by(|a, b| snap_phase(a.arg()).total_cmp(&snap_phase(b.arg())).then(a.norm().total_cmp(&b.norm())));
                z
            }
        })
    }

    fn velocity(&self, t: f64, s: &Complex64) -> Complex64 {
        let zeta = Complex64::from_polar(1.0, t);
        let b = roots::horner(&self.b, *s);
        let dh = roots::horner(&self.da, *s) - zeta * roots::horner(&self.db, *s);
        Complex64::i() * zeta * b / dh
    }

    fn shift(&self, s: &Complex64, delta: Complex64) -> Complex64 {
        s + delta
    }

    fn distance(&self, a: &Complex64, b: &Complex64) -> f64 {
        chordal_plane(*a, *b)
    }

    fn metric_norm(&self, s: &Complex64, v: Complex64) -> f64 {
        2.0 * v.norm() / (1.0 + s.norm_sqr())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SphereTraceOptions {
    pub phase_step_max: f64,
    /// Largest chordal displacement of a preimage per step.
    pub spatial_step_max: f64,
    /// Largest chordal predictor/corrector gap.
    pub max_deviation: f64,
    pub critical_phase_tol: f64,
    pub touch_merge_tol: f64,
    /// Vertices change chart when their coordinate exceeds this modulus, so
    /// switches happen in the annulus `1/chart_switch < |z| < chart_switch`.
    pub chart_switch: f64,
}

impl Default for SphereTraceOptions {
    fn default() -> Self {
        Self {
            phase_step_max: PI / 64.0,
            spatial_step_max: 0.05,
            max_deviation: 1e-4,
            critical_phase_tol: 1e-6,
            touch_merge_tol: 1e-6,
            chart_switch: 2.0,
        }
    }
}

impl SphereTraceOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.phase_step_max,
            self.spatial_step_max,
            self.max_deviation,
            self.critical_phase_tol,
            self.touch_merge_tol,
        ];
        if !positive.iter().all(|x| *x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidInput("sphere trace tolerances must be positive and finite".into()));
        }
        if !(self.chart_switch > 1.0 && self.chart_switch.is_finite()) {
            return Err(Error::InvalidInput("chart_switch must exceed 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereVertex {
    pub point: SpherePoint,
    /// Phase of `G` at the vertex.
    pub t: f64,
}

/// A traced preimage `f^{-1}(C)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalCurve {
    pub degree: usize,
    /// Closed polylines on the sphere.
    pub components: Vec<Vec<SphereVertex>>,
    pub touch_points: Vec<SpherePoint>,
    pub critical_phases: Vec<f64>,
    pub spherical_length: f64,
}

impl SphericalCurve {
    /// Curve from explicit closed polylines (chart per vertex as given).
    pub fn from_components(degree: usize, components: Vec<Vec<SpherePoint>>) -> Self {
        let components: Vec<Vec<SphereVertex>> = components
            .into_iter()
            .map(|c| c.into_iter().map(|point| SphereVertex { point, t: 0.0 }).collect())
            .collect();
        let mut curve = Self {
            degree,
            components,
            touch_points: Vec::new(),
            critical_phases: Vec::new(),
            spherical_length: 0.0,
        };
        curve.spherical_length = spherical_length(&curve);
        curve
    }

    /// Closed polylines given in the plane chart.
    pub fn from_plane_polylines(degree: usize, polylines: &[Vec<Complex64>]) -> Self {
        Self::from_components(degree, polylines.iter().map(|p| p.iter().map(|z| SpherePoint::Plane(*z)).collect()).collect())
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    fn unit_polylines(&self) -> Vec<Vec<[f64; 3]>> {
        self.components
            .iter()
            .map(|c| c.iter().map(|v| v.point.unit_vector()).collect())
            .collect()
    }
}

/// Keep each component in one chart until its coordinate leaves the disc of
/// radius `switch`, then flip.
fn assign_charts(points: Vec<SpherePoint>, switch: f64) -> Vec<SpherePoint> {
    let mut inverted = points.first().is_some_and(|p| p.is_inverted());
    points
        .into_iter()
        .map(|p| {
            let mut q = if p.is_inverted() == inverted { p } else { p.flipped().unwrap_or(p) };
            if q.coordinate().norm() > switch {
                if let Some(f) = q.flipped() {
                    q = f;
                }
            }
            inverted = q.is_inverted();
            q
        })
        .collect()
}

/// Trace `f^{-1}(C)` with default options.
pub fn preimage_trace(f: &RationalFunction, c: &CircleOnSphere) -> Result<SphericalCurve> {
    preimage_trace_with(f, c, &SphereTraceOptions::default())
}

pub fn preimage_trace_with(f: &RationalFunction, c: &CircleOnSphere, opts: &SphereTraceOptions) -> Result<SphericalCurve> {
    opts.validate()?;
    c.validate()?;
    let d = f.degree();
    let (a, b) = reduce(f, c);

    // Put s = inf where |G| is farthest from 1: that point is off the curve, and
    // A - e^{it} B keeps full degree in s for every t.
    let score = |p: &SpherePoint| {
        let z = p.plane().expect("finite sample");
        let (ga, gb) = (roots::horner(&a, z).norm(), roots::horner(&b, z).norm());
        (ga - gb).abs() / (ga + gb)
    };
    let pole = fibonacci_sphere(64)
        .into_iter()
        .max_by(|p, q| score(p).total_cmp(&score(q)))
        .expect("nonempty sample");
    let rotation = Rotation::with_pole(pole.plane().expect("finite sample"));
    let sa = rotation.pull_back(&a, d);
    let sb = rotation.pull_back(&b, d);
    let fiber = SphereFiber {
        da: roots::derivative(&sa),
        db: roots::derivative(&sb),
        a: sa,
        b: sb,
    };

    let phases = critical_phases(&fiber, opts)?;
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
    let ctl = StepControl {
        phase_step_max: opts.phase_step_max,
        spatial_step_max: opts.spatial_step_max,
        max_deviation: opts.max_deviation,
        min_phase_step: 1e-15,
    };
    let traced = continuation::trace_closed(&fiber, &splits, 0.0, false, 2.0 * opts.spatial_step_max, &ctl)?;

    let components: Vec<Vec<SphereVertex>> = traced
        .components
        .into_iter()
        .map(|comp| {
            let ts: Vec<f64> = comp.iter().map(|v| v.t).collect();
            let pts = assign_charts(comp.iter().map(|v| rotation.apply(v.point)).collect(), opts.chart_switch);
            pts.into_iter().zip(ts).map(|(point, t)| SphereVertex { point, t }).collect()
        })
        .collect();
    let mut curve = SphericalCurve {
        degree: d,
        components,
        touch_points: traced.touch_points.iter().map(|s| rotation.apply(*s)).collect(),
        critical_phases: phases.iter().map(|p| p.theta).collect(),
        spherical_length: 0.0,
    };
    curve.spherical_length = spherical_length(&curve);
    Ok(curve)
}

/// Critical points of `G = A/B` in `s` whose value lies on the unit circle.
fn critical_phases(fiber: &SphereFiber, opts: &SphereTraceOptions) -> Result<Vec<crate::levelset::CriticalPhase>> {
    let d = fiber.degree();
    if d < 2 {
        return Ok(Vec::new());
    }
    // A'B - AB' has formal degree 2d - 2 (the s^{2d-1} terms cancel).
    let lhs = poly_mul(&fiber.da, &fiber.b);
    let rhs = poly_mul(&fiber.a, &fiber.db);
    let w: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(x, y)| x - y).take(2 * d - 1).collect();
    let (w, _at_infinity) = roots::trim_leading(&w, 1e-13);
    if w.len() < 2 {
        return Ok(Vec::new());
    }
    let cps = roots_of(w)?;
    let on_circle: Vec<(f64, Complex64)> = cps
        .into_iter()
        .filter_map(|s| match fiber.value(s) {
            SpherePoint::Plane(g) if (g.norm() - 1.0).abs() < opts.critical_phase_tol => Some((snap_phase(g.arg()), s)),
            SpherePoint::Inverted(u) if (u.norm() - 1.0).abs() < opts.critical_phase_tol => Some((snap_phase((-u.arg()).rem_euclid(TAU)), s)),
            _ => None,
        })
        .collect();
    Ok(group_phases(on_circle, opts.critical_phase_tol, opts.touch_merge_tol.max(1e-3)))
}

/// Spherical length of the curve as a geodesic polygon: each segment contributes
/// the great-circle distance between its endpoints, whatever charts they are in.
pub fn spherical_length(curve: &SphericalCurve) -> f64 {
    curve
        .components
        .iter()
        .map(|c| {
            let n = c.len();
            if n < 2 {
                return 0.0;
            }
            let closing = if n == 2 { 1 } else { n };
            (0..closing).map(|i| c[i].point.geodesic(&c[(i + 1) % n].point)).sum::<f64>()
        })
        .sum()
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = dot(&v, &v).sqrt();
    (n > 0.0 && n.is_finite()).then(|| [v[0] / n, v[1] / n, v[2] / n])
}

/// Crossings of closed unit-vector polylines with the great circle `{y : x . y = 0}`,
/// counted on half-open sign intervals.
fn crossings(polylines: &[Vec<[f64; 3]>], x: &[f64; 3]) -> usize {
    let mut count = 0;
    for pl in polylines {
        let n = pl.len();
        if n < 2 {
            continue;
        }
        let s: Vec<f64> = pl.iter().map(|p| dot(p, x)).collect();
        for k in 0..n {
            let (a, b) = (s[k], s[(k + 1) % n]);
            if a.min(b) <= 0.0 && 0.0 < a.max(b) {
                count += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreatCircleCount {
    pub count: usize,
    /// Some component lies on the great circle itself; it is not counted.
    pub contained: bool,
    /// A vertex touched the great circle tangentially and the centre was nudged by `1e-9`.
    pub perturbed: bool,
}

/// Crossings of the curve with the great circle centred at the unit vector `x`.
pub fn great_circle_intersections(curve: &SphericalCurve, x: [f64; 3]) -> Result<GreatCircleCount> {
    let x = normalize(x).ok_or(Error::InvalidInput("sphere point must be a nonzero vector".into()))?;
    let tie = 1e-12;
    let mut polylines = curve.unit_polylines();
    let before = polylines.len();
    polylines.retain(|pl| !pl.iter().all(|p| dot(p, &x).abs() <= tie));
    let contained = polylines.len() < before;

    let tangent = polylines.iter().any(|pl| {
        let n = pl.len();
        (0..n).any(|k| {
            let s = |i: usize| dot(&pl[i % n], &x);
            let (prev, cur, next) = (s(k + n - 1), s(k), s(k + 1));
            cur.abs() <= tie && prev.abs() > tie && next.abs() > tie && prev.signum() == next.signum()
        })
    });
    let (count, perturbed) = if tangent {
        let helper = if x[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let nudged = normalize([x[0] + 1e-9 * helper[0], x[1] + 1e-9 * helper[1], x[2] + 1e-9 * helper[2]]).expect("unit");
        (crossings(&polylines, &nudged), true)
    } else {
        (crossings(&polylines, &x), false)
    };
    Ok(GreatCircleCount {
        count,
        contained,
        perturbed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincareEstimate {
    pub length: f64,
    pub stderr: f64,
    pub samples: usize,
    /// Samples whose crossing count exceeded `2d`.
    pub over_bound: usize,
}

/// `l(E) = 1/4 int v(E, x) dx` over the sphere (area `4 pi`), estimated as
/// `pi * mean(v)` from uniform random centres `x`.
pub fn poincare_length(curve: &SphericalCurve, n_samples: usize, seed: u64) -> Result<PoincareEstimate> {
    if n_samples < 100 {
        return Err(Error::InvalidInput("Poincare estimator needs at least 100 samples".into()));
    }
    let polylines = curve.unit_polylines();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut over_bound = 0;
    let mut drawn = 0;
    while drawn < n_samples {
        let g: [f64; 3] = [
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        ];
        let Some(x) = normalize(g) else { continue };
        let v = crossings(&polylines, &x) as f64;
        if v > 2.0 * curve.degree as f64 {
            over_bound += 1;
        }
        sum += v;
        sum_sq += v * v;
        drawn += 1;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(PoincareEstimate {
        length: PI * mean,
        stderr: PI * (var / n).sqrt(),
        samples: n_samples,
        over_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem2Check {
    pub degree: usize,
    pub length: f64,
    /// `2 pi d`
    pub bound: f64,
    pub holds: bool,
}

/// Spherical length of `f^{-1}(C)` against `d` great circles.
pub fn theorem2_check(f: &RationalFunction, c: &CircleOnSphere) -> Result<Theorem2Check> {
    let curve = preimage_trace(f, c)?;
    let bound = TAU * f.degree() as f64;
    Ok(Theorem2Check {
        degree: f.degree(),
        length: curve.spherical_length,
        bound,
        holds: curve.spherical_length <= bound + 1e-3,
    })
}

pub fn verify_theorem2(f: &RationalFunction, c: &CircleOnSphere) -> Result<bool> {
    Ok(theorem2_check(f, c)?.holds)
}
