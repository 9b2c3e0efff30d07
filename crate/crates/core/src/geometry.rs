//! Convex hulls and the hull-perimeter bound for connected lemniscates.
//!
//! The filled lemniscate of a monic polynomial has logarithmic capacity 1, so
//! when `E(p)` is connected its hull perimeter is at most
//! [`measure::alpha0_bound`](crate::measure::alpha0_bound).

use num_complex::Complex64;
use serde::Serialize;

use crate::levelset::LevelCurve;
use crate::measure::alpha0_bound;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hull {
    /// Extreme points, counterclockwise.
    pub vertices: Vec<Complex64>,
    pub perimeter: f64,
    pub diameter: f64,
}

impl Hull {
    /// Whether `z` lies inside or on the hull, up to `1e-10 * scale`.
    pub fn contains(&self, z: Complex64) -> bool {
        let n = self.vertices.len();
        let scale = 1.0 + self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let tol = 1e-10 * scale;
        match n {
            0 => false,
            1 => (z - self.vertices[0]).norm() <= tol,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                let len = (b - a).norm();
                let t = ((z - a).re * (b - a).re + (z - a).im * (b - a).im) / (len * len);
                cross(a, b, z).abs() / len <= tol && (-tol..=1.0 + tol).contains(&t)
            }
            _ => (0..n).all(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                cross(a, b, z) / (b - a).norm() >= -tol
            }),
        }
    }
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Andrew's monotone chain. Collinear input gives a two-vertex hull whose
/// perimeter is twice the segment length.
pub fn convex_hull(points: &[Complex64]) -> Hull {
    let mut pts: Vec<Complex64> = points.iter().copied().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() <= 1 {
        return Hull {
            vertices: pts,
            perimeter: 0.0,
            diameter: 0.0,
        };
    }
    let scale = pts.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let eps = 1e-12 * scale * scale;

    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &z in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], z) <= eps {
                hull.pop();
            }
            hull.push(z);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        hull = vec![pts[0], *pts.last().unwrap()];
    }

    let n = hull.len();
    let perimeter = (0..n).map(|i| (hull[(i + 1) % n] - hull[i]).norm()).sum();
    let mut diameter: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            diameter = diameter.max((hull[i] - hull[j]).norm());
        }
    }
    Hull {
        vertices: hull,
        perimeter,
        diameter,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullCheck {
    pub perimeter: f64,
    pub bound: f64,
    /// The bound only applies to connected lemniscates.
    pub applicable: bool,
    pub holds: bool,
}

/// Hull perimeter of all traced vertices against `alpha_0 + 1e-3`.
pub fn hull_check(curve: &LevelCurve) -> HullCheck {
    let pts: Vec<Complex64> = curve.points().collect();
    let perimeter = convex_hull(&pts).perimeter;
    let bound = alpha0_bound();
    let applicable = curve.component_count() == 1;
    HullCheck {
        perimeter,
        bound,
        applicable,
        holds: !applicable || perimeter <= bound + 1e-3,
    }
}

pub fn verify_lemma3(curve: &LevelCurve) -> bool {
    hull_check(curve).holds
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let h = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.3, 0.6)]);
        assert_eq!(h.vertices.len(), 4);
        assert!((h.perimeter - 4.0).abs() < 1e-15);
        assert!((h.diameter - 2f64.sqrt()).abs() < 1e-15);
        assert!(h.contains(c(0.5, 0.0)));
        assert!(!h.contains(c(1.1, 0.5)));
    }

    #[test]
    fn collinear_points_give_a_segment() {
        let h = convex_hull(&[c(0.0, 0.0), c(1.0, 1.0), c(2.0, 2.0), c(0.5, 0.5)]);
        assert_eq!(h.vertices.len(), 2);
        assert!((h.perimeter - 2.0 * 8f64.sqrt()).abs() < 1e-14);
        assert!(h.contains(c(1.5, 1.5)));
    }

    #[test]
    fn single_point() {
        let h = convex_hull(&[c(2.0, 3.0), c(2.0, 3.0)]);
        assert_eq!(h.vertices.len(), 1);
        assert_eq!(h.perimeter, 0.0);
    }

    #[test]
    fn counterclockwise_order() {
        let h = convex_hull(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]);
        let n = h.vertices.len();
        let area: f64 = (0..n).map(|i| cross(c(0.0, 0.0), h.vertices[i], h.vertices[(i + 1) % n])).sum();
        assert!(area > 0.0);
    }
}
