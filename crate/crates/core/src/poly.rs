//! Monic complex polynomials stored by their root vector, with cached coefficients.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots;

/// Practical degree cap; beyond it the coefficient dynamic range outgrows `f64`.
pub const MAX_DEGREE: usize = 64;

/// A monic polynomial `p(z) = prod (z - z_j)`.
///
/// Roots are kept in the order they were supplied; `coeffs` runs from the
/// constant term up to the leading `1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonicPolynomial {
    roots: Vec<Complex64>,
    coeffs: Vec<Complex64>,
}

fn check_finite(values: &[Complex64], what: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Expand `prod (z - r)` into coefficients, constant term first.
pub(crate) fn expand_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

impl MonicPolynomial {
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        Self::from_roots_capped(roots, MAX_DEGREE)
    }

    /// Same as [`from_roots`](Self::from_roots) with an explicit degree cap.
    pub fn from_roots_capped(roots: &[Complex64], max_degree: usize) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::DegreeZero);
        }
        if roots.len() > max_degree {
            return Err(Error::DegreeTooLarge {
                degree: roots.len(),
                max: max_degree,
            });
        }
        check_finite(roots, "roots")?;
        Ok(Self {
            roots: roots.to_vec(),
            coeffs: expand_roots(roots),
        })
    }

    /// Build from coefficients `[c_0, ..., c_{d-1}, 1]` and recover the roots.
    pub fn from_coefficients(coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DegreeZero);
        }
        let d = coeffs.len() - 1;
        if d > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree: d,
                max: MAX_DEGREE,
            });
        }
        check_finite(coeffs, "coefficients")?;
        let lead = coeffs[d];
        if (lead - 1.0).norm() > 1e-12 {
            return Err(Error::NonMonic { lead });
        }
        let mut coeffs = coeffs.to_vec();
        coeffs[d] = Complex64::new(1.0, 0.0);
        let bound = 1e-10 * (1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max));
        let solve = roots::aberth(&coeffs, None, |_, r| r <= bound).map_err(|best| Error::NoConvergence {
            stage: "from_coefficients",
            w: Complex64::new(0.0, 0.0),
            residual: best.residual,
        })?;
        Ok(Self {
            roots: solve.roots,
            coeffs,
        })
    }

    /// `z^d + c`.
    pub fn power_plus(d: usize, c: Complex64) -> Result<Self> {
        if d == 0 {
            return Err(Error::DegreeZero);
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
        coeffs[0] = c;
        coeffs[d] = Complex64::new(1.0, 0.0);
        Self::from_coefficients(&coeffs)
    }

    /// `z^d`.
    pub fn monomial(d: usize) -> Result<Self> {
        Self::from_roots(&vec![Complex64::new(0.0, 0.0); d])
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation on the cached coefficients.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        roots::horner(&self.coeffs, z)
    }

    /// Evaluation as the product over roots; independent of the coefficients.
    pub fn evaluate_product(&self, z: Complex64) -> Complex64 {
        self.roots.iter().fold(Complex64::new(1.0, 0.0), |acc, r| acc * (z - r))
    }

    pub fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let (v, dv, _) = roots::eval_with_derivative(&self.coeffs, z);
        (v, dv)
    }

    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        self.value_and_derivative(z).1
    }

    pub fn derivative_coefficients(&self) -> Vec<Complex64> {
        roots::derivative(&self.coeffs)
    }

    pub fn max_root_modulus(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Diameter of the root set.
    pub fn root_diameter(&self) -> f64 {
        let mut diam: f64 = 0.0;
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                diam = diam.max((a - b).norm());
            }
        }
        diam
    }

    /// Zeros of `p'`, `d - 1` of them counted with multiplicity.
    pub fn critical_points(&self) -> Result<Vec<Complex64>> {
        let d = self.degree();
        if d < 2 {
            return Ok(vec![]);
        }
        let monic: Vec<Complex64> = self.derivative_coefficients().iter().map(|c| c / d as f64).collect();
        let bound = 1e-10 * (1.0 + monic.iter().map(|c| c.norm()).fold(0.0, f64::max));
        roots::aberth(&monic, None, |_, r| r <= bound)
            .map(|s| s.roots)
            .map_err(|best| Error::NoConvergence {
                stage: "critical_points",
                w: Complex64::new(0.0, 0.0),
                residual: best.residual,
            })
    }

    pub fn critical_values(&self) -> Result<Vec<Complex64>> {
        Ok(self.critical_points()?.into_iter().map(|z| self.evaluate(z)).collect())
    }

    /// All `d` solutions of `p(z) = w`.
    ///
    /// With a valid `hint` (one point per solution) the iteration starts from the
    /// hint and the output is ordered by nearest-hint matching, which is the
    /// contract continuation relies on.
    pub fn solve_preimages(&self, w: Complex64, hint: Option<&[Complex64]>) -> Result<Vec<Complex64>> {
        let mut shifted = self.coeffs.clone();
        shifted[0] -= w;
        let d = self.degree();
        let accept = |zs: &[Complex64], residual: f64| {
            let zmax = zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            residual <= 1e-10 * (1.0 + w.norm() + zmax.powi(d as i32))
        };
        let hint = hint.filter(|h| h.len() == d);
        let solve = roots::aberth(&shifted, hint, accept).map_err(|best| Error::NoConvergence {
            stage: "solve_preimages",
            w,
            residual: best.residual,
        })?;
        Ok(match hint {
            Some(h) => roots::match_to_hint(&solve.roots, h),
            None => solve.roots,
        })
    }

    /// `p(z - c)`: every root moved by `c`. Lengths of level sets are unchanged.
    pub fn translated(&self, c: Complex64) -> Self {
        let roots: Vec<Complex64> = self.roots.iter().map(|z| z + c).collect();
        Self {
            coeffs: expand_roots(&roots),
            roots,
        }
    }

    /// Roots rotated by `e^{i alpha}`.
    pub fn rotated(&self, alpha: f64) -> Self {
        let u = Complex64::from_polar(1.0, alpha);
        let roots: Vec<Complex64> = self.roots.iter().map(|z| z * u).collect();
        Self {
            coeffs: expand_roots(&roots),
            roots,
        }
    }
}

/// Entries of `values` closer than `tol` are reported together; each cluster lists indices.
pub fn clusters(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(vec![]);
        }
        groups[slot[r]].push(i);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_roots_is_degree_zero() {
        assert!(matches!(MonicPolynomial::from_roots(&[]), Err(Error::DegreeZero)));
    }

    #[test]
    fn degree_cap_enforced() {
        let roots = vec![c(0.0, 0.0); MAX_DEGREE + 1];
        assert!(matches!(
            MonicPolynomial::from_roots(&roots),
            Err(Error::DegreeTooLarge { .. })
        ));
        assert!(MonicPolynomial::from_roots_capped(&roots, 80).is_ok());
    }

    #[test]
    fn non_monic_rejected() {
        let err = MonicPolynomial::from_coefficients(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonMonic { .. }));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(MonicPolynomial::from_roots(&[c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn i_and_minus_i_give_z2_plus_1() {
        let p = MonicPolynomial::from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
        let k = p.coefficients();
        assert!((k[0] - 1.0).norm() < 1e-15);
        assert!(k[1].norm() < 1e-15);
        assert_eq!(k[2], c(1.0, 0.0));
        assert!(p.evaluate(c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn cube_evaluates_to_eight() {
        let p = MonicPolynomial::monomial(3).unwrap();
        assert_eq!(p.evaluate(c(2.0, 0.0)), c(8.0, 0.0));
        assert_eq!(p.coefficients()[..3], [c(0.0, 0.0); 3]);
    }

    #[test]
    fn critical_values_of_z3_minus_3z() {
        let p = MonicPolynomial::from_coefficients(&[c(0.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let mut cp = p.critical_points().unwrap();
        cp.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((cp[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((cp[1] - c(1.0, 0.0)).norm() < 1e-12);
        let mut cv = p.critical_values().unwrap();
        cv.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((cv[0] - c(-2.0, 0.0)).norm() < 1e-12);
        assert!((cv[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn linear_has_no_critical_points() {
        let p = MonicPolynomial::from_roots(&[c(1.0, 2.0)]).unwrap();
        assert!(p.critical_points().unwrap().is_empty());
    }

    #[test]
    fn double_preimage_at_critical_value() {
        let p = MonicPolynomial::power_plus(2, c(1.0, 0.0)).unwrap();
        let z = p.solve_preimages(c(1.0, 0.0), None).unwrap();
        assert_eq!(z.len(), 2);
        for x in z {
            assert!(x.norm() < 1e-7);
        }
    }

    #[test]
    fn hinted_solve_follows_hint_order() {
        let p = MonicPolynomial::monomial(3).unwrap();
        let w = c(8.0, 0.0);
        let exact: Vec<Complex64> = (0..3)
            .map(|k| Complex64::from_polar(2.0, std::f64::consts::TAU * k as f64 / 3.0))
            .collect();
        let hint = vec![exact[2] * 1.01, exact[0] * 0.99, exact[1] * 1.02];
        let z = p.solve_preimages(w, Some(&hint)).unwrap();
        assert!((z[0] - exact[2]).norm() < 1e-12);
        assert!((z[1] - exact[0]).norm() < 1e-12);
        assert!((z[2] - exact[1]).norm() < 1e-12);
    }

    #[test]
    fn clusters_group_close_values() {
        let v = [c(0.0, 0.0), c(1e-9, 0.0), c(1.0, 0.0)];
        let g = clusters(&v, 1e-7);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0], vec![0, 1]);
    }
}
