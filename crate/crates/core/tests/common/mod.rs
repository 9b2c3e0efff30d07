//! Independent oracles shared by the integration tests. None of these call into
//! the tracer, the length integral or the root finder.
#![allow(dead_code)]

use lemni::spherical::{CircleOnSphere, RationalFunction};
use lemni::{Complex64, MonicPolynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `prod (z - r_k)` straight from the roots.
pub fn product(roots: &[Complex64], z: Complex64) -> Complex64 {
    roots.iter().map(|r| z - r).product()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Roots uniform in the disc of radius `r`.
pub fn random_roots(rng: &mut ChaCha8Rng, d: usize, r: f64) -> Vec<Complex64> {
    (0..d)
        .map(|_| {
            let rho = r * rng.random::<f64>().sqrt();
            Complex64::from_polar(rho, rng.random_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// Random monic polynomial of degree `1..=dmax`, roots in `|z| < r`, with every
/// critical value at least `gap` away from the unit circle.
pub fn random_poly(rng: &mut ChaCha8Rng, dmax: usize, r: f64, gap: f64) -> MonicPolynomial {
    loop {
        let d = rng.random_range(1..=dmax);
        let p = MonicPolynomial::from_roots(&random_roots(rng, d, r)).unwrap();
        let ok = p
            .critical_values()
            .map(|cv| cv.iter().all(|w| (w.norm() - 1.0).abs() >= gap))
            .unwrap_or(false);
        if ok {
            return p;
        }
    }
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// Length of Bernoulli's lemniscate, `2^{5/2} int_0^1 dx / sqrt(1 - x^4)`,
/// with `x = 1 - t^2` removing the endpoint singularity.
pub fn bernoulli_length() -> f64 {
    let g = |t: f64| {
        let x = 1.0 - t * t;
        2.0 / ((2.0 - t * t) * (1.0 + x * x)).sqrt()
    };
    2f64.powf(2.5) * simpson(g, 0.0, 1.0, 20_000)
}

/// `int_0^{2 pi} (2 sin(t/2))^{-(d-1)/d} dt`, the length of `|z^d + 1| = 1`,
/// computed on `[0, pi]` with `t = pi u^m` grading into the singularity.
pub fn power_plus_one_length(d: usize) -> f64 {
    let e = (d as f64 - 1.0) / d as f64;
    let m = 4.0 * d as f64;
    // symmetric about pi: integrate over [0, pi] and double
    let f = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let t = std::f64::consts::PI * u.powf(m);
        let dt = std::f64::consts::PI * m * u.powf(m - 1.0);
        (2.0 * (t / 2.0).sin()).powf(-e) * dt
    };
    2.0 * simpson(f, 0.0, 1.0, 200_000)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

/// Components of `{|p| <= 1 + eta}` on an `n x n` grid of cell centres.
///
/// Each component of the filled lemniscate is bounded by exactly one component
/// of the lemniscate, so this counts the components of `E(p)`; the slack `eta`
/// joins lobes meeting at a single point.
pub fn grid_components(roots: &[Complex64], n: usize, eta: f64) -> usize {
    let centre: Complex64 = roots.iter().sum::<Complex64>() / roots.len() as f64;
    let half = roots.iter().map(|r| (r - centre).norm()).fold(0.0, f64::max) + 1.2;
    let h = 2.0 * half / n as f64;
    let level = 1.0 + eta;
    let inside: Vec<bool> = (0..n * n)
        .map(|k| {
            let (i, j) = (k % n, k / n);
            let z = centre + c(-half + (i as f64 + 0.5) * h, -half + (j as f64 + 0.5) * h);
            product(roots, z).norm() <= level
        })
        .collect();
    let mut uf = UnionFind((0..n * n).collect());
    for j in 0..n {
        for i in 0..n {
            let k = j * n + i;
            if !inside[k] {
                continue;
            }
            if i + 1 < n && inside[k + 1] {
                uf.union(k, k + 1);
            }
            if j + 1 < n && inside[k + n] {
                uf.union(k, k + n);
            }
        }
    }
    let mut roots_seen: Vec<usize> = (0..n * n).filter(|&k| inside[k]).map(|k| uf.find(k)).collect();
    roots_seen.sort_unstable();
    roots_seen.dedup();
    roots_seen.len()
}

/// Distinct solutions of `|p(x0 + t u)| = 1` along a line, from a fine scan of
/// `g(t) = |p|^2 - 1`: sign changes plus tangential zeros (local extrema of `g`
/// with `|g|` below `touch`).
pub fn line_solutions(roots: &[Complex64], x0: Complex64, u: Complex64, t_max: f64, n: usize, touch: f64) -> usize {
    let g = |t: f64| product(roots, x0 + u * t).norm_sqr() - 1.0;
    let h = 2.0 * t_max / n as f64;
    let vals: Vec<f64> = (0..=n).map(|k| g(-t_max + k as f64 * h)).collect();
    let mut count = 0;
    let mut k = 0;
    while k < n {
        let (a, b) = (vals[k], vals[k + 1]);
        if a == 0.0 {
            count += 1;
            k += 1;
            continue;
        }
        if a * b < 0.0 {
            count += 1;
        } else if k > 0 && a.abs() < touch {
            let (prev, next) = (vals[k - 1], b);
            let extremum = (a >= prev && a >= next) || (a <= prev && a <= next);
            if extremum && prev * a > 0.0 && next * a > 0.0 {
                count += 1;
            }
        }
        k += 1;
    }
    count
}

/// `n` points uniform on `{|p| < M}` by rejection from the union of the discs
/// `D(r_k, M^{1/d})`, which contains the sublevel set.
pub fn sublevel_samples(roots: &[Complex64], level: f64, n: usize, seed: u64) -> Vec<Complex64> {
    let d = roots.len();
    let r = level.powf(1.0 / d as f64);
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let k = rng.random_range(0..d);
        let rho = r * rng.random::<f64>().sqrt();
        let z = roots[k] + Complex64::from_polar(rho, rng.random_range(0.0..std::f64::consts::TAU));
        // thin by multiplicity so the union is sampled uniformly
        let cover = roots.iter().filter(|q| (z - *q).norm() < r).count();
        if rng.random::<f64>() * cover as f64 > 1.0 {
            continue;
        }
        if product(roots, z).norm() < level {
            out.push(z);
        }
    }
    out
}

/// Random rational map of degree at most `dmax`, numerator scaled off monic.
pub fn random_rational(r: &mut ChaCha8Rng, dmax: usize) -> RationalFunction {
    loop {
        let dn = r.random_range(1..=dmax);
        let dd = r.random_range(0..=dmax);
        let num = MonicPolynomial::from_roots(&random_roots(r, dn, 1.5)).unwrap();
        let mut num = num.coefficients().to_vec();
        let scale = c(r.random_range(0.3..2.0), r.random_range(-1.0..1.0));
        num.iter_mut().for_each(|a| *a *= scale);
        let den = if dd == 0 {
            vec![c(1.0, 0.0)]
        } else {
            MonicPolynomial::from_roots(&random_roots(r, dd, 1.5)).unwrap().coefficients().to_vec()
        };
        if let Ok(f) = RationalFunction::new(&num, &den) {
            return f;
        }
    }
}

pub fn random_circle(r: &mut ChaCha8Rng) -> CircleOnSphere {
    if r.random_bool(0.5) {
        CircleOnSphere::Circle { center: c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)), radius: r.random_range(0.3..2.0) }
    } else {
        CircleOnSphere::Line { theta: r.random_range(0.0..std::f64::consts::PI), x: r.random_range(-1.0..1.0) }
    }
}
