//! Polynomial lemniscates `E(p) = {z : |p(z)| = 1}` for monic `p`.
//!
//! The crate traces `E(p)` by continuation of the preimages of the unit circle,
//! measures its length three independent ways (the inverse-derivative integral
//! over the circle, polyline summation, and the Crofton line-count integral),
//! checks the classical quantitative bounds on lemniscates, searches for
//! length-maximising polynomials of small degree, and handles the spherical
//! analogue for preimages of circles under rational maps.
//!
//! Module map:
//!
//! - [`poly`]: monic polynomials, critical points, simultaneous preimage solver
//! - [`levelset`]: tracing, monodromy, connected components
//! - [`measure`]: length estimators, line counts, projections, Cartan covers
//! - [`geometry`]: convex hulls and the hull-perimeter bound
//! - [`extremal`]: derivative-free search for long lemniscates
//! - [`spherical`]: rational maps, spherical length, the Poincaré formula
//! - [`cli`]: the `lemni` command-line front end

pub mod cli;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod levelset;
pub mod measure;
pub mod poly;
pub mod quadrature;
pub mod spherical;

pub(crate) mod continuation;
pub(crate) mod roots;

pub use error::{Error, Result};
pub use levelset::{LevelCurve, TraceOptions};
pub use num_complex::Complex64;
pub use poly::MonicPolynomial;
