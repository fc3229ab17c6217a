//! Algebraic numerical ranges of matrices and their spectral constants.
//!
//! The crate computes the algebraic numerical range `V(T)` of a square
//! complex matrix viewed as an element of the algebra of operators on
//! `(C^n, l^p)` for `p` in `{1, 2, inf}`, and searches for polynomials `p`
//! that make the ratio `||p(T)|| / sup_{V(T)} |p|` large.
//!
//! ```
//! use specrange::linalg::{Matrix, NormKind};
//! use specrange::numrange::gershgorin_hull_l1;
//!
//! let t = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.0]]);
//! let hull = gershgorin_hull_l1(&t, 360);
//! // the hull of the unit disk and the point 2 reaches 2 on the right
//! assert!((hull.support_at(0) - 2.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod combinat;
pub mod error;
pub mod linalg;
pub mod numrange;
pub mod polytools;
pub mod psi;
pub mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64;
