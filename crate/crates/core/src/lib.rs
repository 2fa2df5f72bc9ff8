//! Lattice and continuum two-point functions for free scalar and Dirac
//! fields, closed-form accelerations of the dual-lattice sums, determinant
//! formulas for the correlation functions of the interacting model, and
//! contour evaluation of the resulting analytic functionals.
//!
//! Everything is computed in `Complex<f64>`. All large reductions go through
//! the deterministic pairwise tree in [`reduce`], so results are bit-identical
//! regardless of thread count.

pub mod contour;
pub mod dd;
pub mod dense;
pub mod dirac;
pub mod error;
pub mod interacting;
pub mod lattice;
pub mod quad;
pub mod reduce;
pub mod scalar;
pub mod smallmat;
pub mod suite;

pub use error::{Error, Result};
pub use lattice::{LatticeParams, LatticeSite, MomentumPoint};
pub use smallmat::{Mat2, SpinorMatrix};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

/// The imaginary unit.
pub const IM: C64 = num_complex::Complex::new(0.0, 1.0);
