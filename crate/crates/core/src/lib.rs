//! Exact polyvector-field calculus on C^d, the minimal BCOV complexes and
//! their homotopy-transferred L∞ models, and the Lie superalgebra SHO(d|d)
//! with its central extensions and sl₂ symmetry.

pub mod error;
pub mod superpoly;
pub mod pvcalc;
pub mod contraction;
pub mod complexes;
pub mod linf;
pub mod linalg;
pub mod sho;
pub mod sl2;
pub mod campaign;

pub use error::{CoreError, Result};
pub use superpoly::{Grading, Monomial, Scalar, SuperPoly};
