//! Polynomial homotopy continuation.
//!
//! Computes all isolated complex solutions of square polynomial systems by
//! tracking paths from a total-degree start system, and describes
//! positive-dimensional solution sets by witness sets, monodromy
//! factorization and monomial maps. Arithmetic runs in double, double-double
//! or quad-double precision.

pub mod apollonius;
pub mod error;
pub mod homotopy;
pub mod maps;
pub mod numerics;
pub mod polynomial;
pub mod rng;
pub mod solver;
pub mod tracker;
pub mod witness;

pub use error::{Error, Result};
pub use numerics::{Complex, DoubleDouble, Precision, QuadDouble, StoredComplex};
pub use polynomial::{PolySystem, Polynomial, Term};
