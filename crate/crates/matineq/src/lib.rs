//! Numerical verification engine for matrix convexity inequalities along the
//! segment `(1-t)A + tB`: weighted Hermite–Hadamard / Fejér bounds,
//! Levin–Stečkin-type weight comparisons and their reverses, in three matrix
//! orders (Loewner, eigenvalue-wise, weak majorization).

pub mod checks;
pub mod error;
pub mod funcspace;
pub mod generators;
pub mod linalg;
pub mod orders;
pub mod quadrature;
pub mod report;

pub use error::{Error, Result};
