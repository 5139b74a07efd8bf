//! Numerical verification of fractional Hermite–Hadamard type identities and
//! bounds for λ-preinvex functions.

pub mod bounds;
pub mod fracquad;
pub mod harness;
pub mod identities;
pub mod preinvex;
pub mod specfun;
