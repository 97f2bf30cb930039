//! Orthonormal multiwavelet bases on dyadic grids for measures made of
//! atoms or piecewise-uniform boxes.
//!
//! Polynomials and Gram matrices are exact over the rationals. The
//! degree of the polynomial family may change from cube to cube; its
//! dimension on a cube is read off the staircase of the vanishing ideal
//! of the measure's support.

pub mod basis;
pub mod cli;
pub mod config;
pub mod dyadic;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod measure;
pub mod piecewise;
pub mod polynomial;
pub mod rational;
pub mod spaces;
pub mod vanishing;
