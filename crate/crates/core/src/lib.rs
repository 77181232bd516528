//! Padé approximants for the Lambert-type series
//! `h±(q1, q2) = Σ_{k≥1} q1^k / (1 ± q2^k)` built from little q-Jacobi
//! polynomials, with exact integrality checks of the cleared approximants,
//! certified residuals, cyclotomic bookkeeping for the denominators and the
//! resulting irrationality-measure bounds.

pub mod arith;
pub mod ball;
pub mod cyclotomic;
pub mod denomfactory;
pub mod measures;
pub mod qjacobi;
pub mod qseries;

pub use ball::{BallReal, Dyadic};
pub use qseries::{ParamError, QParams, Sign, SpecialCase};
