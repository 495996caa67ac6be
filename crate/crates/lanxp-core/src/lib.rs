//! Numerical core: Riemann counting functions, the box-regularized lowest
//! Landau level spectrum, its exact eigenfunctions, semiclassical state
//! counts, and the underlying classical dynamics.

pub mod accuracy;
pub mod classical;
pub mod counting;
pub mod dd;
pub mod defaults;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod quad;
pub mod rk45;
pub mod special;
pub mod spectrum;
pub mod wavefunctions;

pub use accuracy::AccuracySpec;
pub use error::{Error, Result};
pub use geometry::ModelGeometry;
pub use spectrum::Parity;
