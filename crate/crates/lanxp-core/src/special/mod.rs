//! Special functions backing the counting, spectrum and wavefunction layers.

pub mod kummer;
pub mod log_gamma;
pub mod zeta;

pub use kummer::{kummer_m, kummer_scaled, Scaled};
pub use log_gamma::{log_gamma, rs_theta, rs_theta_odd};
pub use zeta::{hardy_z, zeta_critical_line};
