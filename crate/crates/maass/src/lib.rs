//! Maass cusp form spectra on the modular surface.

pub mod besselk;
pub mod geometry;
pub mod eigensearch;
pub mod hejhal;
pub mod list;
pub mod turing;
pub mod quad;
