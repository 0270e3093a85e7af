//! Spectral symbols of cosine, sine and Knapp–Stein transforms on Grassmannians.

pub mod cherednik;
pub mod error;
pub mod grassgeo;
pub mod jacobi;
pub mod param;
pub mod quadrature;
pub mod rootsystem;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
