//! Driver for synthesizing scattering data and imaging scatterers with the
//! regularized factorization method.

pub mod commands;
pub mod config;
pub mod io;
