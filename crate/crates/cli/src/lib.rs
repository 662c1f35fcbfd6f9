//! Command-line pipelines over the generalized-graphon library: sampling,
//! spectral trajectories, filter fits and cut distances. Outputs are CSV and
//! JSON files indexed by a hashed `manifest.json`.

pub mod bundle;
pub mod commands;
pub mod config;
pub mod error;
pub mod input;
