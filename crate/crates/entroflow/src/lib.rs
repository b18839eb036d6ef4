//! Std companion to `entroflow-core`: seeded random density families, the
//! batch verification suite, file formats, and the command-line interface.

pub mod cli;
pub mod config;
pub mod io;
pub mod mixtures;
pub mod suite;
