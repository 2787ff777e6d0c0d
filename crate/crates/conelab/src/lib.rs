//! Std companion of `conelab-core`: file formats, the command-line
//! interface, and the numerical half-plane counterexample reproduction.

pub mod cli;
pub mod fejer;
pub mod io;
