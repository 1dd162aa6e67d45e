//! Command-line front end for the `quatkg` scattering library.
//!
//! The binary is a thin clap layer over [`commands`] and [`verify`].

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;
