//! Command-line front end for the tournament engine.
//!
//! [`config`] turns flat `key=value` documents into validated run
//! descriptions and back; [`output`] renders match results as
//! byte-stable CSV; [`commands`] wires both to the subcommands the
//! binary exposes.

pub mod commands;
pub mod config;
pub mod output;
