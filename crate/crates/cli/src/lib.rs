//! Library side of the `pzcl` binary, shared with its tests.

pub mod commands;
pub mod config;
pub mod oracle_check;
pub mod reproduce;
