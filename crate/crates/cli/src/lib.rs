//! Command implementations behind the `superloc` binary. Each command returns
//! a [`report::Report`] whose `exit_code` the binary passes to the shell.

pub mod commands;
pub mod report;
