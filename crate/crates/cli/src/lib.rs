//! File formats, parallel battle runs and the command-line front end for
//! `gamecircle-core`.

pub mod app;
pub mod report;
pub mod runner;
pub mod settings;
pub mod tables;
