//! Library surface of the scenario runner, exposed so integration tests can
//! drive the pipeline without shelling out.

pub mod catalog;
pub mod config;
pub mod emit;
pub mod runner;
