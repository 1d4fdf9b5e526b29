pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod config;
pub mod experiments;
pub mod graph;
pub mod solver;
pub mod topology;
