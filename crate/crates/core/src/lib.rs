//! Simulation study of mass-dependent dephasing as a collapse signature:
//! statevector and density-operator engines, dephasing noise laws, three
//! benchmark experiments (GHZ parity, branch-mass interference, Grover
//! search), closed-form oracles, and a deterministic sweep runner.

pub mod chart;
pub mod circuit;
pub mod config;
pub mod csv_io;
pub mod density;
pub mod error;
pub mod gates;
pub mod noise;
pub mod oracle;
pub mod protocols;
pub mod statevector;
pub mod sweep;

pub use error::{Error, Result};
