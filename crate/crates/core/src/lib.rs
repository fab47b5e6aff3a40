//! Arithmetic dynamics of number-theoretic special functions: exact
//! evaluation over factored naturals, preimages, orbit and anti-orbit
//! families, set-theoretical entropy estimates and the functional Alexandroff
//! topologies.

pub mod arithfun;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod factorint;
pub mod preimage;
pub mod report;
pub mod topology;

pub use error::{Error, Result};
