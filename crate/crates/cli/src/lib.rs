//! Library side of the `nonord` binary: descriptor parsing, the coefficient
//! cache, and the orchestrated verification suite.

pub mod cache;
pub mod forms;
pub mod suite;
