//! Finite-field toolkit for isomorphism problems on multi-way arrays:
//! reductions between them with forward and backward witness maps,
//! brute-force deciders, the Baer and Lazard correspondences, and a
//! search-to-decision procedure for alternating matrix space isometry.

pub mod algebra;
pub mod error;
pub mod form;
pub mod gf;
pub mod graph;
pub mod io;
pub mod groupcorr;
pub mod matspace;
pub mod oracle;
pub mod reductions;
pub mod s2d;
pub mod selftest;
pub mod tensor;
pub mod witness;

pub use error::{Error, Result};
pub use gf::GF;
