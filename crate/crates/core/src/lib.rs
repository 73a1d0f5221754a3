//! Simulation and finiteness criteria for perturbed random walks
//! `T_n = S_{n-1} + η_n`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod criteria;
pub mod error;
pub mod laws;
pub mod mc;
pub mod prw;
pub mod quad;
pub mod renewal;
pub mod shotnoise;

pub use error::{Error, Result};
