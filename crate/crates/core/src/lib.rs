#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimators;
pub mod eval;
pub mod intervals;
pub mod io;
pub mod model;
pub mod numerics;
pub mod risk;

pub use error::{Error, Result};
pub use model::{boeing, suff_stats, Loss, Params, SuffStats, TwoSampleData};
