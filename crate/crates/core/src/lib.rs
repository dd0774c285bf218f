// Negated comparisons in validation deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod model;
pub mod optimizer;
pub mod queueing;
pub mod schemes;
pub mod sim;

pub use error::{Error, Result};
