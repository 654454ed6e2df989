//! Sustainable-competition analysis of public market-development programs.
//!
//! A program spends an annual budget on direct purchases, direct transfers
//! and shared infrastructure. Given industry costs (itemized capital and
//! operations, annuitized at the investors' required return) and market
//! demand, the crate computes firm and industry profit, the largest number
//! of competitors each architecture sustains, and the competition diagram
//! over (direct purchases, industry cost).

pub mod config;
pub mod cost;
pub mod econ;
pub mod error;
pub mod finance;
pub mod model;
pub mod region;
pub mod report;
pub mod scenario;
pub mod svg;

pub use config::{parse_config, ProgramConfig};
pub use error::{Error, ErrorKind, Result};
pub use model::{Evaluation, Model};
