pub mod charsum;
pub mod cli;
pub mod config;
pub mod error;
pub mod field;
pub mod geometry;
pub mod graph;
pub mod oracle;
pub mod report;
pub mod sampling;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use field::{make_field, FieldCtx, FieldElement};
