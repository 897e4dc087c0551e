pub mod adjustment;
pub mod error;
pub mod evaluation;
pub mod intervals;
pub mod report;
pub mod special;

pub use error::{Error, Result};
