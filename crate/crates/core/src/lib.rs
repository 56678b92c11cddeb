pub mod arith;
pub mod bounds;
pub mod classcount;
pub mod cli;
pub mod error;
pub mod exact;
pub mod gsum;
pub mod oracle;
pub mod quadfield;

pub use error::{Error, Result};
