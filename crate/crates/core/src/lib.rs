pub mod descent;
pub mod error;
pub mod geometry;
pub mod maxplus;
pub mod parser;
pub mod partition;
pub mod pipeline;
pub mod signed;
pub mod svg;

pub use error::{Error, Result};
