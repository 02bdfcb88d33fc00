pub mod diagram;
pub mod distance;
pub mod error;
pub mod execution;
pub mod homology;
pub mod io;
pub mod mapper;
pub mod pipeline;
pub mod preprocess;
pub mod types;
pub mod union_find;

pub use error::{Error, Result};
pub use execution::Execution;
