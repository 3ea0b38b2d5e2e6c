pub mod cli;
pub mod closedform;
pub mod engine;
pub mod error;
pub mod incidence;
pub mod oracle;
pub mod plane;
pub mod symbolic;

pub use error::{Error, Result};
