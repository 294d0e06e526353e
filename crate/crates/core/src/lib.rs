pub mod cli;
pub mod error;
pub mod exactnum;
pub mod localchar;
pub mod metaplectic;
pub mod repn;
pub mod zeta;

pub use error::{Error, Result};
