pub mod algebra;
pub mod bench;
pub mod circuit;
pub mod error;
pub mod frame;
pub mod oracle;
pub mod rng;
pub mod run;
pub mod tableau;
pub mod verify;

pub use error::{Error, Result};
