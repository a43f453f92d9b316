pub mod classicality;
pub mod cli;
pub mod error;
pub mod format;
pub mod frequency;
pub mod game;
pub mod hilbert;
pub mod lp;
pub mod montecarlo;
pub mod prob;
pub mod qlra;

pub use error::{Error, Result};
