pub mod element;
pub mod engine;
pub mod error;
pub mod instances;
pub mod matrix;
pub mod ring;
pub mod session;
pub mod tame;
pub mod verify;

pub use error::{Error, Result};
