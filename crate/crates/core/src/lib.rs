pub mod abelian;
pub mod autgroup;
pub mod cayley;
pub mod classify;
pub mod cli;
pub mod error;
pub mod graph;
pub mod intlin;
pub mod linaut;
pub mod verify;

pub use error::{Error, Result};
pub use intlin::IntMatrix;
