pub mod complexes;
pub mod doc;
pub mod error;
pub mod exactla;
pub mod gralg;
pub mod koszul;
mod linop;
pub mod orbit;
pub mod periodic;
pub mod random;
pub mod suites;

pub use error::{Error, Result};
