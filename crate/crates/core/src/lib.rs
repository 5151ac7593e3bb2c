pub mod combin;
pub mod error;
pub mod exec;
pub mod fields;
pub mod seed;

pub use error::{Error, Result};
pub use exec::Exec;
pub mod cliques;
pub mod hypergraph;
pub mod expansion;
pub mod polynomial;
pub mod reduction;
