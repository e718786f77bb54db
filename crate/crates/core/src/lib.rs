pub mod closedform;
pub mod cli;
pub mod cyclotomy;
pub mod error;
pub mod ffield;
pub mod oracle;
pub mod periods;
pub mod series;
pub mod waring;

pub use cyclotomy::CyclotomyTable;
pub use error::{Error, Result};
pub use ffield::FieldContext;
pub use waring::{solve, NSequence, WaringSolution};
