#![no_std]
extern crate alloc;

pub mod bch;
pub mod combinat;
pub mod error;
pub mod fixtures;
pub mod formal_loop;
pub mod free;
pub mod lie;
pub mod linalg;
pub mod loops;
pub mod mlt;
pub mod pbw;
pub mod poly;
pub mod sabinin;
pub mod scalar;
pub mod series;
pub mod structure;
pub mod table;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use formal_loop::PolyLoop;
pub use free::{FreeElement, Tensor};
pub use sabinin::BracketExpr;
pub use scalar::{Field, Scalar};
pub use structure::StructureConstants;
pub use table::SabininTable;
pub use word::Word;
