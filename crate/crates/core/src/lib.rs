pub mod bits;
pub mod cli;
pub mod error;
pub mod green;
pub mod grp;
pub mod gsets;
pub mod labels;
pub mod lattice;
pub mod linalg;
pub(crate) mod memo;
pub mod ops;
pub mod qburnside;
pub mod rational;
pub mod shifted;
pub mod slice;
pub mod verify;

pub use error::{Error, Result};
