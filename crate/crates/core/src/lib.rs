//! Exact verification suite for the Steinberg and Weil modules of the
//! symplectic group Sp(2n, q) over small fields.
//!
//! The crate is organised bottom-up: finite fields, the symplectic group and
//! its subgroups, linear characters, generic representations, the Weil
//! module, and the sparse group-algebra layer carrying the Steinberg module.
//! The `cli` module assembles everything into reproducible check reports.

pub mod characters;
pub mod cli;
pub mod error;
pub mod ffield;
pub mod outcome;
pub mod repcore;
pub mod spgroup;
pub mod steinberg;
pub mod weilmod;

pub use error::{Error, Result};
