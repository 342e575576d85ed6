//! Exact-arithmetic audit toolkit for qudit gate groups, their invariant
//! rings, and qudit state geometry.

pub mod catalog;
pub mod claims;
pub mod cyclo;
pub mod group;
pub mod matrix;
pub mod molien;
pub mod poly;
pub mod qgeom;
pub mod report;
pub mod error;

pub use error::{Error, Result};
