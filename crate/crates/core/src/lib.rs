//! Dihedral tilings of the sphere by one square and one rhombus with equal
//! edge lengths: angle systems, vertex combinatorics, catalog constructors,
//! an exhaustive classifier and spherical embeddings.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod catalog;
pub mod classifier;
pub mod embedding;
pub mod error;
pub mod export;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod par;
pub mod polyhedra;
pub mod roots;
pub mod tolerance;
pub mod vertex;

pub use error::{Error, Result};
