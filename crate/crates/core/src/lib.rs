//! Exact computations with Cameron-Liebler sets in the bilinear forms graph
//! `Bil_q(n, l)`, modelled inside the attenuated space `A_q(n+l, E)`.
//!
//! Vertices are `l x n` matrices `A` (the column space of `[I; A]`), points are
//! normalized pairs `(u, v)` with `u != 0`, and a point lies on `A` iff `A u = v`.

pub mod attenuated;
pub mod bits;
pub mod census;
pub mod cli;
mod clique;
pub mod clsets;
pub mod counting;
pub mod error;
pub mod fqlinalg;
pub mod gf;
pub mod search;
mod serde_util;
pub mod spectral;
mod vertexset;

pub use attenuated::{DistanceTable, Point, SpaceParams, TypedHyperplane, Vertex};
pub use error::{Error, Result};
pub use gf::{ExtField, FqField};
pub use vertexset::VertexSet;
