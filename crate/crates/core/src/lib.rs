//! Combinatorics of universal aligning constructions over monomial-labelled
//! dual graphs: alignment tests, thickness functions, chart atlases with
//! overlaps, blowup rewriting with a termination measure, and stratified
//! controlled families.

#![forbid(unsafe_code)]

pub mod alignment;
pub mod atlas;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod labels;
pub mod resolution;
pub mod strata;

pub use graph::{EdgeId, LabelledGraph, VertexId};
pub use labels::{GeneratorSet, LaurentMonomial, Monomial, Valuation};
