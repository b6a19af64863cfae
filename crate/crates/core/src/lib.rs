//! Construction and desk-scale verification of locally finite trees with a
//! prescribed number of siblings.
//!
//! Everything is materialized as a finite [`tree::DecoratedTree`] truncation of
//! an infinite object: the labelled rooted tree `R`, typed double rays, the
//! spine `S^p(k)` and the typed trees `T_s(k)`. Lemma checks quantify only over
//! interior vertices of those truncations.

pub mod canon;
pub mod construct;
pub mod embed;
pub mod error;
pub mod gadget;
pub mod harness;
pub mod poset;
pub mod ray;
pub mod report;
pub mod rtree;
pub mod similarity;
pub mod spine;
pub mod tree;

pub use error::{Error, Result};
pub use tree::{Address, DecoratedTree, Kind, Move, VertexRecord};
