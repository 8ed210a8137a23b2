//! Exact counting of matchings and independent sets in small regular
//! graphs, closed-form extremal bounds for both, and an exhaustive
//! verification harness that compares every graph against the disjoint
//! union of complete bipartite graphs `K_{d,d}`.

pub mod bounds;
pub mod canon;
pub mod count;
pub mod error;
pub mod generator;
pub mod graph;
pub mod hp;
pub mod kdd;
pub mod report;
pub mod roots;
pub mod verify;

pub use count::{CountKind, CountPolynomial, Rational};
pub use error::{Error, Result};
pub use graph::{Bipartition, Graph};
