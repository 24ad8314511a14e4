//! Geometry of hyperbolic isometries of CAT(0) cube complexes.
//!
//! The library computes, for a hyperbolic element `g` of a right-angled
//! Artin group (or of a small Euclidean fixture complex), the half-spaces
//! crossed by an axis of `g`, a tautly embedded core of that set inside a
//! low-dimensional grid, maximal `g`-nested half-space segments, and the
//! counting quasimorphisms those segments define.  The end product is a
//! machine-checkable certificate for a lower bound on the stable
//! commutator length of `g`.

pub mod axis;
pub mod embed;
pub mod segment;
pub mod quasi;
pub mod cert;
pub mod verify;
pub mod complex;
pub mod error;
pub mod euclid;
pub mod graph;
pub mod median;
pub mod poset;
pub mod raag;
pub mod word;

pub use complex::CubeComplex;
pub use error::Error;
pub use euclid::EuclideanComplex;
pub use graph::DefiningGraph;
pub use median::{Relation, Scope};
pub use raag::RaagComplex;
pub use word::NormalForm;

pub type Result<T> = std::result::Result<T, Error>;
