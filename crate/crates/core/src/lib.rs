//! Finite closure systems presented by implications: convex-geometry axiom
//! checking, canonical / K / D / FOE bases, and optimum-basis construction
//! for the tractable subclasses (Carousel geometries, geometries without
//! D-cycles, order-convex geometries), backed by a brute-force optimum
//! oracle on small ground sets.

pub mod bases;
pub mod canonical;
pub mod error;
pub mod generators;
pub mod implication;
pub mod optimize;
pub mod parse;
pub mod poset;
pub mod set;
pub mod system;
pub mod table;

pub use error::{Error, Result};
pub use implication::{BasisReport, Implication, Provenance};
pub use set::ElementSet;
pub use system::{bases_equivalent, AxiomReport, BinaryOrder, ClosureSystem, DEFAULT_CAP};
pub use table::ElementTable;
