//! Maximal systems of brick islands and cubic islands in integer cuboids.
//!
//! A system of brick islands is a family of closed lattice boxes in which any two
//! members are nested or disjoint. This crate builds the known extremal systems,
//! checks laminarity and maximality, and computes the minimum and maximum sizes of
//! maximal systems exactly, by two independent exhaustive searches.

pub mod cache;
pub mod constructors;
pub mod error;
pub mod formulas;
pub mod geometry;
pub mod search;
pub mod system;
pub mod verify;

pub use error::{IslandError, PartialStats, Result};
pub use geometry::{
    brick_count, canonical_form, compatible, contains, disjoint, enumerate_bricks, Brick, Coord,
    Shape, Symmetry,
};
pub use search::{
    enumerate_maximal_systems, enumerate_maximal_systems_up_to_symmetry,
    enumerate_saturated_fronts, extremal_size, flat_oracle, ExtremalReport, Front, Mode,
    SearchConfig,
};
pub use system::{is_laminar, EdgeId, Gap, GapProfile, IslandSystem, SystemRepr};
