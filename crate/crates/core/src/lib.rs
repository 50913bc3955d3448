//! Semigroup-valued metric spaces: finite partially ordered commutative
//! semigroups, their block lattices, edge-labelled graphs with
//! shortest-path completion, forbidden-cycle family checks, the
//! ball-vertex expansion with convex orderings, the magic semigroup of
//! metrically homogeneous graphs, and a census of triangle-constrained
//! amalgamation classes.
//!
//! Inner loops (completion sweeps, censuses, parameter scans) run on
//! rayon when the default `parallel` feature is enabled and fall back to
//! sequential iteration without it; results are identical either way.

pub mod ambient;
pub mod blocks;
pub mod bruteforce;
pub mod census;
pub mod convex;
pub mod cycle;
pub mod error;
pub mod families;
pub mod fixtures;
pub mod gadget;
pub mod gen;
pub mod graph;
pub mod json;
pub mod magic;
pub mod par;
pub mod semigroup;
pub mod star;

pub use error::{Error, Result};
