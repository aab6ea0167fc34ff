//! Distance graphs over finite subsets of lattices and rational spaces,
//! exact chromatic numbers, constructive colorings of the line, and
//! k-distance-set search.
//!
//! All coordinates and squared distances are exact rationals; a graph is
//! induced on a point set by declaring a set of squared distances (or
//! distance classes) forbidden. The solver computes chromatic numbers
//! exactly with verifiable certificates.

pub mod classify;
pub mod constructions;
pub mod error;
pub mod extremal;
pub mod fixtures;
pub mod graph;
pub mod points;
pub mod rational;
pub mod solver;
pub mod verify;

pub use classify::{classify, DistanceClassMatrix};
pub use error::{Error, Result};
pub use graph::{build_graph, DistanceGraph, ForbiddenSpec};
pub use points::{generate_grid, squared_distance, Point, PointSet};
pub use rational::Rational;
pub use solver::{
    bipartition, chromatic_bruteforce, chromatic_exact, degeneracy_order, greedy_coloring,
    BipartitionResult, Certificate, ChromaticResult, Coloring,
};
