//! Exact building blocks for the lattice unit-distance construction: prime
//! tables, Gaussian integers, the grid configuration, its unit-distance graph,
//! irredundant path counts and the closed-form bounds they feed.

pub mod bounds;
pub mod config;
pub mod gaussian;
pub mod numtheory;
pub mod paths;
pub mod udgraph;
