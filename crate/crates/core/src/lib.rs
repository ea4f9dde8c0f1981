//! Exact Ritt-swap calculus for polynomial decompositions and invariant curves of
//! coordinatewise polynomial dynamical systems.

pub mod algebra;
pub mod cli;
pub mod decomp;
pub mod frob;
pub mod orbits;
pub mod product_invariants;
pub mod ritty;
pub mod skew;
pub mod swaps;
pub mod words;
