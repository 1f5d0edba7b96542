//! The heat-kernel Yang–Mills measure on graphs in compact surfaces.
//!
//! Wilson loops are computed exactly for U(1) by lattice summation and by
//! Markov chain Monte Carlo for U(N). The Makeenko–Migdal equation and the
//! identities behind it are available as numerical checks in [`mmcheck`].

pub mod fixtures;
pub mod heatkernel;
pub mod mmcheck;
pub mod montecarlo;
pub mod surfgraph;
pub mod unitary;
pub mod ymmeasure;
