//! Multihop connectivity of random networks whose nodes carry randomly
//! oriented directional antennas and communicate over Rayleigh fading links.
//!
//! * [`antenna`] and [`channel`] define the gain pattern and pairwise link
//!   probability.
//! * [`analytics`] evaluates infinite-plane mean degrees: the closed-form
//!   1-hop degree, the nested-quadrature 2-hop degree and the hard-disk
//!   reference results.
//! * [`simulator`] samples finite networks and measures k-hop degrees and
//!   hop distances by breadth-first search.
//! * [`experiments`] drives parameter sweeps and curve fits and writes
//!   CSV/JSON tables.

pub mod analytics;
pub mod antenna;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod quadrature;
pub mod simulator;
pub mod specfun;

pub use error::{Error, Result};
