//! Simulation toolkit for bandwidth-exchange cooperative forwarding.
//!
//! Nodes in a single cell each hold an initial slice of bandwidth and may
//! hand part of it to a neighbor as payment for two-hop decode-and-forward
//! relaying. The crate covers the whole pipeline:
//!
//! * [`netmodel`]: deployments, link gains, direct rates, initial bandwidth
//!   splits;
//! * [`utility`]: alpha-fair utilities and pairwise utility gains;
//! * [`pairsolver`]: the concave two-node resource allocation that prices a
//!   single sender/forwarder pairing;
//! * [`matching`]: maximum weighted matching over the pairwise gains, plus
//!   the distributed greedy variant and bipartite matching;
//! * [`protocol`]: network-level pairing pipelines built on the above;
//! * [`sim`]: seeded Monte-Carlo experiments and CSV emission.

pub mod error;
pub mod matching;
pub mod netmodel;
pub mod numeric;
pub mod pairsolver;
pub mod protocol;
pub mod simharness;
pub mod utility;

pub use error::{Error, Result};
