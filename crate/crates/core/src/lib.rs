//! Numerical toolkit for the two-user binary fading interference channel
//! (BFIC) without transmitter channel knowledge.
//!
//! The crate is organised by capability:
//!
//! - [`channel`]: link statistics, state sampling, the 5-state contracted laws.
//! - [`regions`]: inner and outer rate regions as 2-D polytopes.
//! - [`hk`]: closed forms of the modified Han-Kobayashi scheme.
//! - [`entropy`]: exact entropy enumeration used as ground truth for the
//!   closed forms and for the leakage and independence statements.
//! - [`sim`]: random linear codes over GF(2) and Monte-Carlo decoding.
//! - [`cli`]: the `bfic` command-line front end.
//!
//! Runnable walkthroughs live under `examples/`:
//!
//! ```bash
//! cargo run --release --example capacity_regions
//! ```

pub mod channel;
pub mod cli;
pub mod entropy;
mod error;
pub mod hk;
pub mod regions;
pub mod rng;
pub mod sim;

pub use channel::{ChannelParams, ChannelState, ContractedLaw, LawTag};
pub use error::{Error, Result};
pub use hk::SplitParams;
pub use regions::{RatePair, RateRegion, Regime};
