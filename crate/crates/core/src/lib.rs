//! Collective emotion time series from dated text.
//!
//! Documents are matched against an emotion dictionary and counted per day;
//! counts become normalized and standardized series per emotion. On those
//! series the crate estimates weekly and yearly periodicity profiles,
//! removes them, detects spikes and recurring calendar dates, measures long
//! memory through the autocorrelation function and power spectrum, builds
//! shuffled surrogates as null models, and summarizes the slow movement of
//! all emotions with principal component analysis.
//!
//! Every stage is also reachable from the `collective-emotion` binary, which
//! writes CSV artifacts and a run manifest.


pub mod cli;
pub mod corpus;
pub mod dictionary;
pub mod error;
pub mod events;
pub mod io;
pub mod memory;
pub mod nulls;
pub mod pca;
pub mod periodicity;
pub mod rng;
pub mod series;
pub mod signal;

pub use error::{Error, Result};
pub use series::{DailySeries, DateWindow};
