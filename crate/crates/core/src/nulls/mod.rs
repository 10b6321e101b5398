//! Null models and synthetic ground truth: block-shuffled surrogates,
//! fractional Gaussian noise, and multiplicative cycle/spike injection.

mod fgn;
mod inject;
mod shuffle;

pub use fgn::{fgn_autocovariance, generate_fgn};
pub use inject::{inject, synth_series, Spike, SynthSpec};
pub use shuffle::{shuffle, surrogate_acf, surrogates, ShuffleScheme, SurrogateSpec};
