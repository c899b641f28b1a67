//! Reproducible random streams.
//!
//! Every random draw is addressed by `(master seed, stream id, draw index)`:
//! a ChaCha8 generator keyed by the master seed, positioned on its own
//! stream. Work items that own distinct stream ids produce the same numbers
//! regardless of how they are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Field;

pub type Stream = ChaCha8Rng;

/// Purpose tags keep streams of different experiments disjoint even when
/// they share a master seed and a trial index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u16)]
pub enum Purpose {
    Matrices = 1,
    Haar = 2,
    Walk = 3,
    Shift = 4,
    Misc = 5,
}

pub fn stream_id(purpose: Purpose, index: u64) -> u64 {
    ((purpose as u64) << 48) | (index & 0xFFFF_FFFF_FFFF)
}

/// The stream for `(seed, purpose, index)`, positioned at draw 0.
pub fn stream(seed: u64, purpose: Purpose, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(purpose, index));
    rng
}

/// Complex Gaussian with independent real and imaginary parts, each of
/// variance `variance / 2` (so `E|z|^2 = variance`).
pub fn complex_gaussian<K: Field, G: Rng + ?Sized>(rng: &mut G, variance: f64) -> K {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    K::complex(s * re, s * im)
}
