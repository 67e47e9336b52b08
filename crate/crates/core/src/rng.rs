//! Seeded random constants. Every random choice in the library is drawn
//! from a SplitMix64 stream keyed by the caller's seed and a purpose tag, so
//! independent choices never share a stream.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::numerics::{Complex, StoredComplex};

pub(crate) const STREAM_START: u64 = 0x5354_4152_5453_5953;
pub(crate) const STREAM_GAMMA: u64 = 0x4741_4d4d_4100_0001;
pub(crate) const STREAM_EMBED: u64 = 0x454d_4245_4400_0002;
pub(crate) const STREAM_SLICES: u64 = 0x534c_4943_4500_0003;
pub(crate) const STREAM_LOOPS: u64 = 0x4c4f_4f50_5300_0004;

pub fn stream(seed: u64, purpose: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed ^ purpose.rotate_left(17))
}

/// Uniform point on the unit circle.
pub fn unit_complex(rng: &mut SplitMix64) -> StoredComplex {
    let angle = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex::from_polar_f64(1.0, angle)
}

/// Complex number with uniformly random angle and modulus in `[0.5, 1.5]`.
pub fn generic_complex(rng: &mut SplitMix64) -> StoredComplex {
    let angle = rng.gen::<f64>() * std::f64::consts::TAU;
    let modulus = 0.5 + rng.gen::<f64>();
    Complex::from_polar_f64(modulus, angle)
}
