//! Counter-based deterministic randomness.
//!
//! Every draw is a pure function of `(seed, index, draw)`, so a stream can be
//! split into chunks, run in parallel, or resampled at any index without
//! changing a single value. Not cryptographic.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform f64 in [0, 1) derived from `(seed, index, draw)`.
///
/// `index` is the sample counter; `draw` distinguishes multiple draws within
/// one sample (e.g. click then internal outcome).
#[inline]
pub fn uniform_at(seed: u64, index: u64, draw: u32) -> f64 {
    let mixed = splitmix64(seed ^ splitmix64(index) ^ splitmix64(u64::from(draw) << 32));
    // 53 mantissa bits
    (mixed >> 11) as f64 / (1u64 << 53) as f64
}

/// Standard normal deviate derived from `(seed, index, draw)` via Box-Muller.
#[inline]
pub fn normal_at(seed: u64, index: u64, draw: u32) -> f64 {
    let u1 = uniform_at(seed, index, 2 * draw);
    let u2 = uniform_at(seed, index, 2 * draw + 1);
    // guard against log(0)
    let u1 = if u1 <= 0.0 { f64::MIN_POSITIVE } else { u1 };
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Stateful view over the counter stream: each call consumes one index.
#[derive(Clone, Debug)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    /// Next uniform f64 in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        let v = uniform_at(self.seed, self.counter, 0);
        self.counter += 1;
        v
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}
