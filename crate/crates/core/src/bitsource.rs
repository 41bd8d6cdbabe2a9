//! Fair random bits with exact accounting.
//!
//! Every random decision taken by the samplers goes through [`RandomSource`].
//! The derived draws (`uniform_pow2`, `uniform`, `trit`, `bernoulli`,
//! `categorical`) have default implementations built only from
//! [`RandomSource::next_bit`], so a metered source charges exactly one unit per
//! fair bit and no other entropy path exists.
//!
//! [`MeteredBitSource`] is the production source: a ChaCha8 stream
//! (`rand_chacha`, seeded through `SeedableRng::seed_from_u64`) whose 64-bit
//! output words are consumed most-significant bit first.

use crate::error::{Error, Result};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Seed used by the CLI and the frozen regression tests when none is given.
pub const DEFAULT_SEED: u64 = 0x7472_6565_6772_6166;

/// A source of fair random bits.
pub trait RandomSource {
    /// One fair bit.
    fn next_bit(&mut self) -> bool;

    /// Total number of fair bits drawn so far.
    fn bits_consumed(&self) -> u64;

    /// Uniform integer in `[0, 2^k)` from exactly `k` bits, most significant first.
    fn uniform_pow2(&mut self, k: u32) -> u64 {
        debug_assert!(k <= 64);
        let mut x = 0u64;
        for _ in 0..k {
            x = (x << 1) | self.next_bit() as u64;
        }
        x
    }

    /// Exactly uniform integer in `[0, m)`.
    ///
    /// Draws `ceil(log2 m)` bits and rejects values `>= m`.
    fn uniform(&mut self, m: u64) -> u64 {
        assert!(m >= 1, "uniform draw over an empty range");
        if m == 1 {
            return 0;
        }
        let k = ceil_log2(m);
        loop {
            let x = self.uniform_pow2(k);
            if x < m {
                return x;
            }
        }
    }

    /// Uniform value in `{0, 1, 2}`: `00 -> 0`, `01 -> 1`, `10 -> 2`, `11 -> redraw`.
    fn trit(&mut self) -> u8 {
        self.uniform(3) as u8
    }

    /// `true` with probability exactly `p`.
    ///
    /// Compares a lazily drawn uniform real `U = 0.b1 b2 ...` against the
    /// binary expansion of `p` and answers `U < p`, stopping at the first
    /// differing digit.
    fn bernoulli(&mut self, p: DyadicProbability) -> bool {
        if p.numerator == 0 {
            return false;
        }
        if p.is_one() {
            return true;
        }
        for j in (0..p.exponent).rev() {
            let digit = (p.numerator >> j) & 1 == 1;
            let bit = self.next_bit();
            if bit != digit {
                return digit;
            }
        }
        false
    }

    /// Index drawn from a dyadic distribution by lazy interval refinement.
    fn categorical(&mut self, dist: &DyadicDistribution) -> usize {
        let cum = &dist.cumulative;
        let mut lo: u128 = 0;
        let mut width: u128 = 1u128 << dist.exponent;
        loop {
            // bucket containing `lo`; zero-mass buckets are never selected
            let idx = cum.partition_point(|&c| c <= lo) - 1;
            if lo + width <= cum[idx + 1] {
                return idx;
            }
            width >>= 1;
            if self.next_bit() {
                lo += width;
            }
        }
    }
}

impl<R: RandomSource + ?Sized> RandomSource for &mut R {
    fn next_bit(&mut self) -> bool {
        (**self).next_bit()
    }
    fn bits_consumed(&self) -> u64 {
        (**self).bits_consumed()
    }
    fn uniform_pow2(&mut self, k: u32) -> u64 {
        (**self).uniform_pow2(k)
    }
    fn uniform(&mut self, m: u64) -> u64 {
        (**self).uniform(m)
    }
    fn trit(&mut self) -> u8 {
        (**self).trit()
    }
    fn bernoulli(&mut self, p: DyadicProbability) -> bool {
        (**self).bernoulli(p)
    }
    fn categorical(&mut self, dist: &DyadicDistribution) -> usize {
        (**self).categorical(dist)
    }
}

/// `ceil(log2 m)` for `m >= 1`.
pub fn ceil_log2(m: u64) -> u32 {
    debug_assert!(m >= 1);
    64 - (m - 1).leading_zeros()
}

/// Deterministic seeded bit stream with an exact consumed-bit counter.
#[derive(Clone, Debug)]
pub struct MeteredBitSource {
    seed: u64,
    rng: ChaCha8Rng,
    word: u64,
    remaining: u32,
    bits_consumed: u64,
}

impl MeteredBitSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            word: 0,
            remaining: 0,
            bits_consumed: 0,
        }
    }

    /// Source for the `index`-th sample of a batch seeded with `seed`.
    pub fn for_sample(seed: u64, index: u64) -> Self {
        Self::new(derive_seed(seed, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl Default for MeteredBitSource {
    fn default() -> Self {
        Self::new(DEFAULT_SEED)
    }
}

impl RandomSource for MeteredBitSource {
    #[inline]
    fn next_bit(&mut self) -> bool {
        if self.remaining == 0 {
            self.word = self.rng.next_u64();
            self.remaining = 64;
        }
        self.remaining -= 1;
        self.bits_consumed += 1;
        (self.word >> self.remaining) & 1 == 1
    }

    fn bits_consumed(&self) -> u64 {
        self.bits_consumed
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-sample seed: `splitmix64(seed ^ splitmix64(index))`.
///
/// Batches seeded this way produce the same trees regardless of the order or
/// thread in which samples are drawn.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// A probability `numerator / 2^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DyadicProbability {
    numerator: u128,
    exponent: u32,
}

impl DyadicProbability {
    pub fn new(numerator: u128, exponent: u32) -> Result<Self> {
        if exponent > 126 {
            return Err(Error::InvalidDistribution(format!(
                "exponent {exponent} exceeds 126"
            )));
        }
        if numerator > 1u128 << exponent {
            return Err(Error::InvalidDistribution(format!(
                "{numerator}/2^{exponent} exceeds one"
            )));
        }
        Ok(Self {
            numerator,
            exponent,
        })
    }

    pub fn numerator(&self) -> u128 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.numerator == 1u128 << self.exponent
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / (self.exponent as f64).exp2()
    }
}

/// A finite distribution whose masses are `numerators[i] / 2^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicDistribution {
    numerators: Vec<u128>,
    exponent: u32,
    cumulative: Vec<u128>,
}

impl DyadicDistribution {
    /// Masses must be nonnegative and sum to exactly `2^exponent`.
    pub fn new(numerators: Vec<u128>, exponent: u32) -> Result<Self> {
        if numerators.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        if exponent > 126 {
            return Err(Error::InvalidDistribution(format!(
                "exponent {exponent} exceeds 126"
            )));
        }
        let mut cumulative = Vec::with_capacity(numerators.len() + 1);
        let mut acc: u128 = 0;
        cumulative.push(0);
        for &m in &numerators {
            acc = acc
                .checked_add(m)
                .ok_or_else(|| Error::InvalidDistribution("mass overflow".into()))?;
            cumulative.push(acc);
        }
        if acc != 1u128 << exponent {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {acc}/2^{exponent}, not one"
            )));
        }
        Ok(Self {
            numerators,
            exponent,
            cumulative,
        })
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn numerators(&self) -> &[u128] {
        &self.numerators
    }

    pub fn mass(&self, i: usize) -> DyadicProbability {
        DyadicProbability {
            numerator: self.numerators[i],
            exponent: self.exponent,
        }
    }
}
