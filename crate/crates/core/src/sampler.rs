//! One entry point over every sampler, and seeded batches.

use crate::arena::TreeArena;
use crate::batch::try_map_indexed;
use crate::bitsource::{MeteredBitSource, RandomSource};
use crate::catalan::{
    sample_binary_efficient, sample_binary_rejection, sample_binary_remy_classic,
};
use crate::error::Result;
use crate::motzkin::sample_motzkin;
use crate::sample::SampleReport;
use crate::weighted::WeightedSampler;

#[derive(Clone, Debug)]
pub enum Sampler {
    BinaryRejection,
    BinaryEfficient,
    BinaryRemyClassic,
    Motzkin,
    Weighted(WeightedSampler),
}

impl Sampler {
    /// Samples one tree. `size` is internal nodes for the binary samplers
    /// and total nodes otherwise.
    pub fn sample<R: RandomSource + ?Sized>(
        &self,
        size: usize,
        src: &mut R,
    ) -> Result<(TreeArena, SampleReport)> {
        match self {
            Sampler::BinaryRejection => sample_binary_rejection(size, src),
            Sampler::BinaryEfficient => sample_binary_efficient(size, src),
            Sampler::BinaryRemyClassic => sample_binary_remy_classic(size, src),
            Sampler::Motzkin => sample_motzkin(size, src),
            Sampler::Weighted(w) => w.sample(size, src),
        }
    }

    /// Sample `index` of a batch, drawn from its own derived stream.
    pub fn sample_indexed(
        &self,
        size: usize,
        seed: u64,
        index: u64,
    ) -> Result<(TreeArena, SampleReport)> {
        self.sample(size, &mut MeteredBitSource::for_sample(seed, index))
    }

    /// `count` independent samples; identical for any thread count.
    pub fn sample_batch(
        &self,
        size: usize,
        seed: u64,
        count: u64,
    ) -> Result<Vec<(TreeArena, SampleReport)>> {
        try_map_indexed(count, |i| self.sample_indexed(size, seed, i))
    }

    /// Like [`Sampler::sample_batch`] but drops each tree once sampled.
    pub fn report_batch(&self, size: usize, seed: u64, count: u64) -> Result<Vec<SampleReport>> {
        try_map_indexed(count, |i| {
            self.sample_indexed(size, seed, i).map(|(_, r)| r)
        })
    }
}
