//! Uniform random binary and unary-binary trees of exact size, grown by
//! grafting with a colored point that is repointed between steps.
//!
//! Every sampler draws from a [`RandomSource`] and is charged per fair bit.
//!
//! ```
//! use treegraft::{sample_binary_efficient, MeteredBitSource};
//!
//! let mut src = MeteredBitSource::new(42);
//! let (tree, report) = sample_binary_efficient(100, &mut src).unwrap();
//! assert_eq!(tree.size(), 201);
//! assert_eq!(report.bits_consumed, src.bits_consumed());
//! # use treegraft::RandomSource;
//! ```

pub mod arena;
pub mod batch;
pub mod bitsource;
pub mod catalan;
pub mod cli;
pub mod error;
pub mod motzkin;
pub mod oracle;
pub mod pointing;
pub mod sample;
pub mod sampler;
pub mod selftest;
pub mod weighted;

pub use arena::{Arity, ChildKind, NodeRef, Side, TreeArena};
pub use bitsource::{
    derive_seed, DyadicDistribution, DyadicProbability, MeteredBitSource, RandomSource,
    DEFAULT_SEED,
};
pub use catalan::{
    graft_f, graft_f_inverse, sample_binary_efficient, sample_binary_rejection,
    sample_binary_remy_classic, try_sample_binary, FCase,
};
pub use error::{Error, Result};
pub use motzkin::{graft_g, graft_g_inverse, sample_motzkin, try_sample_motzkin, GCase};
pub use pointing::{repoint, repoint_inverse, Anchor, Color, ColorPoint, PlainPoint};
pub use sample::{Attempt, PointedTree, SampleReport};
pub use sampler::Sampler;
pub use weighted::{
    graft_h, graft_h_inverse, make_branch_plan, sample_weighted, BranchPlan, HCase, UnaryWeight,
    WeightedSampler,
};
