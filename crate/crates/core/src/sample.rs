use crate::arena::TreeArena;
use crate::pointing::ColorPoint;
use std::time::Duration;

/// A tree together with its colored point.
#[derive(Clone, Debug)]
pub struct PointedTree {
    pub tree: TreeArena,
    pub point: ColorPoint,
}

/// Result of a single try of a rejection sampler.
#[derive(Clone, Debug)]
pub struct Attempt {
    /// `None` when the try failed.
    pub outcome: Option<PointedTree>,
    /// Edges the point moved upward while repointing.
    pub travel: usize,
}

impl Attempt {
    pub(crate) fn fail(travel: usize) -> Self {
        Attempt {
            outcome: None,
            travel,
        }
    }

    pub fn tree(&self) -> Option<&TreeArena> {
        self.outcome.as_ref().map(|p| &p.tree)
    }
}

/// Per-sample statistics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleReport {
    /// Node count of the returned tree.
    pub size: usize,
    pub bits_consumed: u64,
    /// Failed tries before the accepted one.
    pub restarts: u64,
    /// Uniform node draws made because repointing hit bottom.
    pub repoint_fallbacks: u64,
    /// Total upward repointing travel over all tries.
    pub travel: u64,
    pub wall_time: Duration,
}
