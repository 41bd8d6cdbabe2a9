//! Uniform binary trees with `2n + 1` nodes.
//!
//! A color-pointed binary tree grows by one graft per step: repoint, then put
//! a new binary node above the plain point with a fresh leaf on one side,
//! which carries the new colored point. The four ways to do so are the
//! [`FCase`]s, drawn from two fair bits (`00 -> F1`, `01 -> F2`, `10 -> F3`,
//! `11 -> F4`).
//!
//! * [`try_sample_binary`] fails whenever repointing hits bottom;
//!   [`sample_binary_rejection`] retries it until it succeeds.
//! * [`sample_binary_efficient`] instead replaces the bottom case by a uniform
//!   node draw and never fails, spending `2n` bits plus `O(log^2 n)` on average.
//! * [`sample_binary_remy_classic`] is the classical growth process that draws
//!   a uniform node at every step, used as the bit-cost baseline.

use crate::arena::{ChildKind, NodeRef, Side, TreeArena, MAX_NODES};
use crate::bitsource::RandomSource;
use crate::error::{Error, Result};
use crate::pointing::{repoint_unchecked, Color, ColorPoint, PlainPoint};
use crate::sample::{Attempt, PointedTree, SampleReport};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FCase {
    /// Right leaf, red.
    F1,
    /// Right leaf, blue.
    F2,
    /// Left leaf, red.
    F3,
    /// Left leaf, blue.
    F4,
}

impl FCase {
    pub const ALL: [FCase; 4] = [FCase::F1, FCase::F2, FCase::F3, FCase::F4];

    /// Two-bit pattern to case.
    pub fn from_bits(bits: u64) -> Self {
        Self::ALL[(bits & 3) as usize]
    }

    pub fn leaf_side(self) -> Side {
        match self {
            FCase::F1 | FCase::F2 => Side::Right,
            FCase::F3 | FCase::F4 => Side::Left,
        }
    }

    pub fn color(self) -> Color {
        match self {
            FCase::F1 | FCase::F3 => Color::Red,
            FCase::F2 | FCase::F4 => Color::Blue,
        }
    }

    pub fn classify(side: Side, color: Color) -> Option<Self> {
        Some(match (side, color) {
            (Side::Right, Color::Red) => FCase::F1,
            (Side::Right, Color::Blue) => FCase::F2,
            (Side::Left, Color::Red) => FCase::F3,
            (Side::Left, Color::Blue) => FCase::F4,
            (_, Color::Green) => return None,
        })
    }
}

/// Grafts a binary node above `v` with a fresh leaf on the case's side and
/// returns the new leaf with the case's color.
pub fn graft_f(t: &mut TreeArena, v: NodeRef, case: FCase) -> ColorPoint {
    let (_, leaf) = t.insert_binary_above(v, case.leaf_side());
    match case.color() {
        Color::Red => ColorPoint::Red(leaf),
        _ => ColorPoint::Blue(leaf),
    }
}

/// Undoes [`graft_f`]: removes the pointed leaf and its parent and returns
/// the case together with the recovered plain point (the leaf's sibling).
pub fn graft_f_inverse(t: &mut TreeArena, cp: ColorPoint) -> Result<(FCase, NodeRef)> {
    if t.size() < 3 {
        return Err(Error::TreeTooSmall {
            min: 3,
            got: t.size(),
        });
    }
    cp.check(t)?;
    let leaf = cp.node();
    let side = match t.child_kind(leaf) {
        ChildKind::LeftChild => Side::Left,
        ChildKind::RightChild => Side::Right,
        ChildKind::OnlyChild => return Err(Error::ParentNotBinary(leaf)),
    };
    let case = FCase::classify(side, cp.color()).ok_or_else(|| Error::WrongAnchor {
        op: "F inverse",
        anchor: cp.to_string(),
    })?;
    let sibling = t.delete_binary_leaf(leaf)?;
    Ok((case, sibling))
}

fn check_binary_size(n: usize) -> Result<()> {
    if n > (MAX_NODES - 1) / 2 {
        return Err(Error::SizeCapExceeded {
            requested: n,
            limit: (MAX_NODES - 1) / 2,
        });
    }
    Ok(())
}

pub(crate) fn start_point<R: RandomSource + ?Sized>(src: &mut R) -> ColorPoint {
    let leaf = NodeRef::new(0);
    if src.next_bit() {
        ColorPoint::Red(leaf)
    } else {
        ColorPoint::Blue(leaf)
    }
}

/// One try with `n` grafts, keeping the final colored point.
///
/// Starts from a red leaf, or with `faithful` from a leaf colored by one
/// fair bit (`1` red, `0` blue).
pub fn try_sample_binary_pointed<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
    faithful: bool,
) -> Result<Attempt> {
    check_binary_size(n)?;
    let mut t = TreeArena::with_capacity(2 * n + 1);
    let mut cp = if faithful {
        start_point(src)
    } else {
        ColorPoint::Red(NodeRef::new(0))
    };
    let mut travel = 0;
    for _ in 0..n {
        let (p, d) = repoint_unchecked(&t, cp);
        travel += d;
        let v = match p {
            PlainPoint::Node(v) => v,
            PlainPoint::Bottom => return Ok(Attempt::fail(travel)),
        };
        cp = graft_f(&mut t, v, FCase::from_bits(src.uniform_pow2(2)));
    }
    Ok(Attempt {
        outcome: Some(PointedTree { tree: t, point: cp }),
        travel,
    })
}

/// One try; `None` on failure.
pub fn try_sample_binary<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
    faithful: bool,
) -> Result<Option<TreeArena>> {
    Ok(try_sample_binary_pointed(n, src, faithful)?
        .outcome
        .map(|p| p.tree))
}

/// Retries [`try_sample_binary`] (red start) until it succeeds.
pub fn sample_binary_rejection<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
) -> Result<(TreeArena, SampleReport)> {
    sample_binary_rejection_with(n, src, false)
}

/// [`sample_binary_rejection`] with an explicit start mode.
pub fn sample_binary_rejection_with<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
    faithful: bool,
) -> Result<(TreeArena, SampleReport)> {
    let start = Instant::now();
    let bits0 = src.bits_consumed();
    let mut report = SampleReport::default();
    loop {
        let attempt = try_sample_binary_pointed(n, src, faithful)?;
        report.travel += attempt.travel as u64;
        if let Some(p) = attempt.outcome {
            report.size = p.tree.size();
            report.bits_consumed = src.bits_consumed() - bits0;
            report.wall_time = start.elapsed();
            return Ok((p.tree, report));
        }
        report.restarts += 1;
    }
}

/// Never-failing sampler, keeping the final colored point.
///
/// At step `i` the tree has `2i + 1` nodes, all live at indices `0..=2i`; a
/// bottom repoint is replaced by a uniform draw over those indices.
pub fn sample_binary_efficient_pointed<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
) -> Result<(PointedTree, SampleReport)> {
    check_binary_size(n)?;
    let start = Instant::now();
    let bits0 = src.bits_consumed();
    let mut report = SampleReport::default();
    let mut t = TreeArena::with_capacity(2 * n + 1);
    let mut cp = ColorPoint::Red(NodeRef::new(0));
    for _ in 0..n {
        let (p, d) = repoint_unchecked(&t, cp);
        report.travel += d as u64;
        let v = match p {
            PlainPoint::Node(v) => v,
            PlainPoint::Bottom => {
                report.repoint_fallbacks += 1;
                debug_assert_eq!(t.slot_count(), t.size());
                NodeRef::new(src.uniform(t.slot_count() as u64) as usize)
            }
        };
        cp = graft_f(&mut t, v, FCase::from_bits(src.uniform_pow2(2)));
    }
    report.size = t.size();
    report.bits_consumed = src.bits_consumed() - bits0;
    report.wall_time = start.elapsed();
    Ok((PointedTree { tree: t, point: cp }, report))
}

pub fn sample_binary_efficient<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
) -> Result<(TreeArena, SampleReport)> {
    let (p, report) = sample_binary_efficient_pointed(n, src)?;
    Ok((p.tree, report))
}

/// Classical growth: at step `i` pick one of the `2i + 1` nodes uniformly and
/// one bit for the side of the new leaf (`0` left, `1` right).
pub fn sample_binary_remy_classic<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
) -> Result<(TreeArena, SampleReport)> {
    check_binary_size(n)?;
    let start = Instant::now();
    let bits0 = src.bits_consumed();
    let mut t = TreeArena::with_capacity(2 * n + 1);
    for _ in 0..n {
        let v = NodeRef::new(src.uniform(t.slot_count() as u64) as usize);
        let side = if src.next_bit() {
            Side::Right
        } else {
            Side::Left
        };
        t.insert_binary_above(v, side);
    }
    let report = SampleReport {
        size: t.size(),
        bits_consumed: src.bits_consumed() - bits0,
        wall_time: start.elapsed(),
        ..Default::default()
    };
    Ok((t, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitsource::MeteredBitSource;
    use crate::pointing::pointed_key;

    fn n(i: usize) -> NodeRef {
        NodeRef::new(i)
    }

    #[test]
    fn graft_examples() {
        let mut t = TreeArena::new_leaf_tree();
        let cp = graft_f(&mut t, n(0), FCase::F1);
        assert_eq!(pointed_key(&t, cp), "BLL:red@2");

        let mut t = TreeArena::new_leaf_tree();
        let cp = graft_f(&mut t, n(0), FCase::F4);
        assert_eq!(pointed_key(&t, cp), "BLL:blue@1");
    }

    #[test]
    fn inverse_examples() {
        let mut t = TreeArena::from_word("BLL").unwrap();
        let (case, s) = graft_f_inverse(&mut t, ColorPoint::Red(n(2))).unwrap();
        assert_eq!((case, t.to_word().as_str(), s), (FCase::F1, "L", n(1)));

        let mut t = TreeArena::from_word("BLL").unwrap();
        let (case, _) = graft_f_inverse(&mut t, ColorPoint::Blue(n(1))).unwrap();
        assert_eq!(case, FCase::F4);
        assert_eq!(t.to_word(), "L");
    }

    #[test]
    fn inverse_rejects_small_trees_and_green() {
        let mut t = TreeArena::new_leaf_tree();
        assert!(matches!(
            graft_f_inverse(&mut t, ColorPoint::Red(n(0))),
            Err(Error::TreeTooSmall { .. })
        ));
        let mut t = TreeArena::from_word("UBLL").unwrap();
        assert!(graft_f_inverse(&mut t, ColorPoint::Green(n(0))).is_err());
    }

    #[test]
    fn zero_size_is_free() {
        let mut src = MeteredBitSource::new(1);
        let t = try_sample_binary(0, &mut src, false).unwrap().unwrap();
        assert_eq!(t.to_word(), "L");
        assert_eq!(src.bits_consumed(), 0);

        let (t, r) = sample_binary_efficient(0, &mut src).unwrap();
        assert_eq!((t.to_word().as_str(), r.bits_consumed), ("L", 0));
        let (t, r) = sample_binary_rejection(0, &mut src).unwrap();
        assert_eq!((t.to_word().as_str(), r.restarts), ("L", 0));
        let (t, _) = sample_binary_remy_classic(0, &mut src).unwrap();
        assert_eq!(t.to_word(), "L");
    }

    #[test]
    fn one_internal_node_costs_two_bits() {
        for seed in 0..16 {
            let mut src = MeteredBitSource::new(seed);
            let t = try_sample_binary(1, &mut src, false).unwrap().unwrap();
            assert_eq!(t.to_word(), "BLL");
            assert_eq!(src.bits_consumed(), 2);

            let mut src = MeteredBitSource::new(seed);
            let (t, r) = sample_binary_efficient(1, &mut src).unwrap();
            assert_eq!((t.to_word().as_str(), r.bits_consumed), ("BLL", 2));
        }
    }

    #[test]
    fn efficient_without_fallback_costs_exactly_two_bits_per_step() {
        for seed in 0..200 {
            let mut src = MeteredBitSource::new(seed);
            let (t, r) = sample_binary_efficient(40, &mut src).unwrap();
            t.validate().unwrap();
            assert_eq!(t.size(), 81);
            if r.repoint_fallbacks == 0 {
                assert_eq!(r.bits_consumed, 80);
            } else {
                assert!(r.bits_consumed > 80);
            }
        }
    }

    #[test]
    fn samplers_keep_the_tree_valid() {
        for seed in 0..50 {
            let mut src = MeteredBitSource::new(seed);
            let (t, _) = sample_binary_rejection_with(6, &mut src, true).unwrap();
            t.validate().unwrap();
            assert_eq!((t.size(), t.unary_nodes()), (13, 0));
            let (t, _) = sample_binary_remy_classic(6, &mut src).unwrap();
            t.validate().unwrap();
            assert_eq!(t.size(), 13);
        }
    }

    #[test]
    fn travel_is_bounded_by_grafts() {
        for seed in 0..300 {
            let mut src = MeteredBitSource::new(seed);
            let a = try_sample_binary_pointed(30, &mut src, false).unwrap();
            if a.outcome.is_some() {
                assert!(a.travel <= 30, "travel {}", a.travel);
            }
        }
    }

    #[test]
    fn report_bits_match_counter() {
        let mut src = MeteredBitSource::new(42);
        src.next_bit();
        let before = src.bits_consumed();
        let (_, r) = sample_binary_rejection(20, &mut src).unwrap();
        assert_eq!(r.bits_consumed, src.bits_consumed() - before);
    }
}
