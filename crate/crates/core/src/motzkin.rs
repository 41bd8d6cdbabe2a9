//! Uniform unary-binary (Motzkin) trees with `n` nodes.
//!
//! The grafting operators:
//!
//! | case | applies to | effect | new point | size |
//! |------|-----------|--------|-----------|------|
//! | G1 | red/blue leaf | unary node above the leaf | same color, same leaf | +1 |
//! | G1 | green unary `u` | `u` becomes binary with a new right leaf | red, new leaf | +1 |
//! | G2 | plain node `v` | unary node above `v` | green, new node | +1 |
//! | G3 | plain node `v` | binary node above `v`, new right leaf | blue, new leaf | +2 |
//! | G4 | plain node `v` | binary node above `v`, new left leaf | red, new leaf | +2 |
//! | G5 | plain node `v` | binary node above `v`, new left leaf | blue, new leaf | +2 |
//!
//! A try draws G1, G2 with probability 1/3 each and G3, G4, G5 with 1/9 each,
//! as one trit (`0 -> G1`, `1 -> G2`, `2 -> second trit`) and, when needed, a
//! second trit (`0 -> G3`, `1 -> G4`, `2 -> G5`).

use crate::arena::{ChildKind, NodeRef, Side, TreeArena, MAX_NODES};
use crate::bitsource::RandomSource;
use crate::catalan::start_point;
use crate::error::{Error, Result};
use crate::pointing::{repoint_unchecked, Anchor, ColorPoint, PlainPoint};
use crate::sample::{Attempt, PointedTree, SampleReport};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GCase {
    G1,
    G2,
    G3,
    G4,
    G5,
}

impl GCase {
    pub const ALL: [GCase; 5] = [GCase::G1, GCase::G2, GCase::G3, GCase::G4, GCase::G5];

    /// Nodes added by the operator.
    pub fn growth(self) -> usize {
        match self {
            GCase::G1 | GCase::G2 => 1,
            _ => 2,
        }
    }
}

pub fn graft_g1(t: &mut TreeArena, cp: ColorPoint) -> Result<ColorPoint> {
    cp.check(t)?;
    Ok(match cp {
        ColorPoint::Red(leaf) | ColorPoint::Blue(leaf) => {
            t.insert_unary_above(leaf);
            cp
        }
        ColorPoint::Green(u) => ColorPoint::Red(t.grow_unary_to_binary(u)?),
    })
}

pub fn graft_g2(t: &mut TreeArena, v: NodeRef) -> Result<ColorPoint> {
    t.check_live(v)?;
    Ok(ColorPoint::Green(t.insert_unary_above(v)))
}

pub fn graft_g345(t: &mut TreeArena, v: NodeRef, case: GCase) -> Result<ColorPoint> {
    t.check_live(v)?;
    let (side, red) = match case {
        GCase::G3 => (Side::Right, false),
        GCase::G4 => (Side::Left, true),
        GCase::G5 => (Side::Left, false),
        _ => {
            return Err(Error::WrongAnchor {
                op: "G3/G4/G5",
                anchor: format!("{case:?}"),
            })
        }
    };
    let (_, leaf) = t.insert_binary_above(v, side);
    Ok(if red {
        ColorPoint::Red(leaf)
    } else {
        ColorPoint::Blue(leaf)
    })
}

/// Applies any G operator to a matching anchor.
pub fn graft_g(t: &mut TreeArena, anchor: Anchor, case: GCase) -> Result<ColorPoint> {
    match (case, anchor) {
        (GCase::G1, Anchor::Colored(cp)) => graft_g1(t, cp),
        (GCase::G2, Anchor::Plain(v)) => graft_g2(t, v),
        (GCase::G3 | GCase::G4 | GCase::G5, Anchor::Plain(v)) => graft_g345(t, v, case),
        _ => Err(Error::WrongAnchor {
            op: "G",
            anchor: anchor.to_string(),
        }),
    }
}

/// Undoes the G operator that produced `cp`, returning it and its input anchor.
pub fn graft_g_inverse(t: &mut TreeArena, cp: ColorPoint) -> Result<(GCase, Anchor)> {
    if t.size() < 2 {
        return Err(Error::TreeTooSmall {
            min: 2,
            got: t.size(),
        });
    }
    cp.check(t)?;
    match cp {
        ColorPoint::Green(u) => {
            let child = t.delete_unary(u)?;
            Ok((GCase::G2, Anchor::Plain(child)))
        }
        ColorPoint::Red(leaf) | ColorPoint::Blue(leaf) => {
            let red = matches!(cp, ColorPoint::Red(_));
            match (t.child_kind(leaf), red) {
                (ChildKind::OnlyChild, _) => {
                    let u = t.parent(leaf).expect("only child has a parent");
                    t.delete_unary(u)?;
                    Ok((GCase::G1, Anchor::Colored(cp)))
                }
                (ChildKind::RightChild, true) => {
                    let u = t.shrink_binary_to_unary(leaf)?;
                    Ok((GCase::G1, Anchor::Colored(ColorPoint::Green(u))))
                }
                (kind, red) => {
                    let case = match (kind, red) {
                        (ChildKind::RightChild, false) => GCase::G3,
                        (ChildKind::LeftChild, true) => GCase::G4,
                        _ => GCase::G5,
                    };
                    let sibling = t.delete_binary_leaf(leaf)?;
                    Ok((case, Anchor::Plain(sibling)))
                }
            }
        }
    }
}

fn check_motzkin_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize {
            size: 0,
            reason: "a unary-binary tree has at least one node",
        });
    }
    if n >= MAX_NODES {
        return Err(Error::SizeCapExceeded {
            requested: n,
            limit: MAX_NODES - 1,
        });
    }
    Ok(())
}

/// Draws G1/G2 with 1/3 each and G3/G4/G5 with 1/9 each.
pub fn draw_gcase<R: RandomSource + ?Sized>(src: &mut R) -> GCase {
    match src.trit() {
        0 => GCase::G1,
        1 => GCase::G2,
        _ => match src.trit() {
            0 => GCase::G3,
            1 => GCase::G4,
            _ => GCase::G5,
        },
    }
}

/// One try, keeping the final colored point. A successful outcome has `n`
/// or `n + 1` nodes.
pub fn try_sample_motzkin_pointed<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
) -> Result<Attempt> {
    check_motzkin_size(n)?;
    let mut t = TreeArena::with_capacity(n + 1);
    let mut cp = start_point(src);
    let mut travel = 0;
    while t.size() < n {
        let case = draw_gcase(src);
        cp = if case == GCase::G1 {
            graft_g1(&mut t, cp)?
        } else {
            let (p, d) = repoint_unchecked(&t, cp);
            travel += d;
            match p {
                PlainPoint::Node(v) if case == GCase::G2 => graft_g2(&mut t, v)?,
                PlainPoint::Node(v) => graft_g345(&mut t, v, case)?,
                PlainPoint::Bottom => return Ok(Attempt::fail(travel)),
            }
        };
    }
    Ok(Attempt {
        outcome: Some(PointedTree { tree: t, point: cp }),
        travel,
    })
}

/// One try; `None` on failure. The tree may have `n + 1` nodes.
pub fn try_sample_motzkin<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
) -> Result<Option<TreeArena>> {
    Ok(try_sample_motzkin_pointed(n, src)?.outcome.map(|p| p.tree))
}

/// Retries until a try ends with exactly `n` nodes.
pub fn sample_motzkin<R: RandomSource + ?Sized>(
    n: usize,
    src: &mut R,
) -> Result<(TreeArena, SampleReport)> {
    let start = Instant::now();
    let bits0 = src.bits_consumed();
    let mut report = SampleReport::default();
    loop {
        let attempt = try_sample_motzkin_pointed(n, src)?;
        report.travel += attempt.travel as u64;
        match attempt.outcome {
            Some(p) if p.tree.size() == n => {
                report.size = n;
                report.bits_consumed = src.bits_consumed() - bits0;
                report.wall_time = start.elapsed();
                return Ok((p.tree, report));
            }
            _ => report.restarts += 1,
        }
    }
}
