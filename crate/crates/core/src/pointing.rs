//! Colored points and the repointing bijection.
//!
//! A color-pointed tree marks either a leaf (blue or red) or a unary node
//! (green). Repointing leaves the tree untouched and turns the colored point
//! into a plain pointed node, or into no point at all ([`PlainPoint::Bottom`]):
//!
//! * blue leaf: first ancestor, the leaf included, that is a left child;
//!   `Bottom` if there is none (the leaf is the rightmost leaf of the tree);
//! * red leaf: first ancestor, the leaf included, that is a right child
//!   (always exists since the root counts as a right child);
//! * green unary node: its only child.

use crate::arena::{Arity, ChildKind, NodeRef, TreeArena};
use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColorPoint {
    Blue(NodeRef),
    Red(NodeRef),
    Green(NodeRef),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Blue,
    Red,
    Green,
}

impl ColorPoint {
    pub fn node(self) -> NodeRef {
        match self {
            ColorPoint::Blue(v) | ColorPoint::Red(v) | ColorPoint::Green(v) => v,
        }
    }

    pub fn color(self) -> Color {
        match self {
            ColorPoint::Blue(_) => Color::Blue,
            ColorPoint::Red(_) => Color::Red,
            ColorPoint::Green(_) => Color::Green,
        }
    }

    pub fn with_node(self, v: NodeRef) -> Self {
        match self {
            ColorPoint::Blue(_) => ColorPoint::Blue(v),
            ColorPoint::Red(_) => ColorPoint::Red(v),
            ColorPoint::Green(_) => ColorPoint::Green(v),
        }
    }

    /// Checks that the point references a live node of the right arity.
    pub fn check(self, t: &TreeArena) -> Result<()> {
        let v = self.node();
        t.check_live(v)?;
        let want = match self {
            ColorPoint::Green(_) => Arity::Unary,
            _ => Arity::Leaf,
        };
        if t.arity(v) != want {
            return Err(Error::PointMismatch {
                point: self.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Blue => "blue",
            Color::Red => "red",
            Color::Green => "green",
        })
    }
}

impl fmt::Display for ColorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.color(), self.node())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlainPoint {
    Node(NodeRef),
    Bottom,
}

impl fmt::Display for PlainPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlainPoint::Node(v) => write!(f, "@{v}"),
            PlainPoint::Bottom => f.write_str("bottom"),
        }
    }
}

/// Where a graft operator applies: a colored point or a plain pointed node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Anchor {
    Colored(ColorPoint),
    Plain(NodeRef),
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anchor::Colored(cp) => cp.fmt(f),
            Anchor::Plain(v) => write!(f, "@{v}"),
        }
    }
}

/// Repoints `cp`. See the module docs for the rules.
pub fn repoint(t: &TreeArena, cp: ColorPoint) -> Result<PlainPoint> {
    cp.check(t)?;
    Ok(repoint_unchecked(t, cp).0)
}

/// Like [`repoint`], also returning how many edges the point moved upward.
pub fn repoint_traced(t: &TreeArena, cp: ColorPoint) -> Result<(PlainPoint, usize)> {
    cp.check(t)?;
    Ok(repoint_unchecked(t, cp))
}

/// Repointing for points the caller already knows are valid.
#[inline]
pub(crate) fn repoint_unchecked(t: &TreeArena, cp: ColorPoint) -> (PlainPoint, usize) {
    let (mut v, target) = match cp {
        ColorPoint::Green(u) => {
            let child = t.first_child(u).expect("green point on a unary node");
            return (PlainPoint::Node(child), 0);
        }
        ColorPoint::Blue(l) => (l, ChildKind::LeftChild),
        ColorPoint::Red(l) => (l, ChildKind::RightChild),
    };
    let mut travel = 0;
    loop {
        if t.child_kind(v) == target {
            return (PlainPoint::Node(v), travel);
        }
        match t.parent(v) {
            Some(p) => {
                v = p;
                travel += 1;
            }
            None => return (PlainPoint::Bottom, travel),
        }
    }
}

/// The unique colored point that repoints to `p`.
pub fn repoint_inverse(t: &TreeArena, p: PlainPoint) -> Result<ColorPoint> {
    Ok(match p {
        PlainPoint::Bottom => ColorPoint::Blue(t.rightmost_leaf(t.root())),
        PlainPoint::Node(v) => {
            t.check_live(v)?;
            match t.child_kind(v) {
                ChildKind::LeftChild => ColorPoint::Blue(t.rightmost_leaf(v)),
                ChildKind::RightChild => ColorPoint::Red(t.leftmost_leaf(v)),
                ChildKind::OnlyChild => {
                    ColorPoint::Green(t.parent(v).expect("an only child has a parent"))
                }
            }
        }
    })
}

/// All `2 * leaves + unary` colored points of `t`, in preorder.
pub fn color_points(t: &TreeArena) -> Vec<ColorPoint> {
    let mut out = Vec::with_capacity(2 * t.leaves() + t.unary_nodes());
    for v in t.preorder() {
        match t.arity(v) {
            Arity::Leaf => {
                out.push(ColorPoint::Blue(v));
                out.push(ColorPoint::Red(v));
            }
            Arity::Unary => out.push(ColorPoint::Green(v)),
            Arity::Binary => {}
        }
    }
    out
}

/// All `size + 1` plain points of `t`: every node in preorder, then `Bottom`.
pub fn plain_points(t: &TreeArena) -> Vec<PlainPoint> {
    let mut out: Vec<PlainPoint> = t.preorder().into_iter().map(PlainPoint::Node).collect();
    out.push(PlainPoint::Bottom);
    out
}

/// Shape-level key of a color-pointed tree, e.g. `BLL:red@1`, where the
/// index is the preorder position of the pointed node.
pub fn pointed_key(t: &TreeArena, cp: ColorPoint) -> String {
    let pos = t.preorder_positions()[cp.node().index()].expect("live node");
    format!("{}:{}@{}", t.to_word(), cp.color(), pos)
}

/// Shape-level key of a plain-pointed tree, e.g. `BLL@0` or `BLL@bottom`.
pub fn plain_key(t: &TreeArena, p: PlainPoint) -> String {
    match p {
        PlainPoint::Bottom => format!("{}@bottom", t.to_word()),
        PlainPoint::Node(v) => {
            let pos = t.preorder_positions()[v.index()].expect("live node");
            format!("{}@{}", t.to_word(), pos)
        }
    }
}
