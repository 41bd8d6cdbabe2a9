//! Array-backed plane trees.
//!
//! A tree is a `Vec` of 16-byte node records: an arity flag, the parent index
//! (a sentinel for the root) and two child indices. Every structural query is
//! constant time. Grafting appends nodes at the end of the array, so a tree
//! that was only grown has its live nodes at indices `0..size`.
//!
//! Deleted slots are kept on a free list and reused by the next insertion;
//! indices of the remaining nodes never move.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

const NONE: u32 = u32::MAX;

/// Largest number of node slots an arena can hold.
pub const MAX_NODES: usize = (u32::MAX - 1) as usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef(u32);

impl NodeRef {
    pub fn new(index: usize) -> Self {
        assert!(index < MAX_NODES, "node index {index} out of range");
        NodeRef(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Arity {
    Leaf,
    Unary,
    Binary,
}

impl Arity {
    pub fn children(self) -> usize {
        match self {
            Arity::Leaf => 0,
            Arity::Unary => 1,
            Arity::Binary => 2,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Arity::Leaf => 'L',
            Arity::Unary => 'U',
            Arity::Binary => 'B',
        }
    }
}

/// Position of a node under its parent. The root counts as a right child.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChildKind {
    LeftChild,
    RightChild,
    OnlyChild,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Children {
    None,
    One(NodeRef),
    Two(NodeRef, NodeRef),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Node {
    parent: u32,
    // the only child of a unary node lives in `child1`
    child1: u32,
    child2: u32,
    arity: Arity,
    live: bool,
}

impl Node {
    fn leaf(parent: u32) -> Self {
        Node {
            parent,
            child1: NONE,
            child2: NONE,
            arity: Arity::Leaf,
            live: true,
        }
    }
}

/// Size in bytes of one node record.
pub const NODE_BYTES: usize = std::mem::size_of::<Node>();
const _: () = assert!(NODE_BYTES == 16);

#[derive(Clone, Debug)]
pub struct TreeArena {
    nodes: Vec<Node>,
    root: u32,
    free: Vec<u32>,
    // live counts indexed by `Arity as usize`
    counts: [usize; 3],
}

impl TreeArena {
    /// A single leaf.
    pub fn new_leaf_tree() -> Self {
        Self::with_capacity(1)
    }

    /// A single leaf, with room for `nodes` slots before reallocating.
    pub fn with_capacity(nodes: usize) -> Self {
        let mut v = Vec::with_capacity(nodes.max(1));
        v.push(Node::leaf(NONE));
        TreeArena {
            nodes: v,
            root: 0,
            free: Vec::new(),
            counts: [1, 0, 0],
        }
    }

    pub fn size(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn leaves(&self) -> usize {
        self.counts[Arity::Leaf as usize]
    }

    pub fn unary_nodes(&self) -> usize {
        self.counts[Arity::Unary as usize]
    }

    pub fn binary_nodes(&self) -> usize {
        self.counts[Arity::Binary as usize]
    }

    /// Number of array slots, live or dead.
    pub fn slot_count(&self) -> usize {
        self.nodes.len()
    }

    /// Bytes reserved by the node array.
    pub fn reserved_bytes(&self) -> usize {
        self.nodes.capacity() * NODE_BYTES + self.free.capacity() * 4
    }

    pub fn root(&self) -> NodeRef {
        NodeRef(self.root)
    }

    pub fn is_live(&self, v: NodeRef) -> bool {
        self.nodes.get(v.index()).is_some_and(|n| n.live)
    }

    pub fn check_live(&self, v: NodeRef) -> Result<()> {
        if self.is_live(v) {
            Ok(())
        } else {
            Err(Error::DeadNode(v))
        }
    }

    #[inline]
    fn node(&self, v: NodeRef) -> &Node {
        &self.nodes[v.index()]
    }

    #[inline]
    pub fn arity(&self, v: NodeRef) -> Arity {
        self.node(v).arity
    }

    #[inline]
    pub fn parent(&self, v: NodeRef) -> Option<NodeRef> {
        match self.node(v).parent {
            NONE => None,
            p => Some(NodeRef(p)),
        }
    }

    #[inline]
    pub fn is_root(&self, v: NodeRef) -> bool {
        self.node(v).parent == NONE
    }

    #[inline]
    pub fn child_kind(&self, v: NodeRef) -> ChildKind {
        let p = self.node(v).parent;
        if p == NONE {
            return ChildKind::RightChild;
        }
        let parent = &self.nodes[p as usize];
        match parent.arity {
            Arity::Unary => ChildKind::OnlyChild,
            _ if parent.child1 == v.0 => ChildKind::LeftChild,
            _ => ChildKind::RightChild,
        }
    }

    #[inline]
    pub fn children(&self, v: NodeRef) -> Children {
        let n = self.node(v);
        match n.arity {
            Arity::Leaf => Children::None,
            Arity::Unary => Children::One(NodeRef(n.child1)),
            Arity::Binary => Children::Two(NodeRef(n.child1), NodeRef(n.child2)),
        }
    }

    /// Left child of a binary node, or the only child of a unary node.
    #[inline]
    pub fn first_child(&self, v: NodeRef) -> Option<NodeRef> {
        match self.node(v).child1 {
            NONE => None,
            c => Some(NodeRef(c)),
        }
    }

    /// Right child of a binary node, or the only child of a unary node.
    #[inline]
    pub fn last_child(&self, v: NodeRef) -> Option<NodeRef> {
        let n = self.node(v);
        match n.arity {
            Arity::Leaf => None,
            Arity::Unary => Some(NodeRef(n.child1)),
            Arity::Binary => Some(NodeRef(n.child2)),
        }
    }

    /// Leaf reached from `v` by always descending to the first child.
    pub fn leftmost_leaf(&self, mut v: NodeRef) -> NodeRef {
        while let Some(c) = self.first_child(v) {
            v = c;
        }
        v
    }

    /// Leaf reached from `v` by always descending to the last child.
    pub fn rightmost_leaf(&self, mut v: NodeRef) -> NodeRef {
        while let Some(c) = self.last_child(v) {
            v = c;
        }
        v
    }

    /// Number of edges from `v` up to the root.
    pub fn depth(&self, mut v: NodeRef) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent(v) {
            v = p;
            d += 1;
        }
        d
    }

    fn alloc(&mut self, node: Node) -> u32 {
        self.counts[node.arity as usize] += 1;
        match self.free.pop() {
            Some(i) => {
                self.nodes[i as usize] = node;
                i
            }
            None => {
                assert!(self.nodes.len() < MAX_NODES, "tree arena is full");
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        }
    }

    fn release(&mut self, v: u32) {
        let n = &mut self.nodes[v as usize];
        self.counts[n.arity as usize] -= 1;
        n.live = false;
        n.parent = NONE;
        n.child1 = NONE;
        n.child2 = NONE;
        self.free.push(v);
    }

    fn set_arity(&mut self, v: u32, arity: Arity) {
        let n = &mut self.nodes[v as usize];
        self.counts[n.arity as usize] -= 1;
        self.counts[arity as usize] += 1;
        n.arity = arity;
    }

    /// Makes `new` occupy the position `old` held under `old`'s parent.
    fn take_position(&mut self, old: u32, new: u32) {
        let p = self.nodes[old as usize].parent;
        self.nodes[new as usize].parent = p;
        if p == NONE {
            self.root = new;
        } else {
            let parent = &mut self.nodes[p as usize];
            if parent.child1 == old {
                parent.child1 = new;
            } else {
                parent.child2 = new;
            }
        }
    }

    /// Inserts a unary node in `v`'s position with `v` as its only child.
    pub fn insert_unary_above(&mut self, v: NodeRef) -> NodeRef {
        debug_assert!(self.is_live(v));
        let u = self.alloc(Node {
            parent: NONE,
            child1: v.0,
            child2: NONE,
            arity: Arity::Unary,
            live: true,
        });
        self.take_position(v.0, u);
        self.nodes[v.index()].parent = u;
        NodeRef(u)
    }

    /// Inserts a binary node `b` in `v`'s position, with a fresh leaf on
    /// `leaf_side` and `v` on the other side. Returns `(b, leaf)`.
    pub fn insert_binary_above(&mut self, v: NodeRef, leaf_side: Side) -> (NodeRef, NodeRef) {
        debug_assert!(self.is_live(v));
        let b = self.alloc(Node {
            parent: NONE,
            child1: NONE,
            child2: NONE,
            arity: Arity::Binary,
            live: true,
        });
        let leaf = self.alloc(Node::leaf(b));
        self.take_position(v.0, b);
        self.nodes[v.index()].parent = b;
        let node = &mut self.nodes[b as usize];
        match leaf_side {
            Side::Left => {
                node.child1 = leaf;
                node.child2 = v.0;
            }
            Side::Right => {
                node.child1 = v.0;
                node.child2 = leaf;
            }
        }
        (NodeRef(b), NodeRef(leaf))
    }

    /// Removes unary node `u`; its child takes `u`'s position and is returned.
    pub fn delete_unary(&mut self, u: NodeRef) -> Result<NodeRef> {
        self.check_live(u)?;
        if self.arity(u) != Arity::Unary {
            return Err(Error::NotUnary(u));
        }
        let child = self.node(u).child1;
        self.take_position(u.0, child);
        self.release(u.0);
        Ok(NodeRef(child))
    }

    /// Removes leaf `leaf` and its binary parent; the sibling takes the
    /// parent's position and is returned.
    pub fn delete_binary_leaf(&mut self, leaf: NodeRef) -> Result<NodeRef> {
        self.check_live(leaf)?;
        if self.arity(leaf) != Arity::Leaf {
            return Err(Error::NotLeaf(leaf));
        }
        let b = self.parent(leaf).ok_or(Error::IsRoot(leaf))?;
        let bn = *self.node(b);
        if bn.arity != Arity::Binary {
            return Err(Error::ParentNotBinary(leaf));
        }
        let sibling = if bn.child1 == leaf.0 {
            bn.child2
        } else {
            bn.child1
        };
        self.take_position(b.0, sibling);
        self.release(leaf.0);
        self.release(b.0);
        Ok(NodeRef(sibling))
    }

    /// Turns unary node `u` into a binary node whose right child is a fresh
    /// leaf; the former only child becomes the left child. Returns the leaf.
    pub fn grow_unary_to_binary(&mut self, u: NodeRef) -> Result<NodeRef> {
        self.check_live(u)?;
        if self.arity(u) != Arity::Unary {
            return Err(Error::NotUnary(u));
        }
        let leaf = self.alloc(Node::leaf(u.0));
        self.set_arity(u.0, Arity::Binary);
        self.nodes[u.index()].child2 = leaf;
        Ok(NodeRef(leaf))
    }

    /// Inverse of [`grow_unary_to_binary`](Self::grow_unary_to_binary):
    /// removes the right leaf `leaf` and makes its parent unary. Returns the parent.
    pub fn shrink_binary_to_unary(&mut self, leaf: NodeRef) -> Result<NodeRef> {
        self.check_live(leaf)?;
        if self.arity(leaf) != Arity::Leaf {
            return Err(Error::NotLeaf(leaf));
        }
        let b = self.parent(leaf).ok_or(Error::IsRoot(leaf))?;
        if self.arity(b) != Arity::Binary {
            return Err(Error::ParentNotBinary(leaf));
        }
        if self.child_kind(leaf) != ChildKind::RightChild {
            return Err(Error::Invariant(format!(
                "leaf {leaf} is not the right child of {b}"
            )));
        }
        self.release(leaf.0);
        self.set_arity(b.0, Arity::Unary);
        self.nodes[b.index()].child2 = NONE;
        Ok(b)
    }

    /// Live nodes in preorder.
    pub fn preorder(&self) -> Vec<NodeRef> {
        let mut out = Vec::with_capacity(self.size());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(NodeRef(v));
            let n = &self.nodes[v as usize];
            if n.child2 != NONE {
                stack.push(n.child2);
            }
            if n.child1 != NONE {
                stack.push(n.child1);
            }
        }
        out
    }

    /// Preorder position of every slot; dead slots map to `None`.
    pub fn preorder_positions(&self) -> Vec<Option<usize>> {
        let mut pos = vec![None; self.nodes.len()];
        for (i, v) in self.preorder().into_iter().enumerate() {
            pos[v.index()] = Some(i);
        }
        pos
    }

    /// Preorder word over `{B, U, L}`.
    pub fn to_word(&self) -> String {
        self.preorder()
            .into_iter()
            .map(|v| self.arity(v).letter())
            .collect()
    }

    /// Parses a preorder word. Node `i` of the result is the `i`-th letter.
    pub fn from_word(word: &str) -> Result<Self> {
        let bytes = word.as_bytes();
        if bytes.is_empty() {
            return Err(Error::MalformedWord {
                position: 0,
                reason: "empty word".into(),
            });
        }
        if bytes.len() > MAX_NODES {
            return Err(Error::SizeCapExceeded {
                requested: bytes.len(),
                limit: MAX_NODES,
            });
        }
        let mut nodes: Vec<Node> = Vec::with_capacity(bytes.len());
        let mut counts = [0usize; 3];
        // nodes still waiting for children
        let mut open: Vec<u32> = Vec::new();
        for (i, &c) in bytes.iter().enumerate() {
            let arity = match c {
                b'L' => Arity::Leaf,
                b'U' => Arity::Unary,
                b'B' => Arity::Binary,
                _ => {
                    return Err(Error::MalformedWord {
                        position: i,
                        reason: format!("unexpected character {:?}", c as char),
                    })
                }
            };
            if i > 0 && open.is_empty() {
                return Err(Error::MalformedWord {
                    position: i,
                    reason: "trailing letters after a complete tree".into(),
                });
            }
            let idx = i as u32;
            let parent = match open.last() {
                None => NONE,
                Some(&p) => {
                    let pn = &mut nodes[p as usize];
                    if pn.child1 == NONE {
                        pn.child1 = idx;
                        if pn.arity == Arity::Unary {
                            open.pop();
                        }
                    } else {
                        pn.child2 = idx;
                        open.pop();
                    }
                    p
                }
            };
            nodes.push(Node {
                parent,
                child1: NONE,
                child2: NONE,
                arity,
                live: true,
            });
            counts[arity as usize] += 1;
            if arity != Arity::Leaf {
                open.push(idx);
            }
        }
        if !open.is_empty() {
            return Err(Error::MalformedWord {
                position: bytes.len(),
                reason: format!("word ends with {} unfilled node(s)", open.len()),
            });
        }
        Ok(TreeArena {
            nodes,
            root: 0,
            free: Vec::new(),
            counts,
        })
    }

    /// Copy with dead slots removed and nodes renumbered in preorder.
    pub fn compacted(&self) -> Self {
        Self::from_word(&self.to_word()).expect("a live tree always serializes to a valid word")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeJson {
            size: self.size(),
            word: self.to_word(),
        })
        .expect("plain struct serializes")
    }

    /// Graphviz digraph; nodes are named `n<preorder index>` and each parent
    /// lists its left child edge before its right child edge.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let order = self.preorder();
        let pos = self.preorder_positions();
        let mut out = String::from("digraph tree {\n");
        for (i, &v) in order.iter().enumerate() {
            writeln!(out, "  n{i} [label=\"{}\"];", self.arity(v).letter()).unwrap();
        }
        for (i, &v) in order.iter().enumerate() {
            let kids = match self.children(v) {
                Children::None => vec![],
                Children::One(c) => vec![c],
                Children::Two(l, r) => vec![l, r],
            };
            for c in kids {
                writeln!(out, "  n{i} -> n{};", pos[c.index()].unwrap()).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }

    /// Full audit of links, arities and node counts.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let root = self.root;
        if !self.is_live(NodeRef(root)) || self.nodes[root as usize].parent != NONE {
            return fail(format!("root {root} is dead or has a parent"));
        }
        let mut live = 0;
        let mut counts = [0usize; 3];
        for (i, n) in self.nodes.iter().enumerate() {
            if !n.live {
                continue;
            }
            live += 1;
            counts[n.arity as usize] += 1;
            let i = i as u32;
            if n.parent == NONE && i != root {
                return fail(format!("node {i} has no parent but is not the root"));
            }
            if n.parent != NONE {
                let p = &self.nodes[n.parent as usize];
                if !p.live || (p.child1 != i && p.child2 != i) {
                    return fail(format!(
                        "node {i} is not a child of its parent {}",
                        n.parent
                    ));
                }
            }
            let expected = n.arity.children();
            let have = (n.child1 != NONE) as usize + (n.child2 != NONE) as usize;
            if have != expected || (expected == 1 && n.child1 == NONE) {
                return fail(format!(
                    "node {i} has {have} children for arity {:?}",
                    n.arity
                ));
            }
            for c in [n.child1, n.child2] {
                if c != NONE {
                    let cn = self.nodes.get(c as usize);
                    if !cn.is_some_and(|cn| cn.live && cn.parent == i) {
                        return fail(format!("child {c} of node {i} does not point back"));
                    }
                }
            }
        }
        if counts != self.counts {
            return fail(format!(
                "cached counts {:?} differ from {:?}",
                self.counts, counts
            ));
        }
        if self.preorder().len() != live {
            return fail("some live nodes are unreachable from the root".into());
        }
        let [leaves, unary, binary] = counts;
        if leaves != binary + 1 || live != 2 * binary + unary + 1 {
            return fail(format!(
                "counts leaves={leaves} unary={unary} binary={binary} are inconsistent"
            ));
        }
        Ok(())
    }
}

impl PartialEq for TreeArena {
    /// Trees are equal when they have the same shape.
    fn eq(&self, other: &Self) -> bool {
        self.size() == other.size() && self.to_word() == other.to_word()
    }
}

impl Eq for TreeArena {}

impl fmt::Display for TreeArena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word())
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TreeJson {
    pub size: usize,
    pub word: String,
}
