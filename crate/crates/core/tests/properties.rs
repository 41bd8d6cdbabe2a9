use proptest::prelude::*;
use treegraft::catalan::try_sample_binary_pointed;
use treegraft::motzkin::try_sample_motzkin_pointed;
use treegraft::oracle::enumerate::{enumerate_binary, enumerate_motzkin};
use treegraft::pointing::{color_points, pointed_key, repoint_traced};
use treegraft::weighted::{make_branch_plan, try_sample_weighted_pointed};
use treegraft::{
    graft_f, graft_f_inverse, graft_g, graft_g_inverse, graft_h, graft_h_inverse, repoint,
    repoint_inverse, Anchor, Arity, ColorPoint, FCase, GCase, HCase, MeteredBitSource, NodeRef,
    PlainPoint, RandomSource, Sampler, Side, TreeArena, UnaryWeight,
};

#[test]
fn words_round_trip_over_enumerations() {
    for n in 0..=5 {
        for w in enumerate_binary(n).unwrap() {
            let t = TreeArena::from_word(&w).unwrap();
            assert_eq!(t.to_word(), w);
            assert_eq!(TreeArena::from_word(&t.to_word()).unwrap(), t);
        }
    }
    for n in 1..=11 {
        for w in enumerate_motzkin(n).unwrap() {
            let t = TreeArena::from_word(&w).unwrap();
            assert_eq!(t.to_word(), w);
            assert_eq!(t.size(), n);
        }
    }
}

/// Every string over {B, U, L} of length <= 9 parses iff it is a tree word.
#[test]
fn from_word_accepts_exactly_the_tree_words() {
    let mut valid = std::collections::HashSet::new();
    for n in 1..=9 {
        valid.extend(enumerate_motzkin(n).unwrap());
    }
    let letters = ['B', 'U', 'L'];
    let mut accepted = 0;
    for len in 0..=9u32 {
        for code in 0..3usize.pow(len) {
            let mut c = code;
            let w: String = (0..len)
                .map(|_| {
                    let l = letters[c % 3];
                    c /= 3;
                    l
                })
                .collect();
            let parsed = TreeArena::from_word(&w);
            assert_eq!(parsed.is_ok(), valid.contains(&w), "{w}");
            accepted += parsed.is_ok() as usize;
        }
    }
    assert_eq!(accepted, valid.len());
}

fn sampled_tree(kind: u8, size: usize, seed: u64) -> TreeArena {
    let sampler = match kind % 3 {
        0 => Sampler::BinaryEfficient,
        1 => Sampler::BinaryRemyClassic,
        _ => Sampler::Motzkin,
    };
    let size = if kind % 3 == 2 { size.max(1) } else { size };
    sampler.sample_indexed(size, seed, 0).unwrap().0
}

#[derive(Clone, Debug)]
enum Op {
    UnaryAbove(usize),
    BinaryAbove(usize, bool),
    DeleteUnary(usize),
    DeleteBinaryLeaf(usize),
    Grow(usize),
    Shrink(usize),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        any::<usize>().prop_map(Op::UnaryAbove),
        (any::<usize>(), any::<bool>()).prop_map(|(i, b)| Op::BinaryAbove(i, b)),
        any::<usize>().prop_map(Op::DeleteUnary),
        any::<usize>().prop_map(Op::DeleteBinaryLeaf),
        any::<usize>().prop_map(Op::Grow),
        any::<usize>().prop_map(Op::Shrink),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn arbitrary_strings_never_panic(s in "[BULX]{0,16}") {
        if let Ok(t) = TreeArena::from_word(&s) {
            prop_assert_eq!(t.to_word(), s);
            t.validate().unwrap();
        }
    }

    #[test]
    fn sampled_words_round_trip(kind in 0u8..3, size in 0usize..200, seed in any::<u64>()) {
        let t = sampled_tree(kind, size, seed);
        t.validate().unwrap();
        let back = TreeArena::from_word(&t.to_word()).unwrap();
        prop_assert_eq!(back.to_word(), t.to_word());
        let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        prop_assert_eq!(json["size"].as_u64().unwrap() as usize, t.size());
        prop_assert_eq!(json["word"].as_str().unwrap(), t.to_word());
        let dot = t.to_dot();
        prop_assert_eq!(dot.matches(" -> ").count(), t.size() - 1);
    }

    /// Public mutations keep the arena consistent; a rejected mutation
    /// leaves the tree untouched.
    #[test]
    fn mutations_keep_tree_valid(ops in prop::collection::vec(op(), 1..60)) {
        let mut t = TreeArena::new_leaf_tree();
        for op in ops {
            let nodes = t.preorder();
            let pick = |i: usize| nodes[i % nodes.len()];
            let before = t.to_word();
            let ok = match op {
                Op::UnaryAbove(i) => { t.insert_unary_above(pick(i)); true }
                Op::BinaryAbove(i, right) => {
                    let side = if right { Side::Right } else { Side::Left };
                    let (b, leaf) = t.insert_binary_above(pick(i), side);
                    prop_assert_eq!(t.arity(b), Arity::Binary);
                    prop_assert_eq!(t.arity(leaf), Arity::Leaf);
                    true
                }
                Op::DeleteUnary(i) => t.delete_unary(pick(i)).is_ok(),
                Op::DeleteBinaryLeaf(i) => t.delete_binary_leaf(pick(i)).is_ok(),
                Op::Grow(i) => t.grow_unary_to_binary(pick(i)).is_ok(),
                Op::Shrink(i) => t.shrink_binary_to_unary(pick(i)).is_ok(),
            };
            t.validate().unwrap();
            if !ok {
                prop_assert_eq!(t.to_word(), before);
            }
            prop_assert_eq!(t.size(), t.leaves() + t.unary_nodes() + t.binary_nodes());
        }
    }

    /// Repointing bijection on trees larger than the exhaustive batteries reach.
    #[test]
    fn repoint_bijection_on_large_trees(kind in 0u8..3, size in 1usize..120, seed in any::<u64>()) {
        let t = sampled_tree(kind, size, seed);
        let mut bottoms = 0;
        for cp in color_points(&t) {
            let (p, travel) = repoint_traced(&t, cp).unwrap();
            prop_assert!(travel <= t.depth(cp.node()));
            bottoms += (p == PlainPoint::Bottom) as usize;
            prop_assert_eq!(repoint_inverse(&t, p).unwrap(), cp);
        }
        prop_assert_eq!(bottoms, 1);
        for v in t.preorder() {
            let p = PlainPoint::Node(v);
            prop_assert_eq!(repoint(&t, repoint_inverse(&t, p).unwrap()).unwrap(), p);
        }
    }

    #[test]
    fn graft_f_inverse_on_large_trees(size in 1usize..150, seed in any::<u64>(), pick in any::<usize>(), c in 0usize..4) {
        let t = sampled_tree(0, size, seed);
        let nodes = t.preorder();
        let v = nodes[pick % nodes.len()];
        let mut u = t.clone();
        let cp = graft_f(&mut u, v, FCase::ALL[c]);
        u.validate().unwrap();
        let key = pointed_key(&u, cp);
        let (case, w) = graft_f_inverse(&mut u, cp).unwrap();
        prop_assert_eq!(case, FCase::ALL[c]);
        prop_assert_eq!(&u, &t);
        prop_assert_eq!(t.preorder_positions()[v.index()], u.preorder_positions()[w.index()]);
        let cp2 = graft_f(&mut u, w, case);
        prop_assert_eq!(pointed_key(&u, cp2), key);
    }

    #[test]
    fn graft_g_and_h_inverse_on_large_trees(size in 1usize..150, seed in any::<u64>(), pick in any::<usize>()) {
        let t = sampled_tree(2, size, seed);
        for cp in color_points(&t) {
            if t.size() < 2 { break; }
            let key = pointed_key(&t, cp);
            let mut u = t.clone();
            let (case, a) = graft_g_inverse(&mut u, cp).unwrap();
            u.validate().unwrap();
            let back = graft_g(&mut u, a, case).unwrap();
            prop_assert_eq!(pointed_key(&u, back), key.clone());
            let mut u = t.clone();
            let (case, a) = graft_h_inverse(&mut u, cp).unwrap();
            u.validate().unwrap();
            let back = graft_h(&mut u, a, case).unwrap();
            prop_assert_eq!(pointed_key(&u, back), key);
        }
        let nodes = t.preorder();
        let v = nodes[pick % nodes.len()];
        for case in [GCase::G2, GCase::G3, GCase::G4, GCase::G5] {
            let mut u = t.clone();
            let cp = graft_g(&mut u, Anchor::Plain(v), case).unwrap();
            prop_assert_eq!(graft_g_inverse(&mut u, cp).unwrap().0, case);
            prop_assert_eq!(&u, &t);
        }
        for case in [HCase::H3, HCase::H4, HCase::H5, HCase::H6, HCase::H7] {
            let mut u = t.clone();
            let cp = graft_h(&mut u, Anchor::Plain(v), case).unwrap();
            prop_assert_eq!(graft_h_inverse(&mut u, cp).unwrap().0, case);
            prop_assert_eq!(&u, &t);
        }
    }

    /// Every sampler try ends in a valid tree, with travel bounded by size.
    #[test]
    fn tries_are_valid_and_travel_is_bounded(n in 1usize..60, seed in any::<u64>()) {
        let mut src = MeteredBitSource::new(seed);
        let a = try_sample_binary_pointed(n, &mut src, true).unwrap();
        if let Some(p) = &a.outcome {
            p.tree.validate().unwrap();
            p.point.check(&p.tree).unwrap();
            prop_assert!(a.travel <= n);
        }
        let a = try_sample_motzkin_pointed(n, &mut src).unwrap();
        if let Some(p) = &a.outcome {
            p.tree.validate().unwrap();
            p.point.check(&p.tree).unwrap();
            prop_assert!(a.travel <= p.tree.size());
        }
        let plan = make_branch_plan(UnaryWeight::new(3, 1).unwrap(), 16).unwrap();
        let a = try_sample_weighted_pointed(n, &plan, &mut src).unwrap();
        if let Some(p) = &a.outcome {
            p.tree.validate().unwrap();
            prop_assert!(matches!(p.point, ColorPoint::Red(_) | ColorPoint::Blue(_) | ColorPoint::Green(_)));
            prop_assert!(a.travel <= p.tree.size());
        }
    }

    /// Replaying a seed reproduces trees and bit counts exactly.
    #[test]
    fn replay_is_deterministic(kind in 0u8..3, size in 1usize..80, seed in any::<u64>()) {
        let a = sampled_tree(kind, size, seed);
        let b = sampled_tree(kind, size, seed);
        prop_assert_eq!(a.to_word(), b.to_word());
        let mut s1 = MeteredBitSource::new(seed);
        let mut s2 = MeteredBitSource::new(seed);
        let r1 = Sampler::Motzkin.sample(size, &mut s1).unwrap().1;
        let r2 = Sampler::Motzkin.sample(size, &mut s2).unwrap().1;
        prop_assert_eq!(r1.bits_consumed, r2.bits_consumed);
        prop_assert_eq!(s1.bits_consumed(), s2.bits_consumed());
    }
}

#[test]
fn node_refs_out_of_range_are_rejected() {
    let mut t = TreeArena::from_word("BLL").unwrap();
    assert!(t.delete_unary(NodeRef::new(99)).is_err());
    assert!(repoint(&t, ColorPoint::Red(NodeRef::new(99))).is_err());
    t.validate().unwrap();
}
