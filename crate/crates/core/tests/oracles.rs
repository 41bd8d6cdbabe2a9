//! Exact-law checks through the choice walker, including a mutation that
//! the audit must catch.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use treegraft::oracle::audit::{audit_runs, exhaustive_path_audit, AuditFamily};
use treegraft::{
    graft_f, make_branch_plan, repoint, Attempt, ColorPoint, FCase, MeteredBitSource, NodeRef,
    PlainPoint, PointedTree, RandomSource, Sampler, TreeArena, UnaryWeight,
};

/// One binary try with the two-bit case table passed in.
fn try_with_table<R: RandomSource>(n: usize, src: &mut R, table: [FCase; 4]) -> Attempt {
    let mut t = TreeArena::new_leaf_tree();
    let mut cp = if src.next_bit() {
        ColorPoint::Red(NodeRef::new(0))
    } else {
        ColorPoint::Blue(NodeRef::new(0))
    };
    for _ in 0..n {
        let v = match repoint(&t, cp).unwrap() {
            PlainPoint::Node(v) => v,
            PlainPoint::Bottom => {
                return Attempt {
                    outcome: None,
                    travel: 0,
                }
            }
        };
        cp = graft_f(&mut t, v, table[src.uniform_pow2(2) as usize]);
    }
    Attempt {
        outcome: Some(PointedTree { tree: t, point: cp }),
        travel: 0,
    }
}

fn uniform_at(audit: &treegraft::oracle::PathAudit, p: &BigRational) -> bool {
    audit.reached.values().all(|q| q == p)
}

#[test]
fn reimplemented_try_matches_library_audit() {
    for n in 0..=3 {
        let ours = audit_runs(2 * n + 1, |w| Ok(try_with_table(n, w, FCase::ALL))).unwrap();
        let lib = exhaustive_path_audit(&AuditFamily::Binary { faithful: true }, n).unwrap();
        assert_eq!(ours.reached, lib.reached);
        assert_eq!(ours.failed, lib.failed);
    }
}

#[test]
fn flipped_case_table_is_caught() {
    // 01 maps to the same case as 00: right leaf, red
    let broken = [FCase::F1, FCase::F1, FCase::F3, FCase::F4];
    let n = 2;
    let want = BigRational::new(BigInt::one(), BigInt::from(2 * 16));
    let audit = audit_runs(2 * n + 1, |w| Ok(try_with_table(n, w, broken))).unwrap();
    assert!(!uniform_at(&audit, &want));
    assert!(audit.mismatches(|_| want.clone()).len() > 1);
    // a permuted table is still a bijection on cases and stays uniform
    let permuted = [FCase::F4, FCase::F3, FCase::F2, FCase::F1];
    let audit = audit_runs(2 * n + 1, |w| Ok(try_with_table(n, w, permuted))).unwrap();
    assert!(uniform_at(&audit, &want));
    assert_eq!(audit.reached.len(), 12);
}

#[test]
fn unit_weight_matches_unweighted_support() {
    let plan = make_branch_plan(UnaryWeight::ONE, 16).unwrap();
    for n in 1..=5 {
        let w = exhaustive_path_audit(&AuditFamily::Weighted(plan.clone()), n).unwrap();
        let m = exhaustive_path_audit(&AuditFamily::Motzkin, n).unwrap();
        assert_eq!(
            w.reached.keys().collect::<Vec<_>>(),
            m.reached.keys().collect::<Vec<_>>()
        );
        let first = w.reached.values().next().unwrap();
        assert!(uniform_at(&w, first), "n={n}");
    }
}

/// Mean fallback bits of the never-failing sampler at `n` internal nodes.
fn predicted_excess(n: usize) -> f64 {
    (1..n)
        .map(|i| {
            let m = (2 * i + 1) as f64;
            let k = m.log2().ceil();
            k * 2f64.powf(k) / m / (2 * i + 2) as f64
        })
        .sum()
}

#[test]
fn excess_bits_match_rejection_draw_prediction() {
    let n = 300;
    let samples = 40_000u64;
    let excess: Vec<f64> = treegraft::batch::map_indexed(samples, |i| {
        let (_, r) = Sampler::BinaryEfficient.sample_indexed(n, 77, i).unwrap();
        r.bits_consumed as f64 - 2.0 * n as f64
    });
    let mean = excess.iter().sum::<f64>() / samples as f64;
    let var = excess.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    let se = (var / samples as f64).sqrt();
    let want = predicted_excess(n);
    assert!(
        (mean - want).abs() < 5.0 * se,
        "mean {mean}, predicted {want}, se {se}"
    );
}

#[test]
fn no_fallback_means_exactly_two_bits_per_step() {
    for i in 0..200 {
        let mut src = MeteredBitSource::for_sample(5, i);
        let (_, r) = treegraft::sample_binary_efficient(64, &mut src).unwrap();
        if r.repoint_fallbacks == 0 {
            assert_eq!(r.bits_consumed, 128);
        } else {
            assert!(r.bits_consumed > 128);
        }
    }
}
