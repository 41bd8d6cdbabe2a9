//! Exact path audits.
//!
//! [`ChoiceWalker`] is a [`RandomSource`] that replays a fixed script of
//! choices. Every draw (bit, uniform, trit, Bernoulli, categorical) is a
//! single choice whose branch weights are exact rationals, so one run of a
//! sampler under a script follows one path of its decision tree and the
//! walker knows that path's exact probability. [`explore`] walks the whole
//! decision tree depth first, extending a script whenever a run asks for
//! more choices than it holds.

use crate::bitsource::{DyadicDistribution, DyadicProbability, RandomSource};
use crate::catalan::{sample_binary_efficient_pointed, try_sample_binary_pointed};
use crate::error::{Error, Result};
use crate::motzkin::try_sample_motzkin_pointed;
use crate::pointing::pointed_key;
use crate::sample::Attempt;
use crate::weighted::{try_sample_weighted_pointed, BranchPlan};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Largest binary size (internal nodes) accepted by [`exhaustive_path_audit`].
pub const AUDIT_CAP_BINARY: usize = 5;
/// Largest unary-binary size (nodes) accepted by [`exhaustive_path_audit`].
pub const AUDIT_CAP_UNARY_BINARY: usize = 6;

#[derive(Clone, Debug)]
enum Branches {
    Uniform(u64),
    Weighted(Vec<BigRational>),
}

impl Branches {
    fn arity(&self) -> usize {
        match self {
            Branches::Uniform(m) => *m as usize,
            Branches::Weighted(w) => w.len(),
        }
    }

    fn weight(&self, i: usize) -> BigRational {
        match self {
            Branches::Uniform(m) => BigRational::new(BigInt::one(), BigInt::from(*m)),
            Branches::Weighted(w) => w[i].clone(),
        }
    }
}

/// Scripted random source with exact path probabilities.
#[derive(Clone, Debug)]
pub struct ChoiceWalker {
    script: Vec<usize>,
    cursor: usize,
    probability: BigRational,
    overflow: Option<Branches>,
}

impl ChoiceWalker {
    pub fn replay(script: Vec<usize>) -> Self {
        ChoiceWalker {
            script,
            cursor: 0,
            probability: BigRational::one(),
            overflow: None,
        }
    }

    /// Probability of the choices made so far.
    pub fn probability(&self) -> &BigRational {
        &self.probability
    }

    /// Choices consumed so far.
    pub fn choices(&self) -> usize {
        self.cursor
    }

    /// True if the run asked for a choice beyond the end of the script.
    pub fn overflowed(&self) -> bool {
        self.overflow.is_some()
    }

    fn choose(&mut self, branches: Branches) -> usize {
        if self.overflow.is_some() {
            return 0;
        }
        match self.script.get(self.cursor) {
            Some(&c) => {
                self.cursor += 1;
                self.probability *= branches.weight(c);
                c
            }
            None => {
                self.overflow = Some(branches);
                0
            }
        }
    }
}

fn dyadic(num: u128, exponent: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(BigUint::one() << exponent))
}

impl RandomSource for ChoiceWalker {
    fn next_bit(&mut self) -> bool {
        self.choose(Branches::Uniform(2)) == 1
    }

    fn bits_consumed(&self) -> u64 {
        0
    }

    fn uniform_pow2(&mut self, k: u32) -> u64 {
        if k == 0 {
            return 0;
        }
        self.choose(Branches::Uniform(1 << k)) as u64
    }

    fn uniform(&mut self, m: u64) -> u64 {
        if m == 1 {
            return 0;
        }
        self.choose(Branches::Uniform(m)) as u64
    }

    fn trit(&mut self) -> u8 {
        self.choose(Branches::Uniform(3)) as u8
    }

    fn bernoulli(&mut self, p: DyadicProbability) -> bool {
        let yes = dyadic(p.numerator(), p.exponent());
        let no = BigRational::one() - &yes;
        self.choose(Branches::Weighted(vec![no, yes])) == 1
    }

    fn categorical(&mut self, dist: &DyadicDistribution) -> usize {
        let e = dist.exponent();
        let w = dist.numerators().iter().map(|&m| dyadic(m, e)).collect();
        self.choose(Branches::Weighted(w))
    }
}

/// Runs `run` once along every path of its decision tree and returns each
/// complete path's probability with its result. Zero-weight branches are
/// skipped.
pub fn explore<T, F>(mut run: F) -> Vec<(BigRational, T)>
where
    F: FnMut(&mut ChoiceWalker) -> T,
{
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    let mut out = Vec::new();
    while let Some(script) = stack.pop() {
        let mut w = ChoiceWalker::replay(script.clone());
        let result = run(&mut w);
        match w.overflow.take() {
            None => out.push((w.probability, result)),
            Some(branches) => {
                for c in (0..branches.arity()).rev() {
                    if !branches.weight(c).is_zero() {
                        let mut next = script.clone();
                        next.push(c);
                        stack.push(next);
                    }
                }
            }
        }
    }
    out
}

/// Exact outcome law of one try of a sampler.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PathAudit {
    /// Probability of each color-pointed tree of the target size, keyed by
    /// [`pointed_key`].
    pub reached: BTreeMap<String, BigRational>,
    /// Total probability of ending one node above the target size.
    pub overshoot: BigRational,
    /// Total probability of an explicit failure.
    pub failed: BigRational,
    /// Number of complete paths.
    pub paths: usize,
}

impl PathAudit {
    pub fn total(&self) -> BigRational {
        self.reached
            .values()
            .fold(&self.overshoot + &self.failed, |a, p| a + p)
    }

    pub fn reached_mass(&self) -> BigRational {
        self.reached
            .values()
            .fold(BigRational::zero(), |a, p| a + p)
    }

    /// Colored trees whose probability differs from `expected(key)`.
    pub fn mismatches<F>(&self, mut expected: F) -> Vec<String>
    where
        F: FnMut(&str) -> BigRational,
    {
        let mut out = Vec::new();
        for (k, p) in &self.reached {
            let want = expected(k);
            if want != *p {
                out.push(format!("{k}: {p} != {want}"));
            }
        }
        out
    }
}

/// Which sampler [`exhaustive_path_audit`] walks.
#[derive(Clone, Debug)]
pub enum AuditFamily {
    /// One binary try, red start or fair-bit start.
    Binary { faithful: bool },
    /// The never-failing binary sampler after `n` steps.
    BinaryEfficient,
    /// One unary-binary try.
    Motzkin,
    /// One weighted try with the given plan.
    Weighted(BranchPlan),
}

/// Audits any single-try sampler whose successful trees should have
/// `target_size` nodes.
pub fn audit_runs<F>(target_size: usize, mut run: F) -> Result<PathAudit>
where
    F: FnMut(&mut ChoiceWalker) -> Result<Attempt>,
{
    let mut audit = PathAudit::default();
    for (p, attempt) in explore(&mut run) {
        audit.paths += 1;
        let attempt = attempt?;
        match attempt.outcome {
            None => audit.failed += p,
            Some(pt) if pt.tree.size() == target_size => {
                pt.tree.validate()?;
                *audit
                    .reached
                    .entry(pointed_key(&pt.tree, pt.point))
                    .or_insert_with(BigRational::zero) += p;
            }
            Some(pt) if pt.tree.size() == target_size + 1 => audit.overshoot += p,
            Some(pt) => {
                return Err(Error::Invariant(format!(
                    "try produced {} nodes, target {target_size}",
                    pt.tree.size()
                )))
            }
        }
    }
    Ok(audit)
}

/// Walks every path of one try of the chosen sampler at size `n`.
///
/// `n` counts internal nodes for the binary families and all nodes for the
/// unary-binary ones.
pub fn exhaustive_path_audit(family: &AuditFamily, n: usize) -> Result<PathAudit> {
    let cap = match family {
        AuditFamily::Binary { .. } | AuditFamily::BinaryEfficient => AUDIT_CAP_BINARY,
        AuditFamily::Motzkin | AuditFamily::Weighted(_) => AUDIT_CAP_UNARY_BINARY,
    };
    if n > cap {
        return Err(Error::SizeCapExceeded {
            requested: n,
            limit: cap,
        });
    }
    match family {
        AuditFamily::Binary { faithful } => {
            audit_runs(2 * n + 1, |w| try_sample_binary_pointed(n, w, *faithful))
        }
        AuditFamily::BinaryEfficient => audit_runs(2 * n + 1, |w| {
            let (pt, report) = sample_binary_efficient_pointed(n, w)?;
            Ok(Attempt {
                outcome: Some(pt),
                travel: report.travel as usize,
            })
        }),
        AuditFamily::Motzkin => audit_runs(n, |w| try_sample_motzkin_pointed(n, w)),
        AuditFamily::Weighted(plan) => audit_runs(n, |w| try_sample_weighted_pointed(n, plan, w)),
    }
}

/// Number of unary nodes in the tree part of a [`pointed_key`].
pub fn unary_count(key: &str) -> usize {
    key.split(':')
        .next()
        .unwrap_or("")
        .bytes()
        .filter(|&b| b == b'U')
        .count()
}
