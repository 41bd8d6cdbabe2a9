//! Unary-binary trees weighted by `u^(number of unary nodes)`.
//!
//! Grafting operators (compare the Motzkin table in [`crate::motzkin`]):
//!
//! | case | applies to | effect | new point |
//! |------|-----------|--------|-----------|
//! | H1 | red leaf | unary node above the leaf | red, same leaf |
//! | H2 | blue leaf | unary node above the leaf | blue, same leaf |
//! | H3 | plain node | unary node above it | green, new node |
//! | H4 | plain node | binary node above it, new right leaf | blue |
//! | H5 | plain node | binary node above it, new left leaf | red |
//! | H6 | plain node | binary node above it, new left leaf | blue |
//! | H7 | plain node | binary node above it, new right leaf | red |
//!
//! A green point is never grown by a unary step: a green unary node turned
//! binary would duplicate the trees H7 already builds.
//!
//! Branch probabilities come from a [`BranchPlan`] with step factor `c`:
//! unary-on-leaf `u c`, green creation `u c`, each of H4..H7 `c^2`, and an
//! abort branch taking the remaining mass. Every +1 step therefore weighs
//! `u c` and every +2 step `c^2`, so a color-pointed tree with `n` nodes and
//! `k` unary nodes is reached with probability `u^k c^(n-1) / 2`. All masses
//! are exact dyadic rationals drawn from fair bits.
//!
//! The success probability of a try decays exponentially with the size, so
//! [`WeightedSampler`] refuses sizes above [`DEFAULT_MAX_SIZE`] unless told
//! otherwise.

use crate::arena::{ChildKind, Side, TreeArena, MAX_NODES};
use crate::bitsource::{DyadicDistribution, DyadicProbability, RandomSource};
use crate::catalan::start_point;
use crate::error::{Error, Result};
use crate::pointing::{repoint_unchecked, Anchor, ColorPoint, PlainPoint};
use crate::sample::{Attempt, PointedTree, SampleReport};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub const DEFAULT_PRECISION: u32 = 16;
pub const DEFAULT_MAX_SIZE: usize = 64;
const MAX_EXPONENT: u32 = 32;

/// Weight `numerator / 2^exponent` of a unary node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnaryWeight {
    numerator: u64,
    exponent: u32,
}

impl UnaryWeight {
    pub const ONE: UnaryWeight = UnaryWeight {
        numerator: 1,
        exponent: 0,
    };

    pub fn new(numerator: u64, exponent: u32) -> Result<Self> {
        if exponent > MAX_EXPONENT || numerator >= 1 << MAX_EXPONENT {
            return Err(Error::InvalidWeight(format!(
                "{numerator}/2^{exponent} is out of range"
            )));
        }
        let mut w = UnaryWeight {
            numerator,
            exponent,
        };
        while w.exponent > 0 && w.numerator.is_multiple_of(2) && w.numerator > 0 {
            w.numerator /= 2;
            w.exponent -= 1;
        }
        Ok(w)
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / (self.exponent as f64).exp2()
    }
}

impl fmt::Display for UnaryWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl FromStr for UnaryWeight {
    type Err = Error;

    /// Accepts `a`, `a/2^k` and `a/b` with `b` a power of two.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidWeight(format!("cannot parse {s:?}; expected a/2^k"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            None => (s, None),
            Some((a, b)) => (a.trim(), Some(b.trim())),
        };
        let numerator: u64 = num.parse().map_err(|_| bad())?;
        let exponent = match den {
            None => 0,
            Some(d) => match d.strip_prefix("2^") {
                Some(k) => k.parse().map_err(|_| bad())?,
                None => {
                    let b: u64 = d.parse().map_err(|_| bad())?;
                    if !b.is_power_of_two() {
                        return Err(bad());
                    }
                    b.trailing_zeros()
                }
            },
        };
        UnaryWeight::new(numerator, exponent)
    }
}

/// Branch indices of a plan's distribution.
const UNARY_ON_LEAF: usize = 0;
const GREEN: usize = 1;
const ABORT: usize = 6;

/// Dyadic branch masses for the weighted try sampler.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPlan {
    weight: UnaryWeight,
    step_numerator: u64,
    precision: u32,
    dist: DyadicDistribution,
}

impl BranchPlan {
    pub fn weight(&self) -> UnaryWeight {
        self.weight
    }

    /// Step factor `c` as `(numerator, precision)`, i.e. `numerator / 2^precision`.
    pub fn step(&self) -> (u64, u32) {
        (self.step_numerator, self.precision)
    }

    pub fn step_f64(&self) -> f64 {
        self.step_numerator as f64 / (self.precision as f64).exp2()
    }

    pub fn distribution(&self) -> &DyadicDistribution {
        &self.dist
    }

    pub fn p_unary(&self) -> DyadicProbability {
        self.dist.mass(UNARY_ON_LEAF)
    }

    pub fn p_green(&self) -> DyadicProbability {
        self.dist.mass(GREEN)
    }

    /// Mass of each one of the four binary branches.
    pub fn p_binary(&self) -> DyadicProbability {
        self.dist.mass(2)
    }

    pub fn p_abort(&self) -> DyadicProbability {
        self.dist.mass(ABORT)
    }
}

/// Largest step factor `c = m / 2^precision` with `2 u c + 4 c^2 <= 1`.
pub fn make_branch_plan(u: UnaryWeight, precision: u32) -> Result<BranchPlan> {
    if u.numerator == 0 {
        return Err(Error::InvalidWeight("unary weight must be positive".into()));
    }
    if precision == 0 || precision > MAX_EXPONENT {
        return Err(Error::InvalidWeight(format!(
            "precision {precision} must be in 1..={MAX_EXPONENT}"
        )));
    }
    let (a, k, p) = (u.numerator as u128, u.exponent, precision);
    let e = (k + p).max(2 * p);
    let unary_mass = |m: u128| (a * m) << (e - k - p);
    let binary_mass = |m: u128| (m * m) << (e - 2 * p);
    let fits = |m: u128| 2 * unary_mass(m) + 4 * binary_mass(m) <= 1u128 << e;

    // fits() is monotone in m; binary search the largest feasible numerator
    let (mut lo, mut hi) = (0u128, 1u128 << p);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if lo == 0 {
        return Err(Error::WeightTooLarge(u.to_string()));
    }
    let (um, bm) = (unary_mass(lo), binary_mass(lo));
    let abort = (1u128 << e) - 2 * um - 4 * bm;
    let dist = DyadicDistribution::new(vec![um, um, bm, bm, bm, bm, abort], e)?;
    Ok(BranchPlan {
        weight: u,
        step_numerator: lo as u64,
        precision,
        dist,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HCase {
    H1,
    H2,
    H3,
    H4,
    H5,
    H6,
    H7,
}

impl HCase {
    pub const ALL: [HCase; 7] = [
        HCase::H1,
        HCase::H2,
        HCase::H3,
        HCase::H4,
        HCase::H5,
        HCase::H6,
        HCase::H7,
    ];

    fn binary_leaf(self) -> Option<(Side, bool)> {
        match self {
            HCase::H4 => Some((Side::Right, false)),
            HCase::H5 => Some((Side::Left, true)),
            HCase::H6 => Some((Side::Left, false)),
            HCase::H7 => Some((Side::Right, true)),
            _ => None,
        }
    }
}

/// Applies an H operator. H1/H2 take a red/blue colored leaf; H3..H7 a plain node.
pub fn graft_h(t: &mut TreeArena, anchor: Anchor, case: HCase) -> Result<ColorPoint> {
    let wrong = || Error::WrongAnchor {
        op: match case {
            HCase::H1 => "H1",
            HCase::H2 => "H2",
            _ => "H3..H7",
        },
        anchor: anchor.to_string(),
    };
    match (case, anchor) {
        (HCase::H1, Anchor::Colored(cp @ ColorPoint::Red(leaf)))
        | (HCase::H2, Anchor::Colored(cp @ ColorPoint::Blue(leaf))) => {
            cp.check(t)?;
            t.insert_unary_above(leaf);
            Ok(cp)
        }
        (HCase::H3, Anchor::Plain(v)) => {
            t.check_live(v)?;
            Ok(ColorPoint::Green(t.insert_unary_above(v)))
        }
        (_, Anchor::Plain(v)) => {
            let (side, red) = case.binary_leaf().ok_or_else(wrong)?;
            t.check_live(v)?;
            let (_, leaf) = t.insert_binary_above(v, side);
            Ok(if red {
                ColorPoint::Red(leaf)
            } else {
                ColorPoint::Blue(leaf)
            })
        }
        _ => Err(wrong()),
    }
}

/// Undoes the H operator that produced `cp`.
pub fn graft_h_inverse(t: &mut TreeArena, cp: ColorPoint) -> Result<(HCase, Anchor)> {
    if t.size() < 2 {
        return Err(Error::TreeTooSmall {
            min: 2,
            got: t.size(),
        });
    }
    cp.check(t)?;
    let leaf = match cp {
        ColorPoint::Green(u) => {
            let child = t.delete_unary(u)?;
            return Ok((HCase::H3, Anchor::Plain(child)));
        }
        ColorPoint::Red(l) | ColorPoint::Blue(l) => l,
    };
    let red = matches!(cp, ColorPoint::Red(_));
    let case = match (t.child_kind(leaf), red) {
        (ChildKind::OnlyChild, _) => {
            t.delete_unary(t.parent(leaf).expect("only child has a parent"))?;
            let case = if red { HCase::H1 } else { HCase::H2 };
            return Ok((case, Anchor::Colored(cp)));
        }
        (ChildKind::RightChild, false) => HCase::H4,
        (ChildKind::LeftChild, true) => HCase::H5,
        (ChildKind::LeftChild, false) => HCase::H6,
        (ChildKind::RightChild, true) => HCase::H7,
    };
    let sibling = t.delete_binary_leaf(leaf)?;
    Ok((case, Anchor::Plain(sibling)))
}

/// One weighted try, keeping the final colored point. A successful outcome
/// has `n` or `n + 1` nodes.
pub fn try_sample_weighted_pointed<R: RandomSource + ?Sized>(
    n: usize,
    plan: &BranchPlan,
    src: &mut R,
) -> Result<Attempt> {
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
    let mut t = TreeArena::with_capacity(n + 1);
    let mut cp = start_point(src);
    let mut travel = 0;
    while t.size() < n {
        let branch = src.categorical(plan.distribution());
        let case = match branch {
            ABORT => return Ok(Attempt::fail(travel)),
            UNARY_ON_LEAF => match cp {
                ColorPoint::Red(_) => HCase::H1,
                ColorPoint::Blue(_) => HCase::H2,
                ColorPoint::Green(_) => return Ok(Attempt::fail(travel)),
            },
            GREEN => HCase::H3,
            b => HCase::ALL[b + 1],
        };
        let anchor = match case {
            HCase::H1 | HCase::H2 => Anchor::Colored(cp),
            _ => {
                let (p, d) = repoint_unchecked(&t, cp);
                travel += d;
                match p {
                    PlainPoint::Node(v) => Anchor::Plain(v),
                    PlainPoint::Bottom => return Ok(Attempt::fail(travel)),
                }
            }
        };
        cp = graft_h(&mut t, anchor, case)?;
    }
    Ok(Attempt {
        outcome: Some(PointedTree { tree: t, point: cp }),
        travel,
    })
}

pub fn try_sample_weighted<R: RandomSource + ?Sized>(
    n: usize,
    plan: &BranchPlan,
    src: &mut R,
) -> Result<Option<TreeArena>> {
    Ok(try_sample_weighted_pointed(n, plan, src)?
        .outcome
        .map(|p| p.tree))
}

/// Rejection sampler for weighted unary-binary trees of a fixed size.
#[derive(Clone, Debug)]
pub struct WeightedSampler {
    plan: BranchPlan,
    max_size: usize,
}

impl WeightedSampler {
    pub fn new(u: UnaryWeight) -> Result<Self> {
        Self::with_precision(u, DEFAULT_PRECISION)
    }

    pub fn with_precision(u: UnaryWeight, precision: u32) -> Result<Self> {
        Ok(WeightedSampler {
            plan: make_branch_plan(u, precision)?,
            max_size: DEFAULT_MAX_SIZE,
        })
    }

    /// Lifts the size cap. Expected running time grows exponentially with size.
    pub fn allow_large(mut self, allow: bool) -> Self {
        self.max_size = if allow {
            MAX_NODES - 1
        } else {
            DEFAULT_MAX_SIZE
        };
        self
    }

    pub fn plan(&self) -> &BranchPlan {
        &self.plan
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn sample<R: RandomSource + ?Sized>(
        &self,
        n: usize,
        src: &mut R,
    ) -> Result<(TreeArena, SampleReport)> {
        if n > self.max_size {
            return Err(Error::SizeCapExceeded {
                requested: n,
                limit: self.max_size,
            });
        }
        let start = Instant::now();
        let bits0 = src.bits_consumed();
        let mut report = SampleReport::default();
        loop {
            let attempt = try_sample_weighted_pointed(n, &self.plan, src)?;
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
}

/// Samples one weighted tree with the default precision and size cap.
pub fn sample_weighted<R: RandomSource + ?Sized>(
    n: usize,
    u: UnaryWeight,
    src: &mut R,
) -> Result<(TreeArena, SampleReport)> {
    WeightedSampler::new(u)?.sample(n, src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::NodeRef;
    use crate::bitsource::MeteredBitSource;
    use crate::pointing::pointed_key;

    fn n(i: usize) -> NodeRef {
        NodeRef::new(i)
    }

    #[test]
    fn parse_weights() {
        assert_eq!(
            "2".parse::<UnaryWeight>().unwrap(),
            UnaryWeight::new(2, 0).unwrap()
        );
        assert_eq!(
            "1/2^1".parse::<UnaryWeight>().unwrap(),
            UnaryWeight::new(1, 1).unwrap()
        );
        assert_eq!(
            "3/8".parse::<UnaryWeight>().unwrap(),
            UnaryWeight::new(3, 3).unwrap()
        );
        assert_eq!("4/2^2".parse::<UnaryWeight>().unwrap(), UnaryWeight::ONE);
        assert_eq!(UnaryWeight::new(3, 3).unwrap().to_string(), "3/2^3");
        assert!("1/3".parse::<UnaryWeight>().is_err());
        assert!("x".parse::<UnaryWeight>().is_err());
        assert!("1/2^".parse::<UnaryWeight>().is_err());
    }

    #[test]
    fn plan_for_unit_weight() {
        let plan = make_branch_plan(UnaryWeight::ONE, 8).unwrap();
        assert_eq!(plan.step(), (79, 8));
        let total: u128 = plan.distribution().numerators().iter().sum();
        assert_eq!(total, 1u128 << plan.distribution().exponent());
        assert!(plan.p_abort().numerator() > 0);
    }

    #[test]
    fn plan_step_is_maximal() {
        for (u, prec) in [("1", 16), ("2", 16), ("1/2", 16), ("5/2^3", 10)] {
            let u: UnaryWeight = u.parse().unwrap();
            let plan = make_branch_plan(u, prec).unwrap();
            let c = plan.step_f64();
            let uf = u.to_f64();
            let bound = (-uf + (uf * uf + 4.0).sqrt()) / 4.0;
            assert!(
                c <= bound && bound - c < (-(prec as f64)).exp2(),
                "{u}: {c} vs {bound}"
            );
        }
    }

    #[test]
    fn plan_rejections() {
        assert!(make_branch_plan(UnaryWeight::new(0, 0).unwrap(), 8).is_err());
        assert!(matches!(
            make_branch_plan(UnaryWeight::new(1000, 0).unwrap(), 8),
            Err(Error::WeightTooLarge(_))
        ));
    }

    #[test]
    fn graft_examples() {
        let mut t = TreeArena::new_leaf_tree();
        let cp = graft_h(&mut t, Anchor::Colored(ColorPoint::Red(n(0))), HCase::H1).unwrap();
        assert_eq!(pointed_key(&t, cp), "UL:red@1");

        let mut t = TreeArena::new_leaf_tree();
        let cp = graft_h(&mut t, Anchor::Plain(n(0)), HCase::H7).unwrap();
        assert_eq!(pointed_key(&t, cp), "BLL:red@2");

        let mut t = TreeArena::from_word("UL").unwrap();
        let green = Anchor::Colored(ColorPoint::Green(n(0)));
        assert!(matches!(
            graft_h(&mut t, green, HCase::H1),
            Err(Error::WrongAnchor { .. })
        ));
        assert!(graft_h(&mut t, Anchor::Colored(ColorPoint::Blue(n(1))), HCase::H1).is_err());
    }

    #[test]
    fn inverse_examples() {
        let mut t = TreeArena::from_word("BLL").unwrap();
        let (case, anchor) = graft_h_inverse(&mut t, ColorPoint::Red(n(2))).unwrap();
        assert_eq!(
            (case, anchor, t.to_word().as_str()),
            (HCase::H7, Anchor::Plain(n(1)), "L")
        );

        let mut t = TreeArena::from_word("UL").unwrap();
        let (case, _) = graft_h_inverse(&mut t, ColorPoint::Blue(n(1))).unwrap();
        assert_eq!(case, HCase::H2);
    }

    #[test]
    fn size_cap() {
        let s = WeightedSampler::new(UnaryWeight::ONE).unwrap();
        let mut src = MeteredBitSource::new(0);
        assert!(matches!(
            s.sample(65, &mut src),
            Err(Error::SizeCapExceeded { .. })
        ));
        assert_eq!(s.allow_large(true).max_size(), MAX_NODES - 1);
    }

    #[test]
    fn small_samples_are_valid() {
        let s = WeightedSampler::new("2".parse().unwrap()).unwrap();
        for seed in 0..200 {
            let mut src = MeteredBitSource::new(seed);
            let (t, r) = s.sample(6, &mut src).unwrap();
            t.validate().unwrap();
            assert_eq!((t.size(), r.size), (6, 6));
        }
        let mut src = MeteredBitSource::new(1);
        let (t, _) = sample_weighted(1, UnaryWeight::ONE, &mut src).unwrap();
        assert_eq!(t.to_word(), "L");
    }
}
