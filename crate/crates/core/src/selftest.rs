//! Built-in checks run by `treegraft selftest`.

use crate::batch::map_indexed;
use crate::bitsource::MeteredBitSource;
use crate::error::Result;
use crate::oracle::audit::{exhaustive_path_audit, unary_count, AuditFamily, PathAudit};
use crate::oracle::batteries::{
    graft_f_battery, graft_g_battery, graft_h_battery, repoint_battery, BatteryReport,
};
use crate::oracle::chi_square::{chi_square_test, TreeClassTable};
use crate::oracle::enumerate::{count_binary, count_motzkin, enumerate_binary, enumerate_motzkin};
use crate::sampler::Sampler;
use crate::weighted::{make_branch_plan, BranchPlan, UnaryWeight, DEFAULT_PRECISION};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn from_result(name: String, r: Result<(bool, String)>) -> Check {
    match r {
        Ok((passed, detail)) => Check {
            name,
            passed,
            detail,
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn battery_check(r: Result<BatteryReport>) -> Check {
    let name = match &r {
        Ok(b) => format!("battery {}", b.name),
        Err(_) => "battery".to_string(),
    };
    from_result(
        name,
        r.map(|b| {
            let detail = if b.failures.is_empty() {
                format!("{} identities", b.checked)
            } else {
                format!(
                    "{} of {} failed, first: {}",
                    b.failures.len(),
                    b.checked,
                    b.failures[0]
                )
            };
            (b.passed(), detail)
        }),
    )
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn dyadic(num: u64, exponent: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(BigUint::one() << exponent))
}

/// Compares an audit against a per-tree probability and an expected
/// number of reachable color-pointed trees.
fn judge<F>(audit: &PathAudit, trees: BigUint, expected: F) -> (bool, String)
where
    F: FnMut(&str) -> BigRational,
{
    let bad = audit.mismatches(expected);
    let count_ok = BigUint::from(audit.reached.len()) == trees;
    let total_ok = audit.total() == BigRational::one();
    let passed = bad.is_empty() && count_ok && total_ok;
    let detail = if passed {
        format!(
            "{} trees, {} paths, success mass {}",
            audit.reached.len(),
            audit.paths,
            audit.reached_mass()
        )
    } else if let Some(m) = bad.first() {
        format!("{} mismatches, first {m}", bad.len())
    } else {
        format!(
            "reached {} trees, expected {trees}; total mass {}",
            audit.reached.len(),
            audit.total()
        )
    };
    (passed, detail)
}

/// Exact reach law of one sampler try at size `n`.
pub fn audit_check(family: &AuditFamily, n: usize) -> Check {
    let name = match family {
        AuditFamily::Binary { faithful: true } => format!("audit binary fair-start n={n}"),
        AuditFamily::Binary { faithful: false } => format!("audit binary red-start n={n}"),
        AuditFamily::BinaryEfficient => format!("audit binary never-failing step {n}"),
        AuditFamily::Motzkin => format!("audit unary-binary n={n}"),
        AuditFamily::Weighted(p) => format!("audit weighted u={} n={n}", p.weight()),
    };
    let r = exhaustive_path_audit(family, n).map(|audit| {
        let four_n = BigUint::one() << (2 * n);
        match family {
            AuditFamily::Binary { faithful } => {
                let trees = count_binary(n) * (2 * n + 2);
                let den = if *faithful { four_n * 2u32 } else { four_n };
                judge(&audit, trees, |_| ratio(BigUint::one(), den.clone()))
            }
            AuditFamily::BinaryEfficient => {
                let trees = count_binary(n) * (2 * n + 2);
                judge(&audit, trees.clone(), |_| {
                    ratio(BigUint::one(), trees.clone())
                })
            }
            AuditFamily::Motzkin => {
                let trees = count_motzkin(n) * (n + 1);
                let den = num_traits::pow(BigUint::from(3u32), n - 1) * 2u32;
                judge(&audit, trees, |_| ratio(BigUint::one(), den.clone()))
            }
            AuditFamily::Weighted(plan) => {
                let trees = count_motzkin(n) * (n + 1);
                let w = plan.weight();
                let u = dyadic(w.numerator(), w.exponent());
                let (m, p) = plan.step();
                let c = dyadic(m, p);
                let base = num_traits::pow(c, n - 1) / BigRational::from_integer(2.into());
                judge(&audit, trees, |key| {
                    num_traits::pow(u.clone(), unary_count(key)) * &base
                })
            }
        }
    });
    from_result(name, r)
}

/// Uniform-law chi-square test of `samples` draws of one sampler.
pub fn chi_square_check(
    sampler: &Sampler,
    label: &str,
    size: usize,
    samples: u64,
    seed: u64,
) -> Check {
    let name = format!("chi-square {label} size={size} seed={seed:#x}");
    let r = (|| {
        let classes = match sampler {
            Sampler::BinaryRejection | Sampler::BinaryEfficient | Sampler::BinaryRemyClassic => {
                enumerate_binary(size)?
            }
            _ => enumerate_motzkin(size)?,
        };
        let mut table = TreeClassTable::uniform(classes);
        let words = map_indexed(samples, |i| {
            sampler
                .sample(size, &mut MeteredBitSource::for_sample(seed, i))
                .map(|(t, _)| t.to_word())
        });
        for w in words {
            table.record(&w?)?;
        }
        let out = chi_square_test(&table, 0.001)?;
        Ok((out.pass, out.summary()))
    })();
    from_result(name, r)
}

/// Plans audited by the quick suite.
pub fn audit_plans() -> Result<Vec<BranchPlan>> {
    Ok(vec![
        make_branch_plan(UnaryWeight::ONE, 8)?,
        make_branch_plan(UnaryWeight::new(2, 0)?, DEFAULT_PRECISION)?,
        make_branch_plan(UnaryWeight::new(1, 1)?, DEFAULT_PRECISION)?,
    ])
}

pub fn quick_checks() -> Vec<Check> {
    let mut out = vec![
        battery_check(repoint_battery(11, 9)),
        battery_check(graft_f_battery(11)),
        battery_check(graft_g_battery(8)),
        battery_check(graft_h_battery(6)),
    ];
    for n in 0..=3 {
        out.push(audit_check(&AuditFamily::Binary { faithful: true }, n));
    }
    for n in 1..=3 {
        out.push(audit_check(&AuditFamily::Binary { faithful: false }, n));
    }
    for n in 1..=3 {
        out.push(audit_check(&AuditFamily::BinaryEfficient, n));
    }
    for n in 1..=4 {
        out.push(audit_check(&AuditFamily::Motzkin, n));
    }
    match audit_plans() {
        Ok(plans) => {
            for plan in plans {
                for n in 1..=4 {
                    out.push(audit_check(&AuditFamily::Weighted(plan.clone()), n));
                }
            }
        }
        Err(e) => out.push(from_result("weighted plans".into(), Err(e))),
    }
    out
}

pub fn full_checks(seed: u64) -> Vec<Check> {
    let mut out = quick_checks();
    let binary = [
        (Sampler::BinaryRejection, "binary rejection"),
        (Sampler::BinaryEfficient, "binary never-failing"),
        (Sampler::BinaryRemyClassic, "binary remy-classic"),
    ];
    for n in 1..=5 {
        for (s, label) in &binary {
            out.push(chi_square_check(s, label, n, 100_000, seed));
        }
    }
    for n in 2..=7 {
        out.push(chi_square_check(
            &Sampler::Motzkin,
            "unary-binary",
            n,
            100_000,
            seed,
        ));
    }
    out
}

pub fn run(level: Level, seed: u64) -> Vec<Check> {
    match level {
        Level::Quick => quick_checks(),
        Level::Full => full_checks(seed),
    }
}

/// True if every check passed and there was at least one.
pub fn all_passed(checks: &[Check]) -> bool {
    !checks.is_empty() && checks.iter().all(|c| c.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let checks = quick_checks();
        for c in &checks {
            assert!(c.passed, "{c}");
        }
        assert!(all_passed(&checks));
        assert!(!all_passed(&[]));
    }

    #[test]
    fn audit_smallest_sizes() {
        assert!(audit_check(&AuditFamily::BinaryEfficient, 1).passed);
        // red start only: a single colored tree before the first graft
        assert!(!audit_check(&AuditFamily::BinaryEfficient, 0).passed);
        assert!(audit_check(&AuditFamily::Motzkin, 1).passed);
    }
}
