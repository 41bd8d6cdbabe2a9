//! Goodness-of-fit of observed tree shapes against an exact law.
//!
//! The rejection threshold is the `1 - significance` quantile of the
//! chi-square distribution with `classes - 1` degrees of freedom, computed by
//! the Wilson–Hilferty cube approximation
//! `k (1 - 2/(9k) + z sqrt(2/(9k)))^3` with `z` the standard normal quantile.

use crate::error::{Error, Result};
use statrs::distribution::{ContinuousCDF, Normal};
use std::collections::BTreeMap;
use std::fmt::Write;

/// Observed counts per class next to the expected law.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeClassTable {
    expected: BTreeMap<String, f64>,
    observed: BTreeMap<String, u64>,
    total: u64,
}

impl TreeClassTable {
    /// Uniform law over `classes`.
    pub fn uniform<I: IntoIterator<Item = String>>(classes: I) -> Self {
        Self::weighted(classes.into_iter().map(|c| (c, 1.0)))
    }

    /// Law proportional to the given nonnegative weights.
    pub fn weighted<I: IntoIterator<Item = (String, f64)>>(classes: I) -> Self {
        let mut expected: BTreeMap<String, f64> = classes.into_iter().collect();
        let norm: f64 = expected.values().sum();
        for p in expected.values_mut() {
            *p /= norm;
        }
        let observed = expected.keys().map(|k| (k.clone(), 0)).collect();
        TreeClassTable {
            expected,
            observed,
            total: 0,
        }
    }

    pub fn record(&mut self, class: &str) -> Result<()> {
        match self.observed.get_mut(class) {
            Some(c) => {
                *c += 1;
                self.total += 1;
                Ok(())
            }
            None => Err(Error::UnknownClass(class.to_string())),
        }
    }

    pub fn record_all<'a, I: IntoIterator<Item = &'a str>>(&mut self, classes: I) -> Result<()> {
        classes.into_iter().try_for_each(|c| self.record(c))
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn classes(&self) -> usize {
        self.expected.len()
    }

    pub fn observed(&self, class: &str) -> u64 {
        self.observed.get(class).copied().unwrap_or(0)
    }

    pub fn expected_probability(&self, class: &str) -> f64 {
        self.expected.get(class).copied().unwrap_or(0.0)
    }

    /// Total variation distance between the empirical and expected laws.
    pub fn total_variation(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        let n = self.total as f64;
        0.5 * self
            .expected
            .iter()
            .map(|(k, p)| (self.observed[k] as f64 / n - p).abs())
            .sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquareRow {
    pub class: String,
    pub expected: f64,
    pub observed: u64,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub threshold: f64,
    pub degrees_of_freedom: usize,
    pub pass: bool,
    pub rows: Vec<ChiSquareRow>,
}

impl ChiSquareOutcome {
    /// `class,expected,observed,contribution` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,expected,observed,contribution\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{:.3},{},{:.6}",
                r.class, r.expected, r.observed, r.contribution
            )
            .unwrap();
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "chi2={:.3} threshold={:.3} dof={} {}",
            self.statistic,
            self.threshold,
            self.degrees_of_freedom,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

/// Wilson–Hilferty approximation of the upper `significance` quantile.
pub fn chi_square_quantile(dof: usize, significance: f64) -> f64 {
    let k = dof as f64;
    let z = Normal::standard().inverse_cdf(1.0 - significance);
    let h = 2.0 / (9.0 * k);
    k * (1.0 - h + z * h.sqrt()).powi(3)
}

/// Pearson's test; passes iff the statistic is below the threshold.
pub fn chi_square_test(table: &TreeClassTable, significance: f64) -> Result<ChiSquareOutcome> {
    let n = table.total as f64;
    let mut rows = Vec::with_capacity(table.classes());
    let mut statistic = 0.0;
    for (class, p) in &table.expected {
        let expected = p * n;
        if expected < 5.0 {
            return Err(Error::UnderSampled {
                class: class.clone(),
                expected,
            });
        }
        let observed = table.observed[class];
        let contribution = (observed as f64 - expected).powi(2) / expected;
        statistic += contribution;
        rows.push(ChiSquareRow {
            class: class.clone(),
            expected,
            observed,
            contribution,
        });
    }
    let dof = table.classes().saturating_sub(1).max(1);
    let threshold = chi_square_quantile(dof, significance);
    Ok(ChiSquareOutcome {
        statistic,
        threshold,
        degrees_of_freedom: dof,
        pass: statistic < threshold,
        rows,
    })
}
