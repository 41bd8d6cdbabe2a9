//! Exhaustive bijection checks over all small trees.

use crate::arena::TreeArena;
use crate::catalan::{graft_f, graft_f_inverse, FCase};
use crate::error::Result;
use crate::motzkin::{graft_g, graft_g_inverse, GCase};
use crate::oracle::enumerate::{enumerate_binary, enumerate_motzkin};
use crate::pointing::{
    color_points, plain_key, plain_points, pointed_key, repoint, repoint_inverse, Anchor,
    ColorPoint, PlainPoint,
};
use crate::weighted::{graft_h, graft_h_inverse, HCase};

/// Outcome of one battery.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatteryReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl BatteryReport {
    fn new(name: &'static str) -> Self {
        BatteryReport {
            name,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

/// All binary trees with at most `max_size` nodes.
fn binary_trees(max_size: usize) -> Result<Vec<TreeArena>> {
    let mut out = Vec::new();
    for internal in 0..=(max_size.saturating_sub(1) / 2) {
        for w in enumerate_binary(internal)? {
            out.push(TreeArena::from_word(&w)?);
        }
    }
    Ok(out)
}

/// All unary-binary trees with between 1 and `max_size` nodes.
fn motzkin_trees(max_size: usize) -> Result<Vec<TreeArena>> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        for w in enumerate_motzkin(n)? {
            out.push(TreeArena::from_word(&w)?);
        }
    }
    Ok(out)
}

fn anchor_key(t: &TreeArena, a: Anchor) -> String {
    match a {
        Anchor::Colored(cp) => pointed_key(t, cp),
        Anchor::Plain(v) => plain_key(t, PlainPoint::Node(v)),
    }
}

fn repoint_checks(report: &mut BatteryReport, t: &TreeArena) -> Result<()> {
    let mut bottoms = 0;
    for cp in color_points(t) {
        let p = repoint(t, cp)?;
        bottoms += (p == PlainPoint::Bottom) as usize;
        let back = repoint_inverse(t, p)?;
        report.expect(back == cp, || {
            format!("{}: {cp} -> {p} -> {back}", t.to_word())
        });
    }
    report.expect(bottoms == 1, || {
        format!("{}: {bottoms} points reach bottom", t.to_word())
    });
    for p in plain_points(t) {
        let cp = repoint_inverse(t, p)?;
        let back = repoint(t, cp)?;
        report.expect(back == p, || {
            format!("{}: {p} -> {cp} -> {back}", t.to_word())
        });
    }
    Ok(())
}

/// Repointing and its inverse compose to the identity both ways.
pub fn repoint_battery(max_binary_size: usize, max_motzkin_size: usize) -> Result<BatteryReport> {
    let mut report = BatteryReport::new("repoint");
    for t in binary_trees(max_binary_size)? {
        repoint_checks(&mut report, &t)?;
    }
    for t in motzkin_trees(max_motzkin_size)? {
        if t.unary_nodes() > 0 {
            repoint_checks(&mut report, &t)?;
        }
    }
    Ok(report)
}

/// F and its inverse compose to the identity both ways.
pub fn graft_f_battery(max_size: usize) -> Result<BatteryReport> {
    let mut report = BatteryReport::new("graft F");
    for t in binary_trees(max_size)? {
        if t.size() >= 3 {
            for cp in color_points(&t) {
                let before = pointed_key(&t, cp);
                let mut u = t.clone();
                let (case, v) = graft_f_inverse(&mut u, cp)?;
                let cp2 = graft_f(&mut u, v, case);
                let after = pointed_key(&u, cp2);
                report.expect(before == after, || {
                    format!("{before} -> {case:?} -> {after}")
                });
            }
        }
        if t.size() + 2 <= max_size {
            for v in t.preorder() {
                let before = plain_key(&t, PlainPoint::Node(v));
                for case in FCase::ALL {
                    let mut u = t.clone();
                    let cp = graft_f(&mut u, v, case);
                    let (case2, v2) = graft_f_inverse(&mut u, cp)?;
                    let after = plain_key(&u, PlainPoint::Node(v2));
                    report.expect(case == case2 && before == after, || {
                        format!("{before} {case:?} -> {after} {case2:?}")
                    });
                }
            }
        }
    }
    Ok(report)
}

type ColoredCase<C> = (C, fn(ColorPoint) -> bool);

/// Every anchor/case pair of `t` for the given colored and plain cases.
fn anchors<C: Copy>(t: &TreeArena, colored: &[ColoredCase<C>], plain: &[C]) -> Vec<(C, Anchor)> {
    let mut out = Vec::new();
    for cp in color_points(t) {
        for &(case, accepts) in colored {
            if accepts(cp) {
                out.push((case, Anchor::Colored(cp)));
            }
        }
    }
    for v in t.preorder() {
        for &case in plain {
            out.push((case, Anchor::Plain(v)));
        }
    }
    out
}

/// G and its inverse compose to the identity both ways.
pub fn graft_g_battery(max_size: usize) -> Result<BatteryReport> {
    let mut report = BatteryReport::new("graft G");
    for t in motzkin_trees(max_size)? {
        if t.size() >= 2 {
            for cp in color_points(&t) {
                let before = pointed_key(&t, cp);
                let mut u = t.clone();
                let (case, a) = graft_g_inverse(&mut u, cp)?;
                let cp2 = graft_g(&mut u, a, case)?;
                let after = pointed_key(&u, cp2);
                report.expect(before == after, || {
                    format!("{before} -> {case:?} -> {after}")
                });
            }
        }
        let any: fn(ColorPoint) -> bool = |_| true;
        let mut pairs = Vec::new();
        if t.size() < max_size {
            pairs = anchors(&t, &[(GCase::G1, any)], &[GCase::G2]);
        }
        if t.size() + 2 <= max_size {
            pairs.extend(anchors(&t, &[], &[GCase::G3, GCase::G4, GCase::G5]));
        }
        for (case, a) in pairs {
            let before = anchor_key(&t, a);
            let mut u = t.clone();
            let cp = graft_g(&mut u, a, case)?;
            let (case2, a2) = graft_g_inverse(&mut u, cp)?;
            let after = anchor_key(&u, a2);
            report.expect(case == case2 && before == after, || {
                format!("{before} {case:?} -> {after} {case2:?}")
            });
        }
    }
    Ok(report)
}

/// H and its inverse compose to the identity both ways.
pub fn graft_h_battery(max_size: usize) -> Result<BatteryReport> {
    let mut report = BatteryReport::new("graft H");
    for t in motzkin_trees(max_size)? {
        if t.size() >= 2 {
            for cp in color_points(&t) {
                let before = pointed_key(&t, cp);
                let mut u = t.clone();
                let (case, a) = graft_h_inverse(&mut u, cp)?;
                let cp2 = graft_h(&mut u, a, case)?;
                let after = pointed_key(&u, cp2);
                report.expect(before == after, || {
                    format!("{before} -> {case:?} -> {after}")
                });
            }
        }
        let red: fn(ColorPoint) -> bool = |cp| matches!(cp, ColorPoint::Red(_));
        let blue: fn(ColorPoint) -> bool = |cp| matches!(cp, ColorPoint::Blue(_));
        let mut pairs = Vec::new();
        if t.size() < max_size {
            pairs = anchors(&t, &[(HCase::H1, red), (HCase::H2, blue)], &[HCase::H3]);
        }
        if t.size() + 2 <= max_size {
            pairs.extend(anchors(
                &t,
                &[],
                &[HCase::H4, HCase::H5, HCase::H6, HCase::H7],
            ));
        }
        for (case, a) in pairs {
            let before = anchor_key(&t, a);
            let mut u = t.clone();
            let cp = graft_h(&mut u, a, case)?;
            let (case2, a2) = graft_h_inverse(&mut u, cp)?;
            let after = anchor_key(&u, a2);
            report.expect(case == case2 && before == after, || {
                format!("{before} {case:?} -> {after} {case2:?}")
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batteries_pass() {
        for r in [
            repoint_battery(7, 5).unwrap(),
            graft_f_battery(7).unwrap(),
            graft_g_battery(5).unwrap(),
            graft_h_battery(5).unwrap(),
        ] {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
        }
    }
}
