//! Exhaustive enumeration and exact counting.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Largest size the enumerators accept.
pub const ENUMERATION_CAP: usize = 12;

fn check_cap(n: usize) -> Result<()> {
    if n > ENUMERATION_CAP {
        return Err(Error::SizeCapExceeded {
            requested: n,
            limit: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// Words of all binary trees with `n` internal nodes, sorted.
pub fn enumerate_binary(n: usize) -> Result<Vec<String>> {
    check_cap(n)?;
    let mut memo: Vec<Vec<String>> = vec![vec!["L".to_string()]];
    for m in 1..=n {
        let mut words = Vec::new();
        for left in 0..m {
            for l in &memo[left] {
                for r in &memo[m - 1 - left] {
                    words.push(format!("B{l}{r}"));
                }
            }
        }
        memo.push(words);
    }
    let mut out = memo.swap_remove(n);
    out.sort();
    Ok(out)
}

/// Words of all unary-binary trees with `n` nodes, sorted. Empty for `n = 0`.
pub fn enumerate_motzkin(n: usize) -> Result<Vec<String>> {
    check_cap(n)?;
    let mut memo: HashMap<usize, Vec<String>> = HashMap::new();
    memo.insert(0, vec![]);
    memo.insert(1, vec!["L".to_string()]);
    for m in 2..=n {
        let mut words: Vec<String> = memo[&(m - 1)].iter().map(|w| format!("U{w}")).collect();
        for left in 1..m - 1 {
            for l in &memo[&left] {
                for r in &memo[&(m - 1 - left)] {
                    words.push(format!("B{l}{r}"));
                }
            }
        }
        memo.insert(m, words);
    }
    let mut out = memo.remove(&n).unwrap_or_default();
    out.sort();
    Ok(out)
}

/// Catalan number: binary trees with `n` internal nodes.
pub fn count_binary(n: usize) -> BigUint {
    let mut c = BigUint::one();
    for k in 0..n as u64 {
        c = c * (2 * (2 * k + 1)) / (k + 2);
    }
    c
}

/// Unary-binary trees with `n` nodes, i.e. the Motzkin number of index `n - 1`.
pub fn count_motzkin(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    let (mut prev, mut cur) = (BigUint::one(), BigUint::one());
    for k in 2..n as u64 {
        let next = (&cur * (2 * k + 1) + &prev * (3 * (k - 1))) / (k + 2);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `sum over unary-binary trees t with n nodes of u^(unary nodes of t)`.
pub fn weighted_mass(n: usize, u: &BigRational) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for w in enumerate_motzkin(n)? {
        total += unary_weight(&w, u);
    }
    Ok(total)
}

/// `u^(number of 'U' letters in word)`.
pub fn unary_weight(word: &str, u: &BigRational) -> BigRational {
    let k = word.bytes().filter(|&b| b == b'U').count();
    num_traits::pow(u.clone(), k)
}
