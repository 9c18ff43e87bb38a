//! Lexicographic towers of vertex heights.
//!
//! A tower is an ordered family of height functions. Level `i + 1` only has to
//! induce the right refinement inside every cell cut out by the levels before
//! it, so the final lift `sum_i D^(L-1-i) h_i` certifies the triangulation once
//! `D` is large enough.

use std::collections::{BTreeMap, HashMap};

use num::rational::Ratio;
use num::{BigInt, Integer, One, Zero};

pub type Q = Ratio<i64>;

/// Level keys compare lexicographically; nested constructions append suffixes.
pub type LevelKey = Vec<u32>;

#[derive(Clone, Debug, Default)]
pub struct Tower {
    levels: BTreeMap<LevelKey, HashMap<Vec<i64>, Q>>,
}

impl Tower {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the height of `point` at `level`. Re-setting must agree.
    pub fn set(&mut self, level: &[u32], point: &[i64], value: Q) {
        let slot = self.levels.entry(level.to_vec()).or_default();
        match slot.get(point) {
            Some(old) => debug_assert_eq!(
                *old, value,
                "conflicting heights at level {level:?} for {point:?}"
            ),
            None => {
                slot.insert(point.to_vec(), value);
            }
        }
    }

    pub fn set_int(&mut self, level: &[u32], point: &[i64], value: i64) {
        self.set(level, point, Q::from_integer(value));
    }

    /// Copies every level of `other` under `prefix`, mapping points through `embed`.
    pub fn absorb(&mut self, prefix: &[u32], other: &Tower, embed: impl Fn(&[i64]) -> Vec<i64>) {
        for (key, vals) in &other.levels {
            let mut k = prefix.to_vec();
            k.extend_from_slice(key);
            for (p, v) in vals {
                self.set(&k, &embed(p), *v);
            }
        }
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn get(&self, level: &[u32], point: &[i64]) -> Q {
        self.levels
            .get(level)
            .and_then(|m| m.get(point))
            .copied()
            .unwrap_or_else(Q::zero)
    }

    /// Integer-scaled levels evaluated on `points` (missing entries are zero).
    pub fn integer_levels(&self, points: &[Vec<i64>]) -> Vec<Vec<i64>> {
        self.levels
            .values()
            .map(|vals| {
                let lcm = vals
                    .values()
                    .fold(1i64, |acc, q| acc.lcm(q.denom()));
                points
                    .iter()
                    .map(|p| {
                        let q = vals.get(p).copied().unwrap_or_else(Q::zero);
                        (q * Q::from_integer(lcm)).to_integer()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Combines integer levels into `sum_i D^(L-1-i) h_i`.
pub fn combine(levels: &[Vec<i64>], base: &BigInt) -> Vec<BigInt> {
    let n = levels.first().map_or(0, |l| l.len());
    let mut out = vec![BigInt::zero(); n];
    for level in levels {
        for (o, &h) in out.iter_mut().zip(level) {
            *o = &*o * base + BigInt::from(h);
        }
    }
    out
}

/// Smallest power of two exceeding `x` (at least 2).
pub fn power_of_two_above(x: &BigInt) -> BigInt {
    let mut d = BigInt::from(2);
    while &d <= x {
        d *= 2;
    }
    d
}

/// Lexicographic sign of a coefficient vector.
pub fn lex_sign(v: &[i128]) -> i32 {
    for &c in v {
        if c > 0 {
            return 1;
        }
        if c < 0 {
            return -1;
        }
    }
    0
}

/// Upper bound on how large `D` must be for a lexicographically positive
/// vector `c` to give a positive value of `sum c_i D^(L-1-i)`.
pub fn base_bound(c: &[i128]) -> BigInt {
    let lead = c.iter().position(|&x| x != 0);
    match lead {
        None => BigInt::one(),
        Some(i) => {
            let tail: i128 = c[i + 1..].iter().map(|x| x.abs()).sum();
            let lead_abs = c[i].abs();
            // D > 2 * tail / lead + 1 suffices.
            BigInt::from(2 * tail / lead_abs + 2)
        }
    }
}
