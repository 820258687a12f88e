use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiplicity vector `a = (a_1, ..., a_m)` with every `a_i >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct MultiIndex {
    parts: Vec<u32>,
    n: u32,
}

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidMultiIndex("empty".into()));
        }
        if let Some(pos) = parts.iter().position(|&a| a == 0) {
            return Err(Error::InvalidMultiIndex(format!(
                "entry {} is zero",
                pos + 1
            )));
        }
        let n = parts.iter().sum();
        Ok(Self { parts, n })
    }

    /// `(1, ..., 1)` of length `n`.
    pub fn ones(n: usize) -> Self {
        Self::new(vec![1; n]).expect("n >= 1")
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn m(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, i: usize) -> u32 {
        self.parts[i]
    }

    /// Drop the last entry; `None` when `m == 1`.
    pub fn truncated(&self) -> Option<MultiIndex> {
        (self.m() > 1).then(|| MultiIndex::new(self.parts[..self.m() - 1].to_vec()).unwrap())
    }

    /// `a_1 + 2 a_2 + ... + m a_m`, the sign exponent of the leading
    /// coefficient of `det J_a`.
    pub fn weighted_sum(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &a)| (i as u64 + 1) * a as u64)
            .sum()
    }
}

impl TryFrom<Vec<u32>> for MultiIndex {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        MultiIndex::new(v)
    }
}

impl From<MultiIndex> for Vec<u32> {
    fn from(a: MultiIndex) -> Self {
        a.parts
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Comma-separated positive integers, e.g. `2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidMultiIndex(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiIndex::new(parts)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `n! / (a_1! ... a_m!)`.
pub fn multinomial(n: u32, a: &MultiIndex) -> Result<BigUint> {
    if a.n() != n {
        return Err(Error::MultinomialSumMismatch { n, sum: a.n() });
    }
    let denom = a
        .parts()
        .iter()
        .fold(BigUint::one(), |acc, &k| acc * factorial(k));
    Ok(factorial(n) / denom)
}

/// All compositions of `n` into exactly `m` positive parts, in lexicographic
/// order of the part vector.
pub fn compositions(n: u32, m: usize) -> Vec<MultiIndex> {
    fn rec(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(MultiIndex::new(prefix.clone()).unwrap());
            prefix.pop();
            return;
        }
        for first in 1..=remaining.saturating_sub(slots as u32 - 1) {
            prefix.push(first);
            rec(remaining - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 || (n as usize) < m {
        return out;
    }
    rec(n, m, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Every composition with `1 <= n <= n_max` and `1 <= m <= min(m_max, n)`,
/// ordered by `(n, m, a)`.
pub fn sweep_range(n_max: u32, m_max: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for m in 1..=m_max.min(n as usize) {
            out.extend(compositions(n, m));
        }
    }
    out
}
