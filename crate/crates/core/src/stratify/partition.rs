use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::numeric::ComplexPoint;

/// A set partition of `{0, ..., n-1}`. Blocks are sorted internally and
/// listed by their minimum element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
    n: usize,
}

impl SetPartition {
    /// Validates and canonicalizes. Indices are 0-based.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "index {} outside 1..={n}",
                        i + 1
                    )));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("index {} repeated", i + 1)));
                }
            }
        }
        if n == 0 {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { blocks, n })
    }

    /// All singletons.
    pub fn discrete(n: usize) -> Self {
        Self::new((0..n).map(|i| vec![i]).collect()).expect("n >= 1")
    }

    /// One block.
    pub fn single_block(n: usize) -> Self {
        Self::new(vec![(0..n).collect()]).expect("n >= 1")
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.blocks.len()
    }

    /// `block_of()[i]` is the index of the block holding `i`.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                out[i] = k;
            }
        }
        out
    }
}

impl fmt::Display for SetPartition {
    /// 1-based, e.g. `{{1,3},{2,5},{4}}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            let items: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        write!(f, "}}")
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Accepts the 1-based display form, e.g. `{{1,3},{2,5},{4}}`, or the
    /// same blocks separated by `|`, e.g. `1,3|2,5|4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPartition(format!("cannot parse {s:?}"));
        let t = s.trim();
        let groups: Vec<&str> =
            if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                let inner = inner.trim();
                let body = inner
                    .strip_prefix('{')
                    .and_then(|r| r.strip_suffix('}'))
                    .ok_or_else(bad)?;
                body.split('}')
                    .map(|g| {
                        g.trim()
                            .trim_start_matches(',')
                            .trim()
                            .trim_start_matches('{')
                    })
                    .collect()
            } else {
                t.split('|').collect()
            };
        let blocks = groups
            .iter()
            .map(|g| {
                g.split(',')
                    .map(|x| match x.trim().parse::<usize>() {
                        Ok(v) if v >= 1 => Ok(v - 1),
                        _ => Err(bad()),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks)
    }
}

/// The partition with `i ~ j` whenever `|z_i - z_j| <= tol`, closed under
/// transitivity.
pub fn part_of(z: &ComplexPoint, tol: f64) -> SetPartition {
    let c = z.coords();
    let n = c.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (c[i] - c[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    SetPartition { blocks, n }
}

/// Whether every block of `lambda` lies inside a block of `mu`.
pub fn refines(lambda: &SetPartition, mu: &SetPartition) -> Result<bool> {
    if lambda.n != mu.n {
        return Err(Error::DimensionMismatch {
            expected: lambda.n,
            found: mu.n,
        });
    }
    let owner = mu.block_of();
    Ok(lambda
        .blocks
        .iter()
        .all(|b| b.iter().all(|&i| owner[i] == owner[b[0]])))
}

/// One coordinate per block. Coordinates within a block must agree to `tol`.
pub fn phi(lambda: &SetPartition, z: &ComplexPoint, tol: f64) -> Result<ComplexPoint> {
    check_dim(lambda, z)?;
    let c = z.coords();
    for (k, b) in lambda.blocks.iter().enumerate() {
        if b.iter().any(|&i| (c[i] - c[b[0]]).norm() > tol) {
            return Err(Error::BlockMismatch { block: k + 1 });
        }
    }
    ComplexPoint::new(lambda.blocks.iter().map(|b| c[b[0]]).collect())
}

/// Copy `y_k` onto every index of block `k`.
pub fn phi_inverse(lambda: &SetPartition, y: &ComplexPoint) -> Result<ComplexPoint> {
    if y.dim() != lambda.ell() {
        return Err(Error::DimensionMismatch {
            expected: lambda.ell(),
            found: y.dim(),
        });
    }
    let mut out = vec![y.coords()[0]; lambda.n];
    for (k, b) in lambda.blocks.iter().enumerate() {
        for &i in b {
            out[i] = y.coords()[k];
        }
    }
    ComplexPoint::new(out)
}

/// Block sizes in canonical order.
pub fn multiplicities_of(lambda: &SetPartition) -> MultiIndex {
    MultiIndex::new(lambda.blocks.iter().map(|b| b.len() as u32).collect())
        .expect("blocks are nonempty")
}

pub(crate) fn check_dim(lambda: &SetPartition, z: &ComplexPoint) -> Result<()> {
    if z.dim() != lambda.n {
        return Err(Error::DimensionMismatch {
            expected: lambda.n,
            found: z.dim(),
        });
    }
    Ok(())
}
