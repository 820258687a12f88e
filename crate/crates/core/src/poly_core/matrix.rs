use std::fmt;

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};

/// Largest size accepted by the Leibniz expansion (8! = 40320 summands).
pub const LEIBNIZ_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DetMethod {
    /// Sum over all permutations.
    Leibniz,
    /// Bareiss-style fraction-free elimination with exact division.
    #[default]
    FractionFree,
}

/// Dense matrix of polynomials sharing one arity, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    arity: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        arity: usize,
        mut f: impl FnMut(usize, usize) -> MultiPoly,
    ) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.arity(), arity, "entry ({i},{j}) has the wrong arity");
                entries.push(e);
            }
        }
        Self {
            rows,
            cols,
            arity,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let arity = rows[0][0].arity();
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            for e in row {
                if e.arity() != arity {
                    return Err(Error::ArityMismatch {
                        left: arity,
                        right: e.arity(),
                    });
                }
                entries.push(e);
            }
        }
        Ok(Self {
            rows: r,
            cols: c,
            arity,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        Self::from_fn(self.rows, self.cols, self.arity, |i, j| f(self.get(i, j)))
    }

    /// Entry-wise leading terms (zero entries stay zero).
    pub fn leading_terms(&self) -> Self {
        self.map(|p| {
            p.leading_part()
                .unwrap_or_else(|_| MultiPoly::zero(self.arity))
        })
    }

    pub fn determinant(&self, method: DetMethod) -> Result<MultiPoly> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        match method {
            DetMethod::Leibniz => self.det_leibniz(),
            DetMethod::FractionFree => Ok(self.det_bareiss()),
        }
    }

    fn det_leibniz(&self) -> Result<MultiPoly> {
        let n = self.rows;
        if n > LEIBNIZ_MAX {
            return Err(Error::LeibnizTooLarge {
                size: n,
                max: LEIBNIZ_MAX,
            });
        }
        let mut total = MultiPoly::zero(self.arity);
        for_each_permutation(n, |perm, even| {
            // det M = Σ sgn(σ) Π_i M[σ(i), i]
            let mut prod = MultiPoly::one(self.arity);
            for (col, &row) in perm.iter().enumerate() {
                let e = self.get(row, col);
                if e.is_zero() {
                    return;
                }
                prod = &prod * e;
            }
            total = if even { &total + &prod } else { &total - &prod };
        });
        Ok(total)
    }

    fn det_bareiss(&self) -> MultiPoly {
        let n = self.rows;
        let mut m: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = MultiPoly::one(self.arity);
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return MultiPoly::zero(self.arity);
                };
                m.swap(k, swap);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num
                        .div_exact(&prev)
                        .expect("pivot is nonzero")
                        .expect("Bareiss quotients are exact");
                }
                m[i][k] = MultiPoly::zero(self.arity);
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }
}

/// Calls `f(perm, is_even)` once for every permutation of `0..n`
/// (Heap's algorithm; each step is a single transposition).
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize], bool)) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut even = true;
    f(&perm, even);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            even = !even;
            f(&perm, even);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn determinant(m: &PolyMatrix, method: DetMethod) -> Result<MultiPoly> {
    m.determinant(method)
}

/// The `n x n` Vandermonde matrix with `(i, j)` entry `z_j^(i-1)`.
pub fn vandermonde_matrix(n: usize) -> PolyMatrix {
    assert!(n >= 1);
    PolyMatrix::from_fn(n, n, n, |i, j| {
        MultiPoly::term(Monomial::var_power(n, j, i as u32), num_traits::One::one())
    })
}

/// `Π_{j<k} (z_k - z_j)` in `n` variables.
pub fn vandermonde_product(n: usize) -> MultiPoly {
    let mut prod = MultiPoly::one(n);
    for k in 0..n {
        for j in 0..k {
            prod = &prod * &(&MultiPoly::var(n, k) - &MultiPoly::var(n, j));
        }
    }
    prod
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl PolyMatrix {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::rat;

    #[test]
    fn permutation_signs() {
        let mut seen = 0;
        let mut even_count = 0;
        for_each_permutation(4, |p, even| {
            seen += 1;
            // count inversions
            let inv = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            assert_eq!(inv % 2 == 0, even);
            if even {
                even_count += 1;
            }
        });
        assert_eq!(seen, 24);
        assert_eq!(even_count, 12);
    }

    #[test]
    fn small_vandermonde() {
        let v1 = vandermonde_matrix(1);
        assert_eq!(v1.get(0, 0), &MultiPoly::one(1));
        let v2 = vandermonde_matrix(2);
        assert_eq!(v2.get(1, 0), &MultiPoly::var(2, 0));
        let expect = &MultiPoly::var(2, 1) - &MultiPoly::var(2, 0);
        for method in [DetMethod::Leibniz, DetMethod::FractionFree] {
            assert_eq!(v2.determinant(method).unwrap(), expect);
        }
        let v3 = vandermonde_matrix(3);
        assert_eq!(v3.get(2, 1), &MultiPoly::var(3, 1).pow(2));
        for method in [DetMethod::Leibniz, DetMethod::FractionFree] {
            assert_eq!(v3.determinant(method).unwrap(), vandermonde_product(3));
        }
    }

    #[test]
    fn errors() {
        let m = PolyMatrix::from_fn(2, 3, 1, |_, _| MultiPoly::one(1));
        assert!(matches!(
            m.determinant(DetMethod::Leibniz),
            Err(Error::NotSquare { .. })
        ));
        let big = PolyMatrix::from_fn(9, 9, 1, |i, j| {
            if i == j {
                MultiPoly::one(1)
            } else {
                MultiPoly::zero(1)
            }
        });
        assert!(matches!(
            big.determinant(DetMethod::Leibniz),
            Err(Error::LeibnizTooLarge { .. })
        ));
        assert_eq!(
            big.determinant(DetMethod::FractionFree).unwrap(),
            MultiPoly::one(1)
        );
    }

    #[test]
    fn pivoting_needed() {
        // [[0, 1], [z1, 0]] has determinant -z1
        let z = MultiPoly::var(1, 0);
        let m = PolyMatrix::from_rows(vec![
            vec![MultiPoly::zero(1), MultiPoly::one(1)],
            vec![z.clone(), MultiPoly::zero(1)],
        ])
        .unwrap();
        assert_eq!(m.determinant(DetMethod::FractionFree).unwrap(), -z.clone());
        assert_eq!(m.determinant(DetMethod::Leibniz).unwrap(), -z);
        let singular = PolyMatrix::from_fn(2, 2, 1, |_, _| MultiPoly::constant(1, rat(3, 2)));
        assert!(singular
            .determinant(DetMethod::FractionFree)
            .unwrap()
            .is_zero());
    }
}
