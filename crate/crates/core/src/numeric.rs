//! Double-precision complex points, polylines and small dense linear algebra.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

pub use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A point of `ℂ^d`, `d >= 1`, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint {
    coords: Vec<Complex64>,
}

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if coords
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.coords
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance.
    pub fn distance(&self, other: &ComplexPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A piecewise-linear path through at least two samples of equal dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPath {
    samples: Vec<ComplexPoint>,
}

impl ComplexPath {
    pub fn new(samples: Vec<ComplexPoint>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::PathTooShort(samples.len()));
        }
        let d = samples[0].dim();
        if let Some(bad) = samples.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        Ok(Self { samples })
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn samples(&self) -> &[ComplexPoint] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> &ComplexPoint {
        &self.samples[0]
    }

    pub fn end(&self) -> &ComplexPoint {
        self.samples.last().unwrap()
    }

    pub fn reversed(&self) -> ComplexPath {
        let mut samples = self.samples.clone();
        samples.reverse();
        ComplexPath { samples }
    }

    /// Parse the path file format: a `dim=<n>` header, then one sample per
    /// line as `re im` pairs separated by whitespace. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut samples = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            match dim {
                None => {
                    let d = t
                        .strip_prefix("dim=")
                        .and_then(|d| d.trim().parse::<usize>().ok())
                        .filter(|&d| d > 0)
                        .ok_or_else(|| {
                            Error::Parse(format!("line {}: expected dim=<n> header", lineno + 1))
                        })?;
                    dim = Some(d);
                }
                Some(d) => {
                    let p = parse_pairs(t)
                        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
                    if p.dim() != d {
                        return Err(Error::Parse(format!(
                            "line {}: expected {d} coordinates, found {}",
                            lineno + 1,
                            p.dim()
                        )));
                    }
                    samples.push(p);
                }
            }
        }
        if dim.is_none() {
            return Err(Error::Parse("missing dim=<n> header".into()));
        }
        Self::new(samples)
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "dim={}", self.dim())?;
        for s in &self.samples {
            writeln!(w, "{}", format_pairs(s))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).unwrap()
    }
}

/// `re im re im ...` on one line.
pub fn parse_pairs(text: &str) -> Result<ComplexPoint> {
    let values = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() || values.len() % 2 != 0 {
        return Err(Error::Parse(
            "expected an even, nonzero count of numbers".into(),
        ));
    }
    ComplexPoint::new(
        values
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect(),
    )
}

pub fn format_pairs(p: &ComplexPoint) -> String {
    let mut s = String::new();
    for (i, c) in p.coords().iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{:?} {:?}", c.re, c.im).unwrap();
    }
    s
}

/// Small dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// LU with partial pivoting. Returns `(lu, perm, sign)` or `None` when a
    /// pivot is exactly zero.
    fn lu(&self) -> Option<(Vec<Complex64>, Vec<usize>, f64)> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[x * n + k].norm().total_cmp(&a[y * n + k].norm()))
                .unwrap();
            if a[p * n + k].is_zero() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = a[k * n + k];
            for i in k + 1..n {
                let factor = a[i * n + k] / piv;
                a[i * n + k] = factor;
                for j in k + 1..n {
                    let v = a[k * n + j];
                    a[i * n + j] -= factor * v;
                }
            }
        }
        Some((a, perm, sign))
    }

    pub fn det(&self) -> Complex64 {
        match self.lu() {
            None => Complex64::zero(),
            Some((lu, _, sign)) => {
                (0..self.n).fold(Complex64::new(sign, 0.0), |acc, k| acc * lu[k * self.n + k])
            }
        }
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Option<Vec<Complex64>> {
        let n = self.n;
        let (lu, perm, _) = self.lu()?;
        let mut x: Vec<Complex64> = perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = x[j];
                x[i] -= lu[i * n + j] * v;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let v = x[j];
                x[i] -= lu[i * n + j] * v;
            }
            x[i] /= lu[i * n + i];
        }
        Some(x)
    }

    fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// 1-norm condition number `‖A‖₁ ‖A⁻¹‖₁`; infinite when singular.
    pub fn condition_1(&self) -> f64 {
        let n = self.n;
        let mut inv_cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Complex64::zero(); n];
            e[j] = Complex64::new(1.0, 0.0);
            match self.solve(&e) {
                Some(col) => inv_cols.push(col),
                None => return f64::INFINITY,
            }
        }
        let inv_norm = inv_cols
            .iter()
            .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        self.norm1() * inv_norm
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }
}
