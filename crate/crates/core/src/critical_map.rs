//! The canonical polynomial `p_a`, the critical-value map `θ_a` and its
//! Jacobian.
//!
//! For `a = (a_1, ..., a_m)` with `n = Σ a_i`,
//! `p_a(z) = ∫_0^z (w - z_1)^{a_1} ··· (w - z_m)^{a_m} dw` and
//! `θ_a(z_1, ..., z_m) = (p_a(z_1), ..., p_a(z_m))`. The Jacobian `J_a` has
//! `(i, j)` entry `∂/∂z_i p_a(z_j)`; note the row index is the
//! differentiation variable. Its determinant factors as
//!
//! ```text
//! det J_a = (1 / (n; a)) · Π_j (-z_j)^{a_j} · Π_{j≠k} (z_k - z_j)^{a_j}
//! ```
//!
//! Everything here is computed by brute-force symbolic expansion; the
//! `calculus` module reaches the same divisibility facts by another route.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::multi_index::{multinomial, MultiIndex};
use crate::numeric::{CMatrix, ComplexPoint};
use crate::poly_core::{DetMethod, FloatPoly, Monomial, MultiPoly, PolyMatrix, UniPoly};

/// Upper bounds on `(m, n)` for the symbolic suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeGuard {
    pub m_max: usize,
    pub n_max: u32,
}

impl Default for SizeGuard {
    fn default() -> Self {
        Self { m_max: 3, n_max: 7 }
    }
}

impl SizeGuard {
    pub fn new(m_max: usize, n_max: u32) -> Self {
        Self { m_max, n_max }
    }

    /// Default bounds for constant-term extraction: `m <= 4`, `n <= 8`.
    pub fn dyson() -> Self {
        Self { m_max: 4, n_max: 8 }
    }

    pub fn check(&self, a: &MultiIndex) -> Result<()> {
        if a.m() > self.m_max || a.n() > self.n_max {
            return Err(Error::GuardExceeded {
                m: a.m(),
                n: a.n(),
                m_max: self.m_max,
                n_max: self.n_max,
            });
        }
        Ok(())
    }
}

/// `Π_i (w - z_i)^{a_i}` as an element of `R[w]`.
pub fn critical_product(a: &MultiIndex) -> UniPoly {
    let m = a.m();
    a.parts()
        .iter()
        .enumerate()
        .fold(UniPoly::one(m), |acc, (i, &ai)| {
            &acc * &UniPoly::linear_factor(m, i).pow(ai)
        })
}

/// `p_a(z) = ∫_0^z Π (w - z_i)^{a_i} dw`.
pub fn build_p_a(a: &MultiIndex) -> UniPoly {
    critical_product(a).integrate()
}

#[derive(Clone, Debug)]
pub struct JacobianBundle {
    pub a: MultiIndex,
    pub p_a: UniPoly,
    /// `theta[j] = p_a(z_j)`
    pub theta: Vec<MultiPoly>,
    /// `(i, j)` entry `∂/∂z_i theta[j]`
    pub jacobian: PolyMatrix,
}

pub fn build_bundle(a: &MultiIndex) -> JacobianBundle {
    let m = a.m();
    let p_a = build_p_a(a);
    let theta: Vec<MultiPoly> = (0..m)
        .map(|j| p_a.substitute(j).expect("index within arity"))
        .collect();
    let jacobian = PolyMatrix::from_fn(m, m, m, |i, j| {
        theta[j].partial_derivative(i).expect("index within arity")
    });
    JacobianBundle {
        a: a.clone(),
        p_a,
        theta,
        jacobian,
    }
}

impl JacobianBundle {
    pub fn determinant(&self) -> MultiPoly {
        self.jacobian
            .determinant(DetMethod::FractionFree)
            .expect("Jacobian is square")
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        self.jacobian.get(i, j)
    }
}

/// `D(z) = Π_j (-z_j)^{a_j} · Π_{j≠k} (z_k - z_j)^{a_j}`, expanded.
pub fn closed_form_d(a: &MultiIndex) -> MultiPoly {
    let m = a.m();
    let z = |i| MultiPoly::var(m, i);
    let mut d = MultiPoly::one(m);
    for j in 0..m {
        d = &d * &(-z(j)).pow(a.get(j));
    }
    for j in 0..m {
        for k in (0..m).filter(|&k| k != j) {
            d = &d * &(&z(k) - &z(j)).pow(a.get(j));
        }
    }
    d
}

fn inv_multinomial(a: &MultiIndex) -> BigRational {
    let mult = multinomial(a.n(), a).expect("sum matches by construction");
    BigRational::new(BigInt::one(), BigInt::from(mult))
}

/// `D(z) / (n; a)`, the predicted value of `det J_a`.
pub fn closed_form_det(a: &MultiIndex) -> MultiPoly {
    closed_form_d(a).scale(&inv_multinomial(a))
}

/// The closed form in factored shape, e.g. for `a = (2, 3)`:
/// `-1/10 * z1^2 * z2^3 * (z1 - z2)^5`.
///
/// Uses `Π_j (-z_j)^{a_j} Π_{j≠k} (z_k - z_j)^{a_j}
/// = (-1)^{n + Σ_{j<k} a_j} Π_j z_j^{a_j} Π_{j<k} (z_j - z_k)^{a_j + a_k}`.
pub fn factored_closed_form(a: &MultiIndex) -> String {
    let m = a.m();
    let flips: u64 = (0..m).map(|j| a.get(j) as u64 * (m - 1 - j) as u64).sum();
    let negative = (a.n() as u64 + flips) % 2 == 1;
    let inv = inv_multinomial(a);
    let mut out = format!(
        "{}{}/{}",
        if negative { "-" } else { "" },
        inv.numer(),
        inv.denom()
    );
    let pow = |base: String, e: u32| if e == 1 { base } else { format!("{base}^{e}") };
    for j in 0..m {
        out.push_str(&format!(" * {}", pow(format!("z{}", j + 1), a.get(j))));
    }
    for j in 0..m {
        for k in j + 1..m {
            out.push_str(&format!(
                " * {}",
                pow(format!("(z{} - z{})", j + 1, k + 1), a.get(j) + a.get(k))
            ));
        }
    }
    out
}

/// Both sides of the determinant identity for one multi-index.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub a: MultiIndex,
    pub lhs: MultiPoly,
    pub rhs: MultiPoly,
    pub equal: bool,
    pub wall_time_ms: f64,
}

/// Serialized form of [`IdentityReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub a: MultiIndex,
    pub n: u32,
    pub m: usize,
    pub lhs_text: String,
    pub rhs_text: String,
    pub factored: String,
    pub equal: bool,
    pub wall_time_ms: f64,
}

impl IdentityReport {
    pub fn record(&self) -> IdentityRecord {
        IdentityRecord {
            a: self.a.clone(),
            n: self.a.n(),
            m: self.a.m(),
            lhs_text: self.lhs.to_string(),
            rhs_text: self.rhs.to_string(),
            factored: factored_closed_form(&self.a),
            equal: self.equal,
            wall_time_ms: self.wall_time_ms,
        }
    }
}

/// Compute `det J_a` by expansion and compare with `D(z) / (n; a)`.
pub fn verify_identity(a: &MultiIndex, guard: &SizeGuard) -> Result<IdentityReport> {
    guard.check(a)?;
    let start = Instant::now();
    let lhs = build_bundle(a).determinant();
    let rhs = closed_form_det(a);
    let equal = lhs == rhs;
    Ok(IdentityReport {
        a: a.clone(),
        lhs,
        rhs,
        equal,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Every entry of column `j` is divisible by `z_j^{a_j}`, and by
/// `z_j^{a_j+1}` off the diagonal.
pub fn check_column_divisibility(a: &MultiIndex, guard: &SizeGuard) -> Result<bool> {
    guard.check(a)?;
    Ok(column_divisibility(&build_bundle(a)))
}

pub fn column_divisibility(bundle: &JacobianBundle) -> bool {
    let a = &bundle.a;
    let m = a.m();
    for j in 0..m {
        for i in 0..m {
            let e = a.get(j) + u32::from(i != j);
            let d = MultiPoly::var(m, j).pow(e);
            if bundle
                .entry(i, j)
                .div_exact(&d)
                .expect("nonzero divisor")
                .is_none()
            {
                return false;
            }
        }
    }
    true
}

/// For `j != k`, `J_{ik} - J_{ij}` is divisible by `(z_k - z_j)^{a_k + a_j}`,
/// and by one more power when `i ∉ {j, k}`.
pub fn check_column_difference_divisibility(a: &MultiIndex, guard: &SizeGuard) -> Result<bool> {
    guard.check(a)?;
    Ok(column_difference_divisibility(&build_bundle(a)))
}

pub fn column_difference_divisibility(bundle: &JacobianBundle) -> bool {
    let a = &bundle.a;
    let m = a.m();
    for j in 0..m {
        for k in (0..m).filter(|&k| k != j) {
            let base = &MultiPoly::var(m, k) - &MultiPoly::var(m, j);
            for i in 0..m {
                let e = a.get(j) + a.get(k) + u32::from(i != j && i != k);
                let diff = bundle.entry(i, k) - bundle.entry(i, j);
                if diff
                    .div_exact(&base.pow(e))
                    .expect("nonzero divisor")
                    .is_none()
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Leading term of `det J_a` via
/// `lt(det J_a) = (-z_m)^{a_m (m-1)} · lt(det J_{a'}) · lt((J_a)_{mm})`
/// with `a' = (a_1, ..., a_{m-1})`, without expanding the determinant.
pub fn leading_term_recursion(a: &MultiIndex) -> (Monomial, BigRational) {
    let m = a.m();
    let last = m - 1;
    let am = a.get(last);
    let p_a = build_p_a(a);
    let corner = p_a
        .substitute(last)
        .and_then(|t| t.partial_derivative(last))
        .expect("index within arity");
    let (corner_m, corner_c) = corner.leading_term().expect("corner entry is nonzero");

    let Some(prefix) = a.truncated() else {
        return (corner_m.clone(), corner_c.clone());
    };
    let (sub_m, sub_c) = leading_term_recursion(&prefix);
    let shift_exp = am * (m as u32 - 1);
    let sign = if shift_exp.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    let mono = sub_m
        .embed(m)
        .mul(&Monomial::var_power(m, last, shift_exp))
        .mul(corner_m);
    (mono, sign * sub_c * corner_c)
}

/// `(-1)^{a_1 + 2 a_2 + ... + m a_m} / (n; a)`.
pub fn leading_coefficient_formula(a: &MultiIndex) -> BigRational {
    let c = inv_multinomial(a);
    if a.weighted_sum().is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// Predicted highest exponent of `z_m` in each entry of `J_a`: `a_m` for
/// `i, j < m`, `a_m - 1` for `j < i = m`, and `n` for `j = m`.
pub fn zm_exponent_profile(a: &MultiIndex) -> Vec<Vec<u32>> {
    let m = a.m();
    let am = a.get(m - 1);
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if j == m - 1 {
                        a.n()
                    } else if i == m - 1 {
                        am - 1
                    } else {
                        am
                    }
                })
                .collect()
        })
        .collect()
}

/// Highest exponent of `z_m` actually present in each entry.
pub fn observed_zm_exponents(bundle: &JacobianBundle) -> Vec<Vec<Option<u32>>> {
    let m = bundle.a.m();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| bundle.entry(i, j).degree_in(m - 1))
                .collect()
        })
        .collect()
}

/// `θ_a` and `J_a` with coefficients rounded to `f64`, for repeated numeric
/// evaluation.
#[derive(Clone, Debug)]
pub struct ThetaMap {
    a: MultiIndex,
    theta: Vec<FloatPoly>,
    jacobian: Vec<FloatPoly>,
    inv_multinomial: f64,
}

impl ThetaMap {
    pub fn new(a: &MultiIndex) -> Self {
        let bundle = build_bundle(a);
        Self::from_bundle(&bundle)
    }

    pub fn from_bundle(bundle: &JacobianBundle) -> Self {
        let m = bundle.a.m();
        let theta = bundle.theta.iter().map(FloatPoly::from_exact).collect();
        let jacobian = (0..m * m)
            .map(|k| FloatPoly::from_exact(bundle.entry(k / m, k % m)))
            .collect();
        Self {
            a: bundle.a.clone(),
            theta,
            jacobian,
            inv_multinomial: inv_multinomial(&bundle.a).to_f64().unwrap(),
        }
    }

    pub fn multi_index(&self) -> &MultiIndex {
        &self.a
    }

    fn check_dim(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.a.m() {
            return Err(Error::DimensionMismatch {
                expected: self.a.m(),
                found: z.len(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dim(z)?;
        Ok(self.theta.iter().map(|p| p.eval(z)).collect())
    }

    /// `(i, j)` entry `∂θ_j/∂z_i`.
    pub fn jacobian(&self, z: &[Complex64]) -> Result<CMatrix> {
        self.check_dim(z)?;
        let m = self.a.m();
        Ok(CMatrix::from_fn(m, |i, j| self.jacobian[i * m + j].eval(z)))
    }

    /// The factored determinant evaluated directly at `z`.
    pub fn closed_form_det(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check_dim(z)?;
        let m = self.a.m();
        let mut acc = Complex64::new(self.inv_multinomial, 0.0);
        for j in 0..m {
            acc *= (-z[j]).powu(self.a.get(j));
            for k in (0..m).filter(|&k| k != j) {
                acc *= (z[k] - z[j]).powu(self.a.get(j));
            }
        }
        Ok(acc)
    }
}

pub fn eval_theta_numeric(a: &MultiIndex, z: &ComplexPoint) -> Result<ComplexPoint> {
    ComplexPoint::new(ThetaMap::new(a).eval(z.coords())?)
}

pub fn eval_jacobian_numeric(a: &MultiIndex, z: &ComplexPoint) -> Result<CMatrix> {
    ThetaMap::new(a).jacobian(z.coords())
}

/// `D(z) / (n; a)` at a rational point, exactly.
pub fn closed_form_det_exact(a: &MultiIndex, z: &[BigRational]) -> Result<BigRational> {
    if z.len() != a.m() {
        return Err(Error::DimensionMismatch {
            expected: a.m(),
            found: z.len(),
        });
    }
    let m = a.m();
    let mut acc = inv_multinomial(a);
    for j in 0..m {
        acc *= num_traits::pow(-z[j].clone(), a.get(j) as usize);
        for k in (0..m).filter(|&k| k != j) {
            acc *= num_traits::pow(&z[k] - &z[j], a.get(j) as usize);
        }
    }
    Ok(acc)
}

/// Whether `det J_a` vanishes identically after each substitution
/// `z_j = 0` and `z_j = z_k` (`j != k`).
pub fn determinant_vanishes_on_degenerate_loci(det: &MultiPoly) -> bool {
    let m = det.arity();
    for j in 0..m {
        if !det
            .substitute_var(j, &MultiPoly::zero(m))
            .unwrap()
            .is_zero()
        {
            return false;
        }
        for k in (0..m).filter(|&k| k != j) {
            if !det
                .substitute_var(j, &MultiPoly::var(m, k))
                .unwrap()
                .is_zero()
            {
                return false;
            }
        }
    }
    true
}
