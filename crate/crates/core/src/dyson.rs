//! Constant terms of the Dyson product `Π_{j≠k} (1 - z_j/z_k)^{a_j}`.
//!
//! Laurent polynomials are never formed. Clearing denominators gives
//! `Π_{j≠k} (1 - z_j/z_k)^{a_j} = N(z) / Π_k z_k^{n - a_k}` with
//! `N(z) = Π_{j≠k} (z_k - z_j)^{a_j}`, so the constant term is the
//! coefficient of `Π_k z_k^{n - a_k}` in `N`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::critical_map::{build_bundle, closed_form_d, SizeGuard};
use crate::error::Result;
use crate::multi_index::{multinomial, MultiIndex};
use crate::poly_core::{Monomial, MultiPoly};

#[derive(Clone, Debug)]
pub struct DysonInstance {
    pub a: MultiIndex,
    /// `Π_{j≠k} (z_k - z_j)^{a_j}`
    pub numerator: MultiPoly,
    /// `n - a_k` for each `k`
    pub denominator_exponents: Vec<u32>,
}

impl DysonInstance {
    pub fn new(a: &MultiIndex) -> Self {
        let m = a.m();
        let z = |i| MultiPoly::var(m, i);
        let mut numerator = MultiPoly::one(m);
        for j in 0..m {
            for k in (0..m).filter(|&k| k != j) {
                numerator = &numerator * &(&z(k) - &z(j)).pow(a.get(j));
            }
        }
        Self {
            a: a.clone(),
            numerator,
            denominator_exponents: a.parts().iter().map(|&ak| a.n() - ak).collect(),
        }
    }

    pub fn denominator(&self) -> Monomial {
        Monomial::new(self.denominator_exponents.clone())
    }

    pub fn constant_term(&self) -> BigRational {
        self.numerator.coefficient_of(&self.denominator())
    }
}

/// Constant term of the Dyson product for `a`.
pub fn dyson_constant_term(a: &MultiIndex, guard: &SizeGuard) -> Result<BigInt> {
    guard.check(a)?;
    let ct = DysonInstance::new(a).constant_term();
    debug_assert!(ct.is_integer());
    Ok(ct.to_integer())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DysonRecord {
    pub a: MultiIndex,
    pub constant_term: String,
    pub multinomial: String,
    pub equal: bool,
}

pub fn dyson_report(a: &MultiIndex, guard: &SizeGuard) -> Result<DysonRecord> {
    let ct = dyson_constant_term(a, guard)?;
    let mult = BigInt::from(multinomial(a.n(), a)?);
    Ok(DysonRecord {
        a: a.clone(),
        constant_term: ct.to_string(),
        multinomial: mult.to_string(),
        equal: ct == mult,
    })
}

fn sign_pow(e: u64) -> BigRational {
    if e.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Whether `Π_j z_j^n` appears in `det J_a` with coefficient `(-1)^n`.
pub fn detja_coefficient_check(a: &MultiIndex, guard: &SizeGuard) -> Result<bool> {
    guard.check(a)?;
    let det = build_bundle(a).determinant();
    Ok(det.coefficient_of(&diagonal_monomial(a)) == sign_pow(a.n() as u64))
}

/// `Π_j z_j^n`.
pub fn diagonal_monomial(a: &MultiIndex) -> Monomial {
    Monomial::new(vec![a.n(); a.m()])
}

/// Step-by-step check of the reduction from `det J_a` to the Dyson product,
/// with every Laurent expression multiplied through by `Π_k z_k^{n-a_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionSteps {
    /// `D(z) = Π_j (-z_j)^{a_j} · N(z)`
    pub d_factors_through_numerator: bool,
    /// `(n; a) (-1)^n det J_a = Π_k z_k^{a_k} · N(z)`, i.e.
    /// `det J_a = (-1)^n/(n; a) · Π z_j^n · (Laurent product)` cleared
    pub cleared_identity_holds: bool,
    /// coefficient of `Π z_j^n` in `det J_a` equals `(-1)^n`
    pub coefficient_is_sign: bool,
    /// constant term equals the multinomial coefficient
    pub constant_term_is_multinomial: bool,
}

impl ReductionSteps {
    pub fn all_hold(&self) -> bool {
        self.d_factors_through_numerator
            && self.cleared_identity_holds
            && self.coefficient_is_sign
            && self.constant_term_is_multinomial
    }
}

pub fn check_reduction(a: &MultiIndex, guard: &SizeGuard) -> Result<ReductionSteps> {
    guard.check(a)?;
    let inst = DysonInstance::new(a);
    let det = build_bundle(a).determinant();
    let mult = BigRational::from_integer(BigInt::from(multinomial(a.n(), a)?));
    let sign = sign_pow(a.n() as u64);

    let signs_of_vars = MultiPoly::term(Monomial::new(a.parts().to_vec()), sign_pow(a.n() as u64));
    let d = closed_form_d(a);
    let d_factors_through_numerator = d == &signs_of_vars * &inst.numerator;

    let lhs = det.scale(&(&mult * &sign));
    let rhs = inst
        .numerator
        .mul_term(&Monomial::new(a.parts().to_vec()), &BigRational::one());
    let cleared_identity_holds = lhs == rhs;

    let coefficient_is_sign = det.coefficient_of(&diagonal_monomial(a)) == sign;
    let ct = inst.constant_term();
    Ok(ReductionSteps {
        d_factors_through_numerator,
        cleared_identity_holds,
        coefficient_is_sign,
        constant_term_is_multinomial: ct == mult && !ct.is_negative(),
    })
}
