use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;

use super::{rat_int, Monomial, MultiPoly};
use crate::error::{Error, Result};

/// A polynomial in one distinguished variable `z` (or `w`) whose
/// coefficients are polynomials in `z_1..z_m`, i.e. an element of `R[z]`.
///
/// `coeffs[k]` multiplies `z^k`. The highest stored coefficient is nonzero;
/// the zero polynomial stores no coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    arity: usize,
    coeffs: Vec<MultiPoly>,
}

impl UniPoly {
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(arity: usize, coeffs: Vec<MultiPoly>) -> Self {
        assert!(
            coeffs.iter().all(|c| c.arity() == arity),
            "coefficient arity mismatch"
        );
        let mut p = Self { arity, coeffs };
        p.trim();
        p
    }

    pub fn constant(c: MultiPoly) -> Self {
        let arity = c.arity();
        Self::from_coeffs(arity, vec![c])
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(MultiPoly::one(arity))
    }

    /// The distinguished variable itself.
    pub fn z(arity: usize) -> Self {
        Self::from_coeffs(arity, vec![MultiPoly::zero(arity), MultiPoly::one(arity)])
    }

    /// `z - z_{index+1}`.
    pub fn linear_factor(arity: usize, index: usize) -> Self {
        Self::from_coeffs(
            arity,
            vec![-MultiPoly::var(arity, index), MultiPoly::one(arity)],
        )
    }

    /// `z - c` for a ring element `c`.
    pub fn shifted(c: &MultiPoly) -> Self {
        Self::from_coeffs(c.arity(), vec![-c, MultiPoly::one(c.arity())])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(MultiPoly::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> MultiPoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.arity))
    }

    pub fn leading_coeff(&self) -> Option<&MultiPoly> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.arity, self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn scale_poly(&self, c: &MultiPoly) -> Self {
        Self::from_coeffs(self.arity, self.coeffs.iter().map(|p| p * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(self.arity);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `d/dz`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&rat_int(k as u64)))
            .collect();
        Self::from_coeffs(self.arity, coeffs)
    }

    /// Term-wise antiderivative in `z` with zero constant term, i.e.
    /// `∫_0^z self(w) dw`.
    pub fn integrate(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(MultiPoly::zero(self.arity));
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&BigRational::new(1.into(), (k as u64 + 1).into())));
        }
        Self::from_coeffs(self.arity, coeffs)
    }

    /// Evaluate at `z = value` for a ring element `value` (Horner).
    pub fn eval_at(&self, value: &MultiPoly) -> Result<MultiPoly> {
        if value.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: value.arity(),
            });
        }
        let mut acc = MultiPoly::zero(self.arity);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        Ok(acc)
    }

    /// Replace `z` by the ring variable `z_{index+1}`.
    pub fn substitute(&self, index: usize) -> Result<MultiPoly> {
        if index >= self.arity {
            return Err(Error::VariableOutOfRange {
                index,
                arity: self.arity,
            });
        }
        let mut out = MultiPoly::zero(self.arity);
        for (k, c) in self.coeffs.iter().enumerate() {
            let shift = Monomial::var_power(self.arity, index, k as u32);
            out = &out + &c.mul_term(&shift, &BigRational::from_integer(1.into()));
        }
        Ok(out)
    }

    /// Value at `z = 0`.
    pub fn eval_zero(&self) -> MultiPoly {
        self.coeff(0)
    }

    /// Flatten into `Q[z_1..z_m, z]`, with `z` as the extra last variable
    /// (and therefore the largest one in the monomial order).
    pub fn to_multi(&self) -> MultiPoly {
        let arity = self.arity + 1;
        let mut out = MultiPoly::zero(arity);
        for (k, c) in self.coeffs.iter().enumerate() {
            let shift = Monomial::var_power(arity, self.arity, k as u32);
            let lifted = c.embed(arity);
            out = &out + &lifted.mul_term(&shift, &BigRational::from_integer(1.into()));
        }
        out
    }

    /// Whether `(z - z_{index+1})^power` divides this polynomial in `R[z]`.
    pub fn divisible_by_shifted_power(&self, index: usize, power: u32) -> Result<bool> {
        if index >= self.arity {
            return Err(Error::VariableOutOfRange {
                index,
                arity: self.arity,
            });
        }
        let flat = self.to_multi();
        let arity = flat.arity();
        let factor = &MultiPoly::var(arity, arity - 1) - &MultiPoly::var(arity, index);
        Ok(flat.div_exact(&factor.pow(power))?.is_some())
    }

    /// Whether `z^power` divides this polynomial in `R[z]`.
    pub fn divisible_by_z_power(&self, power: u32) -> bool {
        self.coeffs
            .iter()
            .take(power as usize)
            .all(MultiPoly::is_zero)
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in UniPoly addition");
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        UniPoly::from_coeffs(self.arity, coeffs)
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        assert_eq!(
            self.arity, rhs.arity,
            "arity mismatch in UniPoly subtraction"
        );
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        UniPoly::from_coeffs(self.arity, coeffs)
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        assert_eq!(
            self.arity, rhs.arity,
            "arity mismatch in UniPoly multiplication"
        );
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.arity);
        }
        let mut coeffs =
            vec![MultiPoly::zero(self.arity); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        UniPoly::from_coeffs(self.arity, coeffs)
    }
}

/// `∫_0^z q(w) dw`.
pub fn integrate_distinguished(q: &UniPoly) -> UniPoly {
    q.integrate()
}

pub fn substitute(p: &UniPoly, index: usize) -> Result<MultiPoly> {
    p.substitute(index)
}

impl UniPoly {
    pub fn is_monic(&self) -> bool {
        self.leading_coeff()
            .is_some_and(|c| c == &MultiPoly::one(self.arity))
    }

    pub fn leading_scalar(&self) -> Option<BigRational> {
        let lc = self.leading_coeff()?;
        if lc.total_degree() == Some(0) {
            Some(lc.constant_term())
        } else {
            None
        }
    }

    pub fn has_zero_constant_term(&self) -> bool {
        self.coeffs.first().is_none_or(MultiPoly::is_zero)
    }
}
