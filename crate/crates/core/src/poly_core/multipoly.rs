use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Monomial;
use crate::error::{Error, Result};

/// Sparse polynomial over ℚ in `z_1..z_m`.
///
/// Terms live in a map sorted by the monomial order (see [`Monomial`]), so the
/// leading term is the last entry. Zero coefficients are never stored and the
/// zero polynomial is the empty map. Variable indices in this API are 0-based:
/// index `i` refers to `z_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, BigRational::one())
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        Self::term(Monomial::one(arity), c)
    }

    pub fn term(mono: Monomial, c: BigRational) -> Self {
        let arity = mono.arity();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Self { arity, terms }
    }

    /// The variable `z_{index+1}`.
    pub fn var(arity: usize, index: usize) -> Self {
        assert!(
            index < arity,
            "variable index {index} out of range for arity {arity}"
        );
        Self::term(Monomial::var_power(arity, index, 1), BigRational::one())
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = Self::zero(arity);
        for (m, c) in terms {
            assert_eq!(m.arity(), arity, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Result<(&Monomial, &BigRational)> {
        self.terms.last_key_value().ok_or(Error::ZeroPolynomial)
    }

    /// The leading term as a polynomial in its own right.
    pub fn leading_part(&self) -> Result<MultiPoly> {
        let (m, c) = self.leading_term()?;
        Ok(Self::term(m.clone(), c.clone()))
    }

    pub fn coefficient_of(&self, mono: &Monomial) -> BigRational {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient_of(&Monomial::one(self.arity))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// True if every term has total degree `deg` (the zero polynomial counts).
    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.keys().all(|m| m.total_degree() == deg)
    }

    /// Highest exponent of the given variable, `None` for the zero polynomial.
    pub fn degree_in(&self, index: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(index)).max()
    }

    fn add_term(&mut self, mono: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &MultiPoly) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        let mut out = MultiPoly::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn arith(&self, other: &MultiPoly, kind: ArithKind) -> Result<MultiPoly> {
        match kind {
            ArithKind::Add => self.checked_add(other),
            ArithKind::Sub => self.checked_sub(other),
            ArithKind::Mul => self.checked_mul(other),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.arity);
        }
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.arity);
        }
        MultiPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.mul(mono), x * c))
                .collect(),
        }
    }

    /// `self^e` by repeated squaring; `p^0 = 1`.
    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut result = MultiPoly::one(self.arity);
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return MultiPoly::term(m.pow(e), num_traits::pow(c.clone(), e as usize));
        }
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

    pub fn partial_derivative(&self, index: usize) -> Result<MultiPoly> {
        if index >= self.arity {
            return Err(Error::VariableOutOfRange {
                index,
                arity: self.arity,
            });
        }
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.exponent(index);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[index] -= 1;
            out.add_term(Monomial::new(exps), c * rat_int(e));
        }
        Ok(out)
    }

    /// Replace `z_{index+1}` by the polynomial `value`.
    pub fn substitute_var(&self, index: usize, value: &MultiPoly) -> Result<MultiPoly> {
        if index >= self.arity {
            return Err(Error::VariableOutOfRange {
                index,
                arity: self.arity,
            });
        }
        self.check_arity(value)?;
        let max_e = self.degree_in(index).unwrap_or(0) as usize;
        let mut powers = Vec::with_capacity(max_e + 1);
        powers.push(MultiPoly::one(self.arity));
        for k in 1..=max_e {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.exponent(index) as usize;
            let mut exps = m.exponents().to_vec();
            exps[index] = 0;
            let rest = Monomial::new(exps);
            for (pm, pc) in &powers[e].terms {
                out.add_term(rest.mul(pm), c * pc);
            }
        }
        Ok(out)
    }

    /// Copy into a ring with more variables.
    pub fn embed(&self, arity: usize) -> MultiPoly {
        MultiPoly {
            arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.embed(arity), c.clone()))
                .collect(),
        }
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: point.len(),
            });
        }
        Ok(FloatPoly::from_exact(self).eval(point))
    }

    /// Exact division by `divisor`.
    ///
    /// Runs multivariate long division under the monomial order against the
    /// single divisor. Returns `Some(q)` with `divisor * q == self` when the
    /// remainder is zero and `None` otherwise.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<Option<MultiPoly>> {
        self.check_arity(divisor)?;
        let (lead_m, lead_c) = divisor.leading_term().map_err(|_| Error::ZeroDivisor)?;
        let mut rem = self.clone();
        let mut quotient = MultiPoly::zero(self.arity);
        while let Some((m, c)) = rem.terms.last_key_value() {
            // A leading term that the divisor's leading monomial does not
            // divide lands in the remainder for good.
            let Some(qm) = m.div(lead_m) else {
                return Ok(None);
            };
            let qc = c / lead_c;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quotient.add_term(qm, qc);
        }
        Ok(Some(quotient))
    }

    /// Whether `divisor` divides `self`, with the quotient on success.
    pub fn divisible_by(&self, divisor: &MultiPoly) -> Result<(bool, Option<MultiPoly>)> {
        let q = self.div_exact(divisor)?;
        Ok((q.is_some(), q))
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn max_abs_coefficient(&self) -> BigRational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// Divides-predicate: `Ok((true, Some(q)))` iff `p = d * q`.
pub fn divides(d: &MultiPoly, p: &MultiPoly) -> Result<(bool, Option<MultiPoly>)> {
    p.divisible_by(d)
}

pub fn poly_arith(p: &MultiPoly, q: &MultiPoly, kind: ArithKind) -> Result<MultiPoly> {
    p.arith(q, kind)
}

/// A polynomial with coefficients rounded to `f64` once, for repeated
/// numeric evaluation.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    arity: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl FloatPoly {
    pub fn from_exact(p: &MultiPoly) -> Self {
        FloatPoly {
            arity: p.arity(),
            terms: p
                .terms()
                .map(|(m, c)| (m.exponents().to_vec(), c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        debug_assert_eq!(point.len(), self.arity);
        let mut acc = Complex64::zero();
        for (exps, c) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for (x, &e) in point.iter().zip(exps) {
                if e > 0 {
                    t *= x.powu(e);
                }
            }
            acc += t;
        }
        acc
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs)
            .expect("arity mismatch in MultiPoly addition")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs)
            .expect("arity mismatch in MultiPoly subtraction")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs)
            .expect("arity mismatch in MultiPoly multiplication")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> MultiPoly {
        MultiPoly::var(2, 0)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(2, 1)
    }
    fn c2(n: i64, d: i64) -> MultiPoly {
        MultiPoly::constant(2, rat(n, d))
    }

    #[test]
    fn ring_basics() {
        let p = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(p, &x().pow(2) - &y().pow(2));
        assert_eq!(&p + &MultiPoly::zero(2), p);
        let sq = (&y() - &x()).pow(2);
        let expect = &(&y().pow(2) - &(&c2(2, 1) * &(&x() * &y()))) + &x().pow(2);
        assert_eq!(sq, expect);
        assert!(x().checked_add(&MultiPoly::var(3, 0)).is_err());
    }

    #[test]
    fn pow_edge_cases() {
        assert_eq!((&x() - &y()).pow(0), MultiPoly::one(2));
        // (w - x)^2 in {x, y, w}
        let w = MultiPoly::var(3, 2);
        let xx = MultiPoly::var(3, 0);
        let got = (&w - &xx).pow(2);
        let two = MultiPoly::constant(3, rat(2, 1));
        let expect = &(&w.pow(2) - &(&two * &(&xx * &w))) + &xx.pow(2);
        assert_eq!(got, expect);
        // leading term of (x - y)^5 is -y^5
        let p = (&x() - &y()).pow(5);
        let (m, c) = p.leading_term().unwrap();
        assert_eq!(m, &Monomial::new(vec![0, 5]));
        assert_eq!(c, &rat(-1, 1));
    }

    #[test]
    fn derivatives() {
        let p = &x().pow(2) * &y();
        assert_eq!(p.partial_derivative(0).unwrap(), &c2(2, 1) * &(&x() * &y()));
        assert!(x().pow(3).partial_derivative(1).unwrap().is_zero());
        assert!(matches!(
            p.partial_derivative(2),
            Err(Error::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn leading_terms() {
        let z = |i| MultiPoly::var(3, i);
        let f = &MultiPoly::term(Monomial::new(vec![9, 6, 3]), rat(7, 1))
            - &MultiPoly::term(Monomial::new(vec![1, 2, 4]), rat(6, 1));
        let (m, c) = f.leading_term().unwrap();
        assert_eq!(m, &Monomial::new(vec![1, 2, 4]));
        assert_eq!(c, &rat(-6, 1));
        let five = MultiPoly::constant(3, rat(5, 1));
        let (m, c) = five.leading_term().unwrap();
        assert!(m.is_one());
        assert_eq!(c, &rat(5, 1));
        let _ = z(0);
        let g = &(&x().pow(2) * &y().pow(3)) * &(&x() - &y()).pow(5);
        let (m, c) = g.leading_term().unwrap();
        assert_eq!(m, &Monomial::new(vec![2, 8]));
        assert_eq!(c, &rat(-1, 1));
        assert!(matches!(
            MultiPoly::zero(2).leading_term(),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn divisibility() {
        let d = (&x() - &y()).pow(5);
        let q = &c2(-1, 10) * &(&x().pow(2) * &y().pow(3));
        let p = &q * &d;
        let (ok, got) = divides(&d, &p).unwrap();
        assert!(ok);
        assert_eq!(got.unwrap(), q);

        let z1 = MultiPoly::var(2, 0);
        let (ok, got) = divides(&z1, &(&z1 + &MultiPoly::one(2))).unwrap();
        assert!(!ok && got.is_none());

        let (ok, got) = divides(&z1.pow(2), &(&z1.pow(3) * &y())).unwrap();
        assert!(ok);
        assert_eq!(got.unwrap(), &z1 * &y());

        assert!(matches!(
            divides(&MultiPoly::zero(2), &z1),
            Err(Error::ZeroDivisor)
        ));
    }

    #[test]
    fn coefficients() {
        assert_eq!(
            MultiPoly::zero(1).coefficient_of(&Monomial::var_power(1, 0, 1)),
            rat(0, 1)
        );
    }

    #[test]
    fn substitution() {
        // x^2 y with y := x - 1
        let p = &x().pow(2) * &y();
        let got = p.substitute_var(1, &(&x() - &MultiPoly::one(2))).unwrap();
        assert_eq!(got, &x().pow(3) - &x().pow(2));
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(
            (proptest::collection::vec(0u32..3, 2), -4i64..5, 1i64..4),
            1..5,
        )
        .prop_map(|ts| {
            MultiPoly::from_terms(
                2,
                ts.into_iter()
                    .map(|(e, n, d)| (Monomial::new(e), rat(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn leading_term_is_multiplicative(p in small_poly(), q in small_poly()) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            let pq = &p * &q;
            let (mp, cp) = p.leading_term().unwrap();
            let (mq, cq) = q.leading_term().unwrap();
            let (m, c) = pq.leading_term().unwrap();
            prop_assert_eq!(m, &mp.mul(mq));
            prop_assert_eq!(c, &(cp * cq));
        }

        #[test]
        fn exact_division_recovers_factor(p in small_poly(), q in small_poly()) {
            prop_assume!(!p.is_zero());
            let prod = &p * &q;
            let got = prod.div_exact(&p).unwrap();
            prop_assert_eq!(got, Some(q));
        }

        #[test]
        fn successful_division_multiplies_back(p in small_poly(), d in small_poly()) {
            prop_assume!(!d.is_zero());
            if let (true, Some(q)) = divides(&d, &p).unwrap() {
                prop_assert_eq!(&d * &q, p);
            }
        }
    }
}
