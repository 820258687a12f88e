//! Derivative sequences and antiderivatives of products.
//!
//! A derivative sequence is `(f_0, f_1, ...)` in `R[z]` with `deg f_k = k` and
//! `f_k' = f_{k-1}`; terms with negative index are zero. Given two such
//! sequences the alternating sum
//! `r = Σ_{i=0..b} (-1)^i f_{a+1+i} g_{b-i}` is an antiderivative of
//! `f_a g_b`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::critical_map::critical_product;
use crate::error::{Error, Result};
use crate::multi_index::{factorial, multinomial, MultiIndex};
use crate::poly_core::{MultiPoly, UniPoly};

fn inv_factorial(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(factorial(k)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// `f_k(w) = (w - c)^k / k!` with `c = z_{i+1}` or `c = 0` for `None`.
    ShiftedPower { center: Option<usize> },
    /// The sequence containing `g_{n-a_j} = Π_{l != j} (w - z_l)^{a_l} / a_l!`;
    /// lower terms are its derivatives, higher ones its antiderivatives from 0.
    ProductFamily { a: MultiIndex, excluded: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeSequence {
    arity: usize,
    kind: SequenceKind,
}

impl DerivativeSequence {
    pub fn shifted_power(arity: usize, center: Option<usize>) -> Result<Self> {
        if let Some(c) = center {
            if c >= arity {
                return Err(Error::VariableOutOfRange { index: c, arity });
            }
        }
        Ok(Self {
            arity,
            kind: SequenceKind::ShiftedPower { center },
        })
    }

    pub fn product_family(a: &MultiIndex, excluded: usize) -> Result<Self> {
        if excluded >= a.m() {
            return Err(Error::VariableOutOfRange {
                index: excluded,
                arity: a.m(),
            });
        }
        Ok(Self {
            arity: a.m(),
            kind: SequenceKind::ProductFamily {
                a: a.clone(),
                excluded,
            },
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    /// The `k`-th term; zero for negative `k`.
    pub fn term(&self, k: i64) -> UniPoly {
        if k < 0 {
            return UniPoly::zero(self.arity);
        }
        let k = k as u32;
        match &self.kind {
            SequenceKind::ShiftedPower { center } => {
                let base = match center {
                    Some(c) => UniPoly::linear_factor(self.arity, *c),
                    None => UniPoly::z(self.arity),
                };
                base.pow(k).scale(&inv_factorial(k))
            }
            SequenceKind::ProductFamily { a, excluded } => {
                let anchor = a.n() - a.get(*excluded);
                let mut p = UniPoly::one(self.arity);
                for (l, &al) in a.parts().iter().enumerate() {
                    if l != *excluded {
                        p = &p
                            * &UniPoly::linear_factor(self.arity, l)
                                .pow(al)
                                .scale(&inv_factorial(al));
                    }
                }
                if k <= anchor {
                    for _ in k..anchor {
                        p = p.derivative();
                    }
                } else {
                    for _ in anchor..k {
                        p = p.integrate();
                    }
                }
                p
            }
        }
    }
}

/// `Σ_{i=0..b} (-1)^i f_{a+1+i} · g_{b-i}`, an antiderivative of `f_a · g_b`.
pub fn antiderivative_of_product(
    f: &DerivativeSequence,
    g: &DerivativeSequence,
    a: u32,
    b: u32,
) -> Result<UniPoly> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: g.arity(),
        });
    }
    let mut r = UniPoly::zero(f.arity());
    for i in 0..=b {
        let t = &f.term((a + 1 + i) as i64) * &g.term((b - i) as i64);
        r = if i % 2 == 0 { &r + &t } else { &r - &t };
    }
    Ok(r)
}

/// Closed forms for `p(z) = ∫_0^z w^a (w - z_0)^b dw` evaluated at `z_0`,
/// as polynomials in the single variable `z_0` (written `z1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFactorValue {
    /// `(-1)^b a! b! / (n+1)! · z_0^(n+1)`
    pub value: MultiPoly,
    /// `(-1)^b a! b! / n! · z_0^n`
    pub derivative: MultiPoly,
}

pub fn two_factor_value(a: u32, b: u32) -> Result<TwoFactorValue> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidMultiIndex(
            "two-factor degrees must be positive".into(),
        ));
    }
    let n = a + b;
    let sign = if b.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let ab = BigInt::from(factorial(a) * factorial(b));
    let z0 = MultiPoly::var(1, 0);
    let value = z0.pow(n + 1).scale(&BigRational::new(
        &sign * &ab,
        BigInt::from(factorial(n + 1)),
    ));
    let derivative = z0
        .pow(n)
        .scale(&BigRational::new(sign * ab, BigInt::from(factorial(n))));
    Ok(TwoFactorValue { value, derivative })
}

/// The same pair computed by integrating `w^a (w - z_0)^b` symbolically,
/// substituting `z = z_0` and differentiating in `z_0`.
pub fn two_factor_by_integration(a: u32, b: u32) -> Result<TwoFactorValue> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidMultiIndex(
            "two-factor degrees must be positive".into(),
        ));
    }
    let integrand = &UniPoly::z(1).pow(a) * &UniPoly::linear_factor(1, 0).pow(b);
    let value = integrand.integrate().substitute(0)?;
    let derivative = value.partial_derivative(0)?;
    Ok(TwoFactorValue { value, derivative })
}

/// `p̃_a(z) = ∫_0^z Π_k (w - z_k)^{a_k} / a_k! dw`.
pub fn tilde_p(a: &MultiIndex) -> UniPoly {
    let scale = a
        .parts()
        .iter()
        .fold(BigRational::one(), |acc, &k| acc * inv_factorial(k));
    critical_product(a).scale(&scale).integrate()
}

fn check_emphasis_index(a: &MultiIndex, j: usize) -> Result<()> {
    if j >= a.m() {
        return Err(Error::VariableOutOfRange {
            index: j,
            arity: a.m(),
        });
    }
    Ok(())
}

/// `p̃_{a,j}` from the explicit double sum
///
/// `Σ_i (-1)^i (z-z_j)^{a_j+i+1}/(a_j+i+1)! · Σ_{|b|=i, b_j=0} (i; b) Π_{l≠j} (z-z_l)^{a_l-b_l}/(a_l-b_l)!`
///
/// where terms with some `b_l > a_l` vanish (they are derivatives past the
/// degree of `(z-z_l)^{a_l}`). `j` is 0-based.
pub fn emphasized_antiderivative(a: &MultiIndex, j: usize) -> Result<UniPoly> {
    check_emphasis_index(a, j)?;
    let m = a.m();
    let aj = a.get(j);
    let top = a.n() - aj;
    let factors: Vec<UniPoly> = (0..m).map(|l| UniPoly::linear_factor(m, l)).collect();
    let others: Vec<usize> = (0..m).filter(|&l| l != j).collect();

    let mut total = UniPoly::zero(m);
    let mut b = vec![0u32; m];
    for i in 0..=top {
        let mut inner = UniPoly::zero(m);
        for_each_bounded_composition(i, &others, a, &mut b, &mut |b| {
            let bi = MultiIndex::new(b.iter().copied().filter(|&x| x > 0).collect()).ok();
            let coeff = match bi {
                Some(bi) => BigRational::from_integer(BigInt::from(multinomial(i, &bi).unwrap())),
                None => BigRational::one(),
            };
            let mut prod = UniPoly::one(m).scale(&coeff);
            for &l in &others {
                let e = a.get(l) - b[l];
                prod = &prod * &factors[l].pow(e).scale(&inv_factorial(e));
            }
            inner = &inner + &prod;
        });
        let e = aj + i + 1;
        let lead = factors[j].pow(e).scale(&inv_factorial(e));
        let t = &lead * &inner;
        total = if i % 2 == 0 { &total + &t } else { &total - &t };
    }
    Ok(total)
}

/// Calls `f` with every `b` supported on `slots`, `Σ b = total`, `b_l <= a_l`.
fn for_each_bounded_composition(
    total: u32,
    slots: &[usize],
    a: &MultiIndex,
    b: &mut Vec<u32>,
    f: &mut dyn FnMut(&[u32]),
) {
    match slots.split_first() {
        None => {
            if total == 0 {
                f(b);
            }
        }
        Some((&l, rest)) => {
            for x in 0..=total.min(a.get(l)) {
                b[l] = x;
                for_each_bounded_composition(total - x, rest, a, b, f);
            }
            b[l] = 0;
        }
    }
}

/// `p̃_{a,j}` by the alternating-sum antiderivative with `f_k = (w-z_j)^k/k!`
/// and the product family `g` anchored at `g_{n-a_j}`.
pub fn emphasized_antiderivative_iterated(a: &MultiIndex, j: usize) -> Result<UniPoly> {
    check_emphasis_index(a, j)?;
    let f = DerivativeSequence::shifted_power(a.m(), Some(j))?;
    let g = DerivativeSequence::product_family(a, j)?;
    antiderivative_of_product(&f, &g, a.get(j), a.n() - a.get(j))
}

/// Outcome of checking the structural facts about `p̃_{a,j}`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EmphasisReport {
    pub j: usize,
    /// derivative equals `Π (z-z_k)^{a_k}/a_k!`
    pub derivative_ok: bool,
    /// `p̃_{a,j}(z_j) = 0`
    pub vanishes_at_own_point: bool,
    /// `z_j^{a_j+1} | p̃_{a,j}(0)`
    pub value_at_zero_divisible: bool,
    /// `(z_i - z_j)^{a_i+a_j+1} | p̃_{a,j}(z_i)` for all `i != j`
    pub cross_values_divisible: bool,
    /// explicit double sum equals the iterated construction
    pub closed_form_matches: bool,
    /// `p̃_a(z) = p̃_{a,j}(z) - p̃_{a,j}(0)`
    pub recovers_tilde_p: bool,
}

impl EmphasisReport {
    pub fn all_hold(&self) -> bool {
        self.derivative_ok
            && self.vanishes_at_own_point
            && self.value_at_zero_divisible
            && self.cross_values_divisible
            && self.closed_form_matches
            && self.recovers_tilde_p
    }
}

pub fn check_emphasis(a: &MultiIndex, j: usize) -> Result<EmphasisReport> {
    let m = a.m();
    let explicit = emphasized_antiderivative(a, j)?;
    let iterated = emphasized_antiderivative_iterated(a, j)?;
    let tp = tilde_p(a);

    let derivative_ok = explicit.derivative() == tp.derivative();
    let vanishes_at_own_point = explicit.substitute(j)?.is_zero();

    let at_zero = explicit.eval_zero();
    let zj_power = MultiPoly::var(m, j).pow(a.get(j) + 1);
    let value_at_zero_divisible = at_zero.div_exact(&zj_power)?.is_some();

    let mut cross_values_divisible = true;
    for i in (0..m).filter(|&i| i != j) {
        let diff = &MultiPoly::var(m, i) - &MultiPoly::var(m, j);
        let d = diff.pow(a.get(i) + a.get(j) + 1);
        if explicit.substitute(i)?.div_exact(&d)?.is_none() {
            cross_values_divisible = false;
        }
    }

    let shifted = &explicit - &UniPoly::constant(at_zero);
    Ok(EmphasisReport {
        j,
        derivative_ok,
        vanishes_at_own_point,
        value_at_zero_divisible,
        cross_values_divisible,
        closed_form_matches: explicit == iterated,
        recovers_tilde_p: shifted == tp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::rat;

    #[test]
    fn sequences_differentiate_down() {
        let a: MultiIndex = "2,1,2".parse().unwrap();
        let seqs = [
            DerivativeSequence::shifted_power(3, None).unwrap(),
            DerivativeSequence::shifted_power(3, Some(1)).unwrap(),
            DerivativeSequence::product_family(&a, 0).unwrap(),
            DerivativeSequence::product_family(&a, 2).unwrap(),
        ];
        for s in &seqs {
            assert!(s.term(-1).is_zero());
            for k in 0..=10i64 {
                let fk = s.term(k);
                assert_eq!(fk.degree(), Some(k as usize));
                assert_eq!(fk.derivative(), s.term(k - 1), "k={k}");
            }
        }
    }

    #[test]
    fn index_errors() {
        let a: MultiIndex = "2,3".parse().unwrap();
        assert!(DerivativeSequence::shifted_power(2, Some(2)).is_err());
        assert!(emphasized_antiderivative(&a, 2).is_err());
        assert!(two_factor_value(0, 3).is_err());
    }

    #[test]
    fn five_three_example() {
        // (f_6 g_3) - (f_7 g_2) + (f_8 g_1) - (f_9 g_0)
        let f = DerivativeSequence::shifted_power(2, Some(0)).unwrap();
        let g = DerivativeSequence::shifted_power(2, Some(1)).unwrap();
        let r = antiderivative_of_product(&f, &g, 5, 3).unwrap();
        let expect = &(&(&(&f.term(6) * &g.term(3)) - &(&f.term(7) * &g.term(2)))
            + &(&f.term(8) * &g.term(1)))
            - &(&f.term(9) * &g.term(0));
        assert_eq!(r, expect);
        assert_eq!(r.derivative(), &f.term(5) * &g.term(3));
        // the swapped construction differs by a constant
        let r2 = antiderivative_of_product(&g, &f, 3, 5).unwrap();
        assert_eq!((&r - &r2).degree().unwrap_or(0), 0);
    }

    #[test]
    fn single_term_and_origin_case() {
        let f = DerivativeSequence::shifted_power(1, None).unwrap();
        let g = DerivativeSequence::shifted_power(1, Some(0)).unwrap();
        let r = antiderivative_of_product(&f, &g, 4, 0).unwrap();
        assert_eq!(r, &f.term(5) * &g.term(0));

        // f_1 f_1 = z^2, so the antiderivative is z^2/2 * z - z^3/6 = z^3/3
        let r = antiderivative_of_product(&f, &f, 1, 1).unwrap();
        assert_eq!(r, UniPoly::z(1).pow(3).scale(&rat(1, 3)));
        assert_eq!(r.derivative(), UniPoly::z(1).pow(2));
    }

    #[test]
    fn two_factor_examples() {
        let t = two_factor_value(1, 1).unwrap();
        assert_eq!(t.value, MultiPoly::var(1, 0).pow(3).scale(&rat(-1, 6)));
        assert_eq!(t.derivative, MultiPoly::var(1, 0).pow(2).scale(&rat(-1, 2)));
        let t = two_factor_value(2, 3).unwrap();
        assert_eq!(t.value, MultiPoly::var(1, 0).pow(6).scale(&rat(-1, 60)));
        assert_eq!(two_factor_by_integration(2, 3).unwrap(), t);
    }

    #[test]
    fn single_factor_emphasis() {
        for a1 in 1..5 {
            let a = MultiIndex::new(vec![a1]).unwrap();
            let e = a1 + 1;
            let expect = UniPoly::linear_factor(1, 0).pow(e).scale(&inv_factorial(e));
            assert_eq!(emphasized_antiderivative(&a, 0).unwrap(), expect);
        }
    }

    #[test]
    fn tilde_p_small() {
        let a = MultiIndex::new(vec![1]).unwrap();
        // z^2/2 - z1 z
        let expect = UniPoly::from_coeffs(
            1,
            vec![
                MultiPoly::zero(1),
                -MultiPoly::var(1, 0),
                MultiPoly::constant(1, rat(1, 2)),
            ],
        );
        assert_eq!(tilde_p(&a), expect);
        for s in ["2,3", "1,1,1", "3"] {
            assert!(tilde_p(&s.parse().unwrap()).eval_zero().is_zero());
        }
    }

    #[test]
    fn emphasis_observations_two_three() {
        let a: MultiIndex = "2,3".parse().unwrap();
        for j in 0..2 {
            let r = check_emphasis(&a, j).unwrap();
            assert!(r.all_hold(), "{r:?}");
        }
        let p = emphasized_antiderivative(&a, 0).unwrap();
        assert!(p.substitute(0).unwrap().is_zero());
        let d = (&MultiPoly::var(2, 1) - &MultiPoly::var(2, 0)).pow(6);
        assert!(p.substitute(1).unwrap().div_exact(&d).unwrap().is_some());
    }

    #[test]
    fn shifted_power_factor_divides_antiderivative() {
        let a: MultiIndex = "1,2".parse().unwrap();
        let g = DerivativeSequence::product_family(&a, 0).unwrap();
        let f = DerivativeSequence::shifted_power(2, Some(1)).unwrap();
        for (da, db) in [(0u32, 3u32), (2, 2), (3, 1)] {
            let r = antiderivative_of_product(&f, &g, da, db).unwrap();
            assert!(r.divisible_by_shifted_power(1, da + 1).unwrap());
        }
    }
}
