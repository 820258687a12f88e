use std::cmp::Ordering;

/// A monomial `z_1^e_1 * ... * z_m^e_m`, stored as its exponent vector.
///
/// **Ordering.** Monomials are compared lexicographically with the variables
/// ranked `z_1 < z_2 < ... < z_m`: the exponent of `z_m` is compared first,
/// then that of `z_{m-1}`, and so on down to `z_1`. This is the reverse of the
/// usual "first variable is biggest" convention. For example in three
/// variables `z_1^9 z_2^6 z_3^3 < z_1 z_2^2 z_3^4`, since the exponent of `z_3`
/// decides.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn one(arity: usize) -> Self {
        Self {
            exponents: vec![0; arity],
        }
    }

    /// `z_index^power` (0-based index).
    pub fn var_power(arity: usize, index: usize, power: u32) -> Self {
        let mut exponents = vec![0; arity];
        exponents[index] = power;
        Self { exponents }
    }

    pub fn arity(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.exponents[index]
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), other.arity());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.arity(), other.arity());
        self.exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial::new)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial {
            exponents: self.exponents.iter().map(|x| x * e).collect(),
        }
    }

    /// Copy into a ring with more variables; the new variables get exponent 0.
    pub fn embed(&self, arity: usize) -> Monomial {
        assert!(arity >= self.arity());
        let mut exponents = self.exponents.clone();
        exponents.resize(arity, 0);
        Monomial { exponents }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exponents
            .iter()
            .rev()
            .zip(other.exponents.iter().rev())
            .map(|(a, b)| a.cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.arity().cmp(&other.arity()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
