//! Laurent polynomials in `q` with exact integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut terms = BTreeMap::new();
        let c: BigInt = coeff.into();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn q_plus_q_inv() -> Self {
        &LaurentPoly::monomial(1, 1) + &LaurentPoly::monomial(-1, 1)
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut out = LaurentPoly::zero();
        for &(e, c) in pairs {
            out.add_term(e, BigInt::from(c));
        }
        out
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, n: usize) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `q -> q^{-1}`.
    pub fn invert_q(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e, c) in &self.terms {
            out.add_term(-e, c.clone());
        }
        out
    }

    /// Sorted `(exponent, coefficient)` pairs.
    pub fn pairs(&self) -> Vec<(i64, BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c.clone())).collect()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        &LaurentPoly::zero() - self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.terms {
            if !first {
                write!(f, " ")?;
            }
            if c.sign() == num_bigint::Sign::Minus {
                write!(f, "-")?;
                if !first {
                    write!(f, " ")?;
                }
            } else if !first {
                write!(f, "+ ")?;
            }
            let mag = c.magnitude();
            use num_traits::One;
            match e {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "q")?,
                1 => write!(f, "{mag}q")?,
                _ if mag.is_one() => write!(f, "q^{e}")?,
                _ => write!(f, "{mag}q^{e}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_power() {
        let q0 = LaurentPoly::q_plus_q_inv();
        let sq = q0.pow(2);
        assert_eq!(sq, LaurentPoly::from_pairs(&[(-2, 1), (0, 2), (2, 1)]));
    }

    #[test]
    fn invert_q_involution() {
        let p = LaurentPoly::from_pairs(&[(-9, -1), (-5, 1), (-3, 1), (-1, 1)]);
        assert_eq!(p.invert_q().invert_q(), p);
    }
}
