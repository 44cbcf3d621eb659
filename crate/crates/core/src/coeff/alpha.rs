use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::text;

/// An integer polynomial in the deformation parameter alpha (rendered `a`).
/// Non-negative exponents only; no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AlphaPoly {
    coeffs: BTreeMap<u32, BigInt>,
}

impl AlphaPoly {
    pub fn zero() -> Self {
        AlphaPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::from(1))
    }

    pub fn alpha() -> Self {
        Self::monomial(1, BigInt::from(1))
    }

    pub fn monomial(exp: u32, coeff: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        AlphaPoly { coeffs }
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c.into())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0) == BigInt::from(1)
    }

    pub fn coeff(&self, exp: u32) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    fn add_term(&mut self, exp: u32, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        AlphaPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlphaPoly {
            coeffs: self.coeffs.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Multiplies by alpha^k.
    pub fn shift(&self, k: u32) -> Self {
        AlphaPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e + k, c.clone())).collect(),
        }
    }

    /// Substitutes an integer for alpha (Horner over descending exponents).
    pub fn eval(&self, alpha: &BigInt) -> BigInt {
        let mut result = BigInt::zero();
        let mut last_exp: Option<u32> = None;
        for (e, c) in self.coeffs.iter().rev() {
            if let Some(le) = last_exp {
                for _ in 0..(le - e) {
                    result *= alpha;
                }
            }
            result += c;
            last_exp = Some(*e);
        }
        if let Some(le) = last_exp {
            for _ in 0..le {
                result *= alpha;
            }
        }
        result
    }

    /// True if the polynomial is a single monomial `c * alpha^e`.
    pub fn as_monomial(&self) -> Option<(u32, &BigInt)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }
}

impl fmt::Display for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::fmt_terms_var(f, self.terms().map(|(e, c)| (e as i64, c.clone())), 'a')
    }
}

impl fmt::Debug for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for AlphaPoly {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let terms = text::parse_terms(s, 'a')?;
        let mut out = Self::zero();
        for (e, c) in terms {
            if e < 0 {
                return Err(crate::Error::Parse("negative alpha exponent".into()));
            }
            out.add_term(e as u32, &c);
        }
        Ok(out)
    }
}

impl Serialize for AlphaPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AlphaPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let a = AlphaPoly::alpha();
        let p = a.mul(&a).add(&AlphaPoly::from_int(2)); // a^2 + 2
        assert_eq!(p.to_string(), "2 + a^2");
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(11));
        assert_eq!(p.eval(&BigInt::from(0)), BigInt::from(2));
        let r: AlphaPoly = "2 + a^2".parse().unwrap();
        assert_eq!(r, p);
    }
}
