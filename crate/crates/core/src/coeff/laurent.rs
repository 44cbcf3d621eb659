use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::text;
use super::Ring;

/// An integer Laurent polynomial in q. Stored coefficients are never zero, so
/// equal polynomials compare bit-identical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::from(1))
    }

    pub fn monomial(exp: i64, coeff: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c.into())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
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
        LaurentPoly {
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
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Multiplies by q^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e + k, c.clone())).collect(),
        }
    }

    /// Substitutes q -> q^{-1}.
    pub fn invert_q(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (-*e, c.clone())).collect(),
        }
    }

    /// gcd of all integer coefficients (zero polynomial has content zero).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.coeffs.values() {
            g = g.gcd(c);
        }
        g
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.max_exp().map(|e| self.coeff(e)).unwrap_or_else(BigInt::zero)
    }

    /// Dense coefficient vector of q^{-min_exp} * self, lowest degree first.
    fn dense(&self) -> Vec<BigInt> {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo..=hi).map(|e| self.coeff(e)).collect(),
            _ => vec![],
        }
    }

    fn from_dense(lo: i64, dense: &[BigInt]) -> Self {
        Self::from_terms(dense.iter().enumerate().map(|(i, c)| (lo + i as i64, c.clone())))
    }

    /// Exact division; errors if `rhs` does not divide `self`.
    pub fn exact_div(&self, rhs: &Self) -> crate::Result<Self> {
        if rhs.is_zero() {
            return Err(crate::Error::Ring("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let lo = self.min_exp().unwrap() - rhs.min_exp().unwrap();
        let mut rem = self.dense();
        let div = rhs.dense();
        if rem.len() < div.len() {
            return Err(crate::Error::Ring("inexact polynomial division".into()));
        }
        let qlen = rem.len() - div.len() + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        let lead = div.last().unwrap().clone();
        for k in (0..qlen).rev() {
            let top = rem[k + div.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return Err(crate::Error::Ring("inexact polynomial division".into()));
            }
            quot[k] = qc.clone();
            for (i, d) in div.iter().enumerate() {
                rem[k + i] -= &qc * d;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(crate::Error::Ring("inexact polynomial division".into()));
        }
        Ok(Self::from_dense(lo, &quot))
    }

    fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c == BigInt::from(1) {
            return self.shift(-self.min_exp().unwrap_or(0));
        }
        let p = self.shift(-self.min_exp().unwrap_or(0));
        LaurentPoly {
            coeffs: p.coeffs.iter().map(|(e, k)| (*e, k / &c)).collect(),
        }
    }

    /// Primitive gcd as one-variable polynomials, valuation stripped; q-power
    /// factors are units in the Laurent ring and so are not part of the gcd.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.primitive_part();
        }
        if rhs.is_zero() {
            return self.primitive_part();
        }
        let mut a = self.primitive_part();
        let mut b = rhs.primitive_part();
        // primitive polynomial remainder sequence
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading_coeff().is_negative() {
            a = a.neg();
        }
        a
    }

    /// Pseudo-remainder of valuation-zero polynomials.
    fn pseudo_rem(&self, rhs: &Self) -> Self {
        let db = rhs.max_exp().unwrap_or(0);
        let mut a = self.clone();
        let lead_b = rhs.leading_coeff();
        loop {
            let da = match a.max_exp() {
                Some(d) => d,
                None => return a,
            };
            if da < db {
                return a;
            }
            let lead_a = a.leading_coeff();
            a = a.scale(&lead_b).sub(&rhs.shift(da - db).scale(&lead_a));
        }
    }
}

impl Ring for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        LaurentPoly::add(self, rhs)
    }
    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        LaurentPoly::mul(self, rhs)
    }
    fn from_laurent(p: &LaurentPoly) -> Self {
        p.clone()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::fmt_terms(f, self.terms().map(|(e, c)| (e, c.clone())))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let terms = text::parse_terms(s, 'q')?;
        Ok(Self::from_terms(terms))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["q^-2 + 1 + q^2", "-q + q^3", "0", "5", "2q^-1 - 3q^4", "q"] {
            let v = p(s);
            assert_eq!(p(&v.to_string()), v, "{s}");
        }
        assert_eq!(p("q^-2 + 1 + q^2").to_string(), "q^-2 + 1 + q^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let a = p("q^-1 + q").mul(&p("q^-2 + 1 + q^2"));
        let q3 = a.exact_div(&p("q^-1 + q")).unwrap();
        assert_eq!(q3, p("q^-2 + 1 + q^2"));
        assert!(p("1 + q").exact_div(&p("1 + q^2")).is_err());
    }

    #[test]
    fn gcd_primitive() {
        let a = p("q^-1 + q").mul(&p("1 + q^3")).scale(&6.into());
        let b = p("q^-1 + q").mul(&p("1 + q")).scale(&4.into());
        let g = a.gcd(&b);
        // gcd is primitive, valuation-free and monic up to sign: (1+q^2)
        assert_eq!(g, p("1 + q^2"));
    }
}
