use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{text, LaurentPoly, RatFunc, Ring};
use crate::{Error, Result};

/// Sentinel truncation order for series known exactly at all orders.
pub const EXACT_ORDER: i64 = i64::MAX;

/// A power series bounded below in q-degree, known exactly for all exponents
/// strictly below `trunc`. Arithmetic tracks the honest truncation order of
/// its operands and never claims knowledge it cannot certify.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PowerSeries {
    min_exp: i64,
    coeffs: Vec<BigInt>,
    trunc: i64,
}

impl PowerSeries {
    pub fn zero(trunc: i64) -> Self {
        PowerSeries { min_exp: 0, coeffs: vec![], trunc }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>, trunc: i64) -> Self {
        let mut s = Self::zero(trunc);
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    pub fn from_laurent(p: &LaurentPoly, trunc: i64) -> Self {
        Self::from_terms(p.terms().map(|(e, c)| (e, c.clone())), trunc)
    }

    pub fn monomial(exp: i64, coeff: BigInt, trunc: i64) -> Self {
        Self::from_terms([(exp, coeff)], trunc)
    }

    pub fn truncation_order(&self) -> i64 {
        self.trunc
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        if exp < self.min_exp || exp - self.min_exp >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[(exp - self.min_exp) as usize].clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    fn add_term(&mut self, exp: i64, c: &BigInt) {
        if c.is_zero() || exp >= self.trunc {
            return;
        }
        if self.coeffs.is_empty() {
            self.min_exp = exp;
            self.coeffs.push(c.clone());
        } else {
            if exp < self.min_exp {
                let pad = (self.min_exp - exp) as usize;
                let mut v = vec![BigInt::zero(); pad];
                v.append(&mut self.coeffs);
                self.coeffs = v;
                self.min_exp = exp;
            }
            let idx = (exp - self.min_exp) as usize;
            if idx >= self.coeffs.len() {
                self.coeffs.resize(idx + 1, BigInt::zero());
            }
            self.coeffs[idx] += c;
        }
        self.normalize();
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    /// Re-truncates to a (possibly lower) order.
    pub fn truncated(&self, order: i64) -> Self {
        let order = order.min(self.trunc);
        Self::from_terms(self.terms().map(|(e, c)| (e, c.clone())), order)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let mut s = self.truncated(trunc);
        for (e, c) in rhs.terms() {
            s.add_term(e, c);
        }
        s
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        PowerSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            trunc: self.trunc,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // product coefficients are certain below min(ta + mb, tb + ma)
        let trunc = if self.trunc == EXACT_ORDER && rhs.trunc == EXACT_ORDER {
            EXACT_ORDER
        } else if self.is_zero() && self.trunc == EXACT_ORDER {
            EXACT_ORDER
        } else if rhs.is_zero() && rhs.trunc == EXACT_ORDER {
            EXACT_ORDER
        } else {
            let ta = self.trunc.saturating_add(rhs.min_exp);
            let tb = rhs.trunc.saturating_add(self.min_exp);
            ta.min(tb)
        };
        let mut s = Self::zero(trunc);
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                s.add_term(e1 + e2, &(c1 * c2));
            }
        }
        s
    }

    /// Equality of all coefficients below the given order; both series must
    /// certify that order.
    pub fn agrees_to(&self, rhs: &Self, order: i64) -> bool {
        if self.trunc < order || rhs.trunc < order {
            return false;
        }
        self.truncated(order) == rhs.truncated(order)
    }

    /// The series as a Laurent polynomial, if exact.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        if self.trunc == EXACT_ORDER {
            Some(LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, c.clone()))))
        } else {
            None
        }
    }
}

impl Ring for PowerSeries {
    fn zero() -> Self {
        PowerSeries::zero(EXACT_ORDER)
    }
    fn one() -> Self {
        PowerSeries::monomial(0, BigInt::from(1), EXACT_ORDER)
    }
    fn is_zero(&self) -> bool {
        PowerSeries::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        PowerSeries::add(self, rhs)
    }
    fn neg(&self) -> Self {
        PowerSeries::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        PowerSeries::mul(self, rhs)
    }
    fn from_laurent(p: &LaurentPoly) -> Self {
        PowerSeries::from_laurent(p, EXACT_ORDER)
    }
}

/// Expands a rational function as a power series to all exponents < `order`.
/// The denominator's lowest coefficient must be a unit.
pub fn expand(r: &RatFunc, order: i64) -> Result<PowerSeries> {
    let num = r.numerator();
    let den = r.denominator();
    if den.is_zero() {
        return Err(Error::Ring("zero denominator".into()));
    }
    if num.is_zero() {
        return Ok(PowerSeries::zero(order));
    }
    let dv = den.min_exp().unwrap();
    let lead = den.coeff(dv);
    if lead.abs() != BigInt::from(1) {
        return Err(Error::Ring(
            "denominator is not invertible as a bounded-below series".into(),
        ));
    }
    let nv = num.min_exp().unwrap();
    let shift = nv - dv;
    // long division of q^{-nv} num by q^{-dv} den, both with unit constant term
    let mut rem: Vec<BigInt> = {
        let hi = num.max_exp().unwrap();
        (nv..=hi).map(|e| num.coeff(e)).collect()
    };
    let den_dense: Vec<BigInt> = {
        let hi = den.max_exp().unwrap();
        (dv..=hi).map(|e| den.coeff(e)).collect()
    };
    let steps = (order - shift).max(0) as usize;
    let mut out = PowerSeries::zero(order);
    rem.resize(rem.len().max(steps + den_dense.len()), BigInt::zero());
    for k in 0..steps {
        let c = &rem[k] * &lead; // lead is ±1, so this divides exactly
        if !c.is_zero() {
            out.add_term(shift + k as i64, &c);
            for (i, d) in den_dense.iter().enumerate() {
                let v = &c * d;
                rem[k + i] -= v;
            }
        }
    }
    Ok(out)
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::fmt_terms(f, self.terms().map(|(e, c)| (e, c.clone())))?;
        if self.trunc != EXACT_ORDER {
            write!(f, " + O(q^{})", self.trunc)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for PowerSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (body, trunc) = match s.split_once(" + O(q^") {
            Some((b, t)) => {
                let t = t
                    .strip_suffix(')')
                    .ok_or_else(|| serde::de::Error::custom("bad series tail"))?;
                (b, t.parse::<i64>().map_err(serde::de::Error::custom)?)
            }
            None => (s.as_str(), EXACT_ORDER),
        };
        let p: LaurentPoly = body.parse().map_err(serde::de::Error::custom)?;
        Ok(PowerSeries::from_laurent(&p, trunc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::quantum_integer;

    fn qn(n: i64) -> RatFunc {
        RatFunc::from_laurent(&quantum_integer(n).unwrap())
    }

    #[test]
    fn expand_identity() {
        let s = expand(&RatFunc::one(), 5).unwrap();
        assert_eq!(s, PowerSeries::monomial(0, 1.into(), 5));
    }

    #[test]
    fn expand_minus_inverse_two() {
        // -1/[2] = -q + q^3 - q^5 + q^7 - ...
        let r = RatFunc::one().neg().div(&qn(2)).unwrap();
        let s = expand(&r, 8).unwrap();
        let expected = PowerSeries::from_terms(
            [(1, (-1).into()), (3, 1.into()), (5, (-1).into()), (7, 1.into())],
            8,
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn expand_two_over_three_against_long_division_oracle() {
        // independent oracle: s solves (1 + q^2 + q^4) s = q + q^3, i.e.
        // s_k = rhs_k - s_{k-2} - s_{k-4}
        let order = 16;
        let mut oracle = vec![0i64; order as usize];
        for k in 0..order as usize {
            let mut v = i64::from(k == 1) + i64::from(k == 3);
            if k >= 2 {
                v -= oracle[k - 2];
            }
            if k >= 4 {
                v -= oracle[k - 4];
            }
            oracle[k] = v;
        }
        let expected = PowerSeries::from_terms(
            oracle
                .iter()
                .enumerate()
                .map(|(k, c)| (k as i64, BigInt::from(*c))),
            order,
        );
        let r = qn(2).div(&qn(3)).unwrap();
        let s = expand(&r, order).unwrap();
        assert_eq!(s, expected);
        // frozen values from the oracle
        assert_eq!(
            s,
            PowerSeries::from_terms(
                [
                    (1, 1.into()),
                    (5, (-1).into()),
                    (7, 1.into()),
                    (11, (-1).into()),
                    (13, 1.into()),
                ],
                order
            )
        );
        // re-multiplying by the denominator reproduces the numerator
        let den = PowerSeries::from_laurent(&quantum_integer(3).unwrap(), EXACT_ORDER);
        let back = s.mul(&den);
        let num = PowerSeries::from_laurent(&quantum_integer(2).unwrap(), back.truncation_order());
        assert_eq!(back, num);
    }

    #[test]
    fn truncation_consistency() {
        let r = qn(3).div(&qn(5)).unwrap();
        let long = expand(&r, 20).unwrap();
        let short = expand(&r, 9).unwrap();
        assert_eq!(long.truncated(9), short);
    }

    #[test]
    fn remultiplication_property() {
        for (a, b) in [(1, 2), (2, 3), (3, 4), (2, 5), (4, 5)] {
            let r = qn(a).div(&qn(b)).unwrap();
            let s = expand(&r, 24).unwrap();
            let back = s.mul(&PowerSeries::from_laurent(&quantum_integer(b).unwrap(), EXACT_ORDER));
            let num = PowerSeries::from_laurent(&quantum_integer(a).unwrap(), back.truncation_order());
            assert_eq!(back, num, "[{a}]/[{b}]");
        }
    }
}
