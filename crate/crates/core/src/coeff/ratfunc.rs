use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{LaurentPoly, Ring};
use crate::{Error, Result};

/// A rational function in q with integer Laurent polynomial numerator and
/// denominator, kept in a normal form so that equality is structural:
/// common integer content and polynomial factors are cancelled, the
/// denominator has valuation zero and positive leading coefficient.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Ring("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: LaurentPoly::one() };
        }
        // strip the denominator's q-valuation (a unit)
        let v = den.min_exp().unwrap();
        let mut num = num.shift(-v);
        let mut den = den.shift(-v);
        // cancel the primitive polynomial gcd
        let g = num.gcd(&den);
        if g.max_exp() != Some(0) || g.coeff(0).abs() != BigInt::from(1) {
            num = num.exact_div(&g).expect("gcd divides numerator");
            den = den.exact_div(&g).expect("gcd divides denominator");
        }
        let v = den.min_exp().unwrap();
        num = num.shift(-v);
        den = den.shift(-v);
        // cancel integer content and fix the denominator sign
        let c = num.content().gcd(&den.content());
        if c > BigInt::from(1) {
            num = num
                .exact_div(&LaurentPoly::from_int(c.clone()))
                .expect("content divides");
            den = den.exact_div(&LaurentPoly::from_int(c)).expect("content divides");
        }
        if den.leading_coeff().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatFunc { num, den }
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        RatFunc { num: p.clone(), den: LaurentPoly::one() }
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::from_laurent(&LaurentPoly::from_int(c))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Ring("inverse of zero".into()));
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?))
    }

    /// Returns the Laurent polynomial if the denominator is 1.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        if self.den == LaurentPoly::one() {
            Some(&self.num)
        } else {
            None
        }
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        Self::from_int(0)
    }
    fn one() -> Self {
        Self::from_int(1)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        RatFunc::add(self, rhs)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        RatFunc::mul(self, rhs)
    }
    fn from_laurent(p: &LaurentPoly) -> Self {
        RatFunc::from_laurent(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for RatFunc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(pos) = split_slash(s) {
            let num = strip_parens(&s[..pos]).parse()?;
            let den = strip_parens(&s[pos + 1..]).parse()?;
            RatFunc::new(num, den)
        } else {
            Ok(RatFunc::from_laurent(&strip_parens(s).parse()?))
        }
    }
}

fn split_slash(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '/' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if let Some(t) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        t.trim()
    } else {
        s
    }
}

impl Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::quantum_integer;

    fn qi(n: i64) -> RatFunc {
        RatFunc::from_laurent(&quantum_integer(n).unwrap())
    }

    #[test]
    fn inverse_cancels() {
        let half = RatFunc::new(LaurentPoly::one(), quantum_integer(2).unwrap()).unwrap();
        assert_eq!(half.mul(&qi(2)), RatFunc::one());
    }

    #[test]
    fn normal_form_structural_equality() {
        let a = RatFunc::new("2 + 2q^2".parse().unwrap(), "2q".parse().unwrap()).unwrap();
        let b = RatFunc::new("q^-1 + q".parse().unwrap(), LaurentPoly::one()).unwrap();
        assert_eq!(a, b);
        let c = RatFunc::new("-1".parse().unwrap(), "-q^-1 - q".parse().unwrap()).unwrap();
        let d = RatFunc::new("1".parse().unwrap(), "q^-1 + q".parse().unwrap()).unwrap();
        assert_eq!(c, d);
    }

    // deterministic linear congruential generator for reproducible randoms
    fn lcg(state: &mut u64) -> u64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *state >> 33
    }

    fn random_poly(state: &mut u64) -> LaurentPoly {
        let nterms = 1 + (lcg(state) % 3) as i64;
        let mut p = LaurentPoly::zero();
        for _ in 0..nterms {
            let e = (lcg(state) % 7) as i64 - 3;
            let c = (lcg(state) % 9) as i64 - 4;
            p = p.add(&LaurentPoly::monomial(e, c.into()));
        }
        p
    }

    #[test]
    fn equality_agrees_with_cross_multiplication() {
        let mut st = 0x5eed_1234u64;
        let mut checked = 0;
        while checked < 200 {
            let (a, b, c, d) = (
                random_poly(&mut st),
                random_poly(&mut st),
                random_poly(&mut st),
                random_poly(&mut st),
            );
            if b.is_zero() || d.is_zero() {
                continue;
            }
            let x = RatFunc::new(a.clone(), b.clone()).unwrap();
            let y = RatFunc::new(c.clone(), d.clone()).unwrap();
            assert_eq!(x == y, a.mul(&d) == c.mul(&b));
            checked += 1;
        }
    }
}
