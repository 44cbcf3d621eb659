//! Exact coefficient arithmetic: Laurent polynomials over the integers, the
//! polynomial ring in the deformation parameter alpha, rational functions in
//! q, and truncated power series bounded below in q-degree.

mod alpha;
mod laurent;
mod ratfunc;
mod series;
mod text;

pub use alpha::AlphaPoly;
pub use laurent::LaurentPoly;
pub use ratfunc::RatFunc;
pub use series::{expand, PowerSeries, EXACT_ORDER};

use crate::Result;

/// Common interface of the coefficient rings a Temperley-Lieb element can be
/// taken over. All values are immutable and all operations are pure.
pub trait Ring: Clone + Eq + std::fmt::Debug + std::fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Embeds an integer Laurent polynomial, used for loop factors.
    fn from_laurent(p: &LaurentPoly) -> Self;
}

/// The quantum integer [n] = q^{-(n-1)} + q^{-(n-3)} + ... + q^{n-1}.
pub fn quantum_integer(n: i64) -> Result<LaurentPoly> {
    if n < 1 {
        return Err(crate::Error::domain(format!(
            "quantum integer is defined for n >= 1, got {n}"
        )));
    }
    let terms = (0..n).map(|k| (-(n - 1) + 2 * k, 1.into()));
    Ok(LaurentPoly::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(e, BigInt::from(1))
    }

    #[test]
    fn quantum_integers_small() {
        assert_eq!(quantum_integer(1).unwrap(), LaurentPoly::one());
        assert_eq!(quantum_integer(2).unwrap(), q(-1).add(&q(1)));
        assert_eq!(
            quantum_integer(3).unwrap(),
            q(-2).add(&LaurentPoly::one()).add(&q(2))
        );
        assert!(quantum_integer(0).is_err());
    }

    #[test]
    fn quantum_integer_defining_identity() {
        // [n] (q - q^{-1}) = q^n - q^{-n}
        let lhs_factor = q(1).sub(&q(-1));
        for n in 1..=12 {
            let lhs = quantum_integer(n).unwrap().mul(&lhs_factor);
            let rhs = q(n).sub(&q(-n));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn product_identity_two_three() {
        // [2][3] = [4] + [2]
        let p23 = quantum_integer(2).unwrap().mul(&quantum_integer(3).unwrap());
        let rhs = quantum_integer(4).unwrap().add(&quantum_integer(2).unwrap());
        assert_eq!(p23, rhs);
        assert_eq!(p23.sub(&quantum_integer(4).unwrap()), quantum_integer(2).unwrap());
    }

    #[test]
    fn two_squared() {
        let p = quantum_integer(2).unwrap();
        let sq = p.mul(&p);
        let expected = LaurentPoly::from_terms([(-2, 1.into()), (0, 2.into()), (2, 1.into())]);
        assert_eq!(sq, expected);
    }
}
