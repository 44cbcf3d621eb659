//! Planar Temperley-Lieb diagrams on 2n points, the TL algebra over a chosen
//! coefficient ring, the classical Jones-Wenzl projectors via the Wenzl
//! recursion, and the Markov trace.
//!
//! Points are numbered 1..=2n: bottom points 1..n left to right, top points
//! n+1..2n left to right. Multiplication stacks the second factor above the
//! first, and each closed circle removed contributes a factor [2].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::coeff::{quantum_integer, RatFunc, Ring};
use crate::{Error, Result};

/// A planar pairing of the 2n boundary points: a fixed-point-free involution
/// that is non-crossing in the boundary cyclic order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<[usize; 2]>", into = "Vec<[usize; 2]>")]
pub struct Matching {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        norm.sort_unstable();
        let m = Matching { n, pairs: norm };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let n2 = 2 * self.n;
        if self.pairs.len() * 2 != n2 {
            return Err(Error::domain("wrong number of pairs"));
        }
        let mut seen = vec![false; n2 + 1];
        for &(a, b) in &self.pairs {
            if a == b || a < 1 || b > n2 {
                return Err(Error::domain("not a fixed-point-free involution"));
            }
            for p in [a, b] {
                if seen[p] {
                    return Err(Error::domain("repeated point"));
                }
                seen[p] = true;
            }
        }
        // non-crossing in the cyclic order b1..bn, tn..t1, by a bracket scan
        let mut stack: Vec<usize> = Vec::new();
        for pos in 0..n2 {
            let p = self.point_at_cyclic(pos);
            let q = self.partner(p);
            if stack.last() == Some(&q) {
                stack.pop();
            } else {
                stack.push(p);
            }
        }
        if !stack.is_empty() {
            return Err(Error::domain("matching is not planar"));
        }
        Ok(())
    }

    /// Point at position `pos` of the boundary cyclic order b1..bn, tn..t1.
    fn point_at_cyclic(&self, pos: usize) -> usize {
        if pos < self.n {
            pos + 1
        } else {
            2 * self.n - (pos - self.n)
        }
    }

    pub fn identity(n: usize) -> Self {
        Matching {
            n,
            pairs: (1..=n).map(|i| (i, n + i)).collect(),
        }
    }

    /// The generator e_i: bottom i paired with i+1, top i with i+1, all other
    /// strands vertical.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i < 1 || i + 1 > n {
            return Err(Error::IndexOutOfRange(format!(
                "generator index {i} for {n} strands"
            )));
        }
        let mut pairs = vec![(i, i + 1), (n + i, n + i + 1)];
        for j in 1..=n {
            if j != i && j != i + 1 {
                pairs.push((j, n + j));
            }
        }
        Matching::new(n, pairs)
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partner(&self, p: usize) -> usize {
        for &(a, b) in &self.pairs {
            if a == p {
                return b;
            }
            if b == p {
                return a;
            }
        }
        panic!("point {p} out of range");
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| b == a + self.n)
    }

    /// Vertical stacking: `other` glued on top of `self`. Returns the
    /// composite matching and the closed loops removed, each loop given by
    /// the sorted interface positions (1..n) it passes through.
    pub fn compose_detailed(&self, other: &Matching) -> Result<(Matching, Vec<Vec<usize>>)> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut visited = vec![false; n + 1];
        let mut endpoint_of: BTreeMap<usize, usize> = BTreeMap::new();
        for start in 1..=2 * n {
            if endpoint_of.contains_key(&start) {
                continue;
            }
            let mut in_lower = start <= n;
            let mut p = start;
            loop {
                let q = if in_lower { self.partner(p) } else { other.partner(p) };
                if in_lower {
                    if q <= n {
                        endpoint_of.insert(start, q);
                        endpoint_of.insert(q, start);
                        break;
                    }
                    visited[q - n] = true;
                    p = q - n;
                    in_lower = false;
                } else if q > n {
                    endpoint_of.insert(start, q);
                    endpoint_of.insert(q, start);
                    break;
                } else {
                    visited[q] = true;
                    p = n + q;
                    in_lower = true;
                }
            }
        }
        let pairs = endpoint_of
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(a, b)| (*a, *b))
            .collect();
        // leftover interface positions lie on closed loops
        let mut loops = Vec::new();
        for s in 1..=n {
            if visited[s] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut pos = s;
            loop {
                visited[pos] = true;
                cycle.push(pos);
                let q = self.partner(n + pos);
                debug_assert!(q > n, "closed loop stays inside the interface");
                let pos2 = q - n;
                visited[pos2] = true;
                cycle.push(pos2);
                let r = other.partner(pos2);
                debug_assert!(r <= n);
                pos = r;
                if pos == s {
                    break;
                }
            }
            cycle.sort_unstable();
            cycle.dedup();
            loops.push(cycle);
        }
        loops.sort();
        Ok((Matching::new(n, pairs)?, loops))
    }

    /// Vertical stacking, returning only the loop count.
    pub fn compose(&self, other: &Matching) -> Result<(Matching, usize)> {
        let (m, loops) = self.compose_detailed(other)?;
        Ok((m, loops.len()))
    }

    /// Number of circles in the closure (bottom i joined to top i).
    pub fn closure_loops(&self) -> usize {
        self.closure_components().len()
    }

    /// Circles of the closure, each as its sorted set of strand indices.
    pub fn closure_components(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut uf = UnionFind::new(2 * n + 1);
        for &(a, b) in &self.pairs {
            uf.union(a, b);
        }
        for i in 1..=n {
            uf.union(i, n + i);
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 1..=n {
            comps.entry(uf.find(i)).or_default().push(i);
        }
        comps.into_values().collect()
    }

    /// Reflection through the horizontal axis (bottom and top swapped).
    pub fn flip(&self) -> Self {
        let n = self.n;
        let map = |p: usize| if p <= n { p + n } else { p - n };
        Matching::new(n, self.pairs.iter().map(|&(a, b)| (map(a), map(b))).collect())
            .expect("flip preserves planarity")
    }

    /// The same diagram with `before` vertical strands added on the left and
    /// `after` on the right.
    pub fn embed(&self, before: usize, after: usize) -> Self {
        let n = self.n;
        let m = before + n + after;
        let map = |p: usize| {
            if p <= n {
                before + p
            } else {
                m + before + (p - n)
            }
        };
        let mut pairs: Vec<(usize, usize)> =
            self.pairs.iter().map(|&(a, b)| (map(a), map(b))).collect();
        for i in 1..=before {
            pairs.push((i, m + i));
        }
        for i in 1..=after {
            pairs.push((before + n + i, m + before + n + i));
        }
        Matching::new(m, pairs).expect("embedding preserves planarity")
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{a},{b}]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl TryFrom<Vec<[usize; 2]>> for Matching {
    type Error = Error;
    fn try_from(v: Vec<[usize; 2]>) -> Result<Self> {
        let n2 = v.len() * 2;
        Matching::new(n2 / 2, v.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<Matching> for Vec<[usize; 2]> {
    fn from(m: Matching) -> Self {
        m.pairs.iter().map(|&(a, b)| [a, b]).collect()
    }
}

/// All planar matchings on 2n points (there are Catalan(n) of them).
pub fn enumerate_matchings(n: usize) -> Vec<Matching> {
    fn rec(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if points.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for k in (1..points.len()).step_by(2) {
            let inner = rec(&points[1..k]);
            let outer = rec(&points[k + 1..]);
            for inn in &inner {
                for o in &outer {
                    let mut m = vec![(points[0], points[k])];
                    m.extend_from_slice(inn);
                    m.extend_from_slice(o);
                    out.push(m);
                }
            }
        }
        out
    }
    // cut the boundary circle at a basepoint: linear order b1..bn, tn..t1
    let cyc: Vec<usize> = {
        let mut v: Vec<usize> = (1..=n).collect();
        v.extend((n + 1..=2 * n).rev());
        v
    };
    let mut ms: Vec<Matching> = rec(&cyc)
        .into_iter()
        .map(|pairs| Matching::new(n, pairs).expect("enumerated matchings are planar"))
        .collect();
    ms.sort();
    ms.dedup();
    ms
}

/// A formal linear combination of matchings over a coefficient ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TlElement<R: Ring> {
    n: usize,
    terms: BTreeMap<Matching, R>,
}

impl<R: Ring> TlElement<R> {
    pub fn zero(n: usize) -> Self {
        TlElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_matching(Matching::identity(n), R::one())
    }

    pub fn from_matching(m: Matching, coeff: R) -> Self {
        let n = m.strands();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        TlElement { n, terms }
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Matching, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Matching) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Matching, c: &R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        TlElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(self.n);
        for (m, k) in self.terms() {
            out.add_term(m.clone(), &k.mul(c));
        }
        out
    }

    /// Bilinear extension of diagram stacking, each removed loop worth [2].
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::StrandMismatch(self.n, rhs.n));
        }
        let two = R::from_laurent(&quantum_integer(2)?);
        let mut out = Self::zero(self.n);
        for (m1, c1) in self.terms() {
            for (m2, c2) in rhs.terms() {
                let (m, loops) = m1.compose(m2)?;
                let mut c = c1.mul(c2);
                for _ in 0..loops {
                    c = c.mul(&two);
                }
                out.add_term(m, &c);
            }
        }
        Ok(out)
    }

    /// Markov trace: each term contributes its coefficient times
    /// [2]^(closure loops).
    pub fn trace(&self) -> R {
        let two = R::from_laurent(&quantum_integer(2).expect("[2]"));
        let mut out = R::zero();
        for (m, c) in self.terms() {
            let mut v = c.clone();
            for _ in 0..m.closure_loops() {
                v = v.mul(&two);
            }
            out = out.add(&v);
        }
        out
    }

    /// The same element viewed in TL_{n+k} with k vertical strands appended
    /// on the right.
    pub fn with_extra_strands(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n + k);
        for (m, c) in self.terms() {
            out.add_term(m.embed(0, k), c);
        }
        out
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> TlElement<S> {
        let mut out = TlElement::zero(self.n);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), &f(c));
        }
        out
    }
}

impl<R: Ring> fmt::Display for TlElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let name = diagram_name(m);
            write!(f, "({c}) {name}")?;
        }
        Ok(())
    }
}

/// Short name for well-known diagrams, pair list otherwise.
pub fn diagram_name(m: &Matching) -> String {
    if m.is_identity() {
        return "1".into();
    }
    let n = m.strands();
    for i in 1..n {
        if let Ok(e) = Matching::generator(n, i) {
            if &e == m {
                return format!("e{i}");
            }
        }
    }
    m.to_string()
}

static JW_CACHE: Lazy<Mutex<BTreeMap<usize, TlElement<RatFunc>>>> =
    Lazy::new(|| Mutex::new(BTreeMap::new()));

/// The n-th Jones-Wenzl projector over the field of rational functions,
/// computed by the Wenzl recursion
/// p_n = p_{n-1} - ([n-1]/[n]) p_{n-1} e_{n-1} p_{n-1}.
pub fn jones_wenzl(n: usize) -> Result<TlElement<RatFunc>> {
    if n == 0 {
        return Err(Error::domain("jones_wenzl requires n >= 1"));
    }
    if let Some(p) = JW_CACHE.lock().unwrap().get(&n) {
        return Ok(p.clone());
    }
    let p = if n == 1 {
        TlElement::one(1)
    } else {
        let prev = jones_wenzl(n - 1)?.with_extra_strands(1);
        let e = TlElement::from_matching(Matching::generator(n, n - 1)?, RatFunc::one());
        let coeff = RatFunc::from_laurent(&quantum_integer(n as i64 - 1)?)
            .div(&RatFunc::from_laurent(&quantum_integer(n as i64)?))?;
        let corr = prev.multiply(&e)?.multiply(&prev)?.scale(&coeff);
        prev.sub(&corr)
    };
    JW_CACHE.lock().unwrap().insert(n, p.clone());
    Ok(p)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(size: usize) -> Self {
        UnionFind { parent: (0..size).collect() }
    }
    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::LaurentPoly;

    fn e(n: usize, i: usize) -> Matching {
        Matching::generator(n, i).unwrap()
    }

    fn qi(n: i64) -> RatFunc {
        RatFunc::from_laurent(&quantum_integer(n).unwrap())
    }

    #[test]
    fn generators() {
        assert_eq!(e(2, 1), Matching::new(2, vec![(1, 2), (3, 4)]).unwrap());
        assert_eq!(e(3, 2), Matching::new(3, vec![(2, 3), (5, 6), (1, 4)]).unwrap());
        assert!(Matching::generator(3, 3).is_err());
    }

    #[test]
    fn crossing_matchings_rejected() {
        assert!(Matching::new(2, vec![(1, 3), (2, 4)]).is_err());
        assert!(Matching::new(2, vec![(1, 4), (2, 3)]).is_ok());
    }

    #[test]
    fn composition_relations() {
        // e1 e1 = e1 with one loop
        let (m, loops) = e(2, 1).compose(&e(2, 1)).unwrap();
        assert_eq!((m, loops), (e(2, 1), 1));
        // e1 e2 e1 = e1 with no loops
        let (m, l1) = e(3, 1).compose(&e(3, 2)).unwrap();
        assert_eq!(l1, 0);
        let (m, l2) = m.compose(&e(3, 1)).unwrap();
        assert_eq!((m, l2), (e(3, 1), 0));
        // identity absorbs
        for d in enumerate_matchings(3) {
            let (m, l) = Matching::identity(3).compose(&d).unwrap();
            assert_eq!((m, l), (d.clone(), 0));
            let (m, l) = d.compose(&Matching::identity(3)).unwrap();
            assert_eq!((m, l), (d, 0));
        }
    }

    #[test]
    fn far_commutativity_exhaustive() {
        for n in 2..=7 {
            for i in 1..n {
                for j in 1..n {
                    if i.abs_diff(j) >= 2 {
                        let a = e(n, i).compose(&e(n, j)).unwrap();
                        let b = e(n, j).compose(&e(n, i)).unwrap();
                        assert_eq!(a, b, "n={n} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn catalan_counts() {
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429, 1430];
        for n in 1..=8 {
            assert_eq!(enumerate_matchings(n).len(), catalan[n], "n={n}");
        }
    }

    #[test]
    fn jones_wenzl_two() {
        let p2 = jones_wenzl(2).unwrap();
        assert_eq!(p2.coeff(&Matching::identity(2)), RatFunc::one());
        assert_eq!(p2.coeff(&e(2, 1)), RatFunc::one().neg().div(&qi(2)).unwrap());
        assert_eq!(p2.num_terms(), 2);
    }

    #[test]
    fn jones_wenzl_axioms() {
        for n in 1..=6 {
            let p = jones_wenzl(n).unwrap();
            assert_eq!(p.coeff(&Matching::identity(n)), RatFunc::one(), "unit coeff n={n}");
            let sq = p.multiply(&p).unwrap();
            assert_eq!(sq, p, "idempotent n={n}");
            for i in 1..n {
                let ei = TlElement::from_matching(e(n, i), RatFunc::one());
                assert!(ei.multiply(&p).unwrap().is_zero(), "e{i} p{n}");
                assert!(p.multiply(&ei).unwrap().is_zero(), "p{n} e{i}");
            }
        }
    }

    #[test]
    fn jones_wenzl_three_against_axiom_solver_oracle() {
        // independent oracle: solve for the coefficients c_D in
        // p = 1 + sum c_D D from the equations e_i p = 0
        let n = 3;
        let diags = enumerate_matchings(n);
        let unknowns: Vec<&Matching> = diags.iter().filter(|m| !m.is_identity()).collect();
        let two = qi(2);
        let mut rows: Vec<(Vec<RatFunc>, RatFunc)> = Vec::new();
        for i in 1..n {
            let ei = e(n, i);
            let mut lhs: BTreeMap<Matching, Vec<RatFunc>> = BTreeMap::new();
            let mut rhs: BTreeMap<Matching, RatFunc> = BTreeMap::new();
            let (m0, l0) = ei.compose(&Matching::identity(n)).unwrap();
            let mut v = RatFunc::one();
            for _ in 0..l0 {
                v = v.mul(&two);
            }
            rhs.insert(m0, v.neg());
            for (k, d) in unknowns.iter().enumerate() {
                let (m, l) = ei.compose(d).unwrap();
                let mut v = RatFunc::one();
                for _ in 0..l {
                    v = v.mul(&two);
                }
                let row = lhs
                    .entry(m)
                    .or_insert_with(|| vec![RatFunc::zero(); unknowns.len()]);
                row[k] = row[k].add(&v);
            }
            for (m, row) in lhs {
                let b = rhs.get(&m).cloned().unwrap_or_else(RatFunc::zero);
                rows.push((row, b));
            }
        }
        // Gaussian elimination over the rational function field
        let k = unknowns.len();
        let mut sol = vec![RatFunc::zero(); k];
        let mut mat = rows;
        let mut col = 0;
        let mut pivots = Vec::new();
        for r in 0..mat.len() {
            while col < k {
                if let Some(p) = (r..mat.len()).find(|&i| !mat[i].0[col].is_zero()) {
                    mat.swap(r, p);
                    break;
                }
                col += 1;
            }
            if col == k {
                break;
            }
            let inv = mat[r].0[col].inverse().unwrap();
            for c in 0..k {
                mat[r].0[c] = mat[r].0[c].mul(&inv);
            }
            mat[r].1 = mat[r].1.mul(&inv);
            for i in 0..mat.len() {
                if i != r && !mat[i].0[col].is_zero() {
                    let f = mat[i].0[col].clone();
                    for c in 0..k {
                        let d = mat[r].0[c].mul(&f);
                        mat[i].0[c] = mat[i].0[c].sub(&d);
                    }
                    let d = mat[r].1.mul(&f);
                    mat[i].1 = mat[i].1.sub(&d);
                }
            }
            pivots.push((r, col));
            col += 1;
        }
        for (r, c) in pivots {
            sol[c] = mat[r].1.clone();
        }
        let p3 = jones_wenzl(3).unwrap();
        for (ksol, d) in unknowns.iter().enumerate() {
            assert_eq!(p3.coeff(d), sol[ksol], "coefficient of {d}");
        }
    }

    #[test]
    fn projector_trace_is_quantum_integer() {
        for n in 1..=6 {
            let p = jones_wenzl(n).unwrap();
            assert_eq!(p.trace(), qi(n as i64 + 1), "trace p_{n}");
        }
        let id2: TlElement<LaurentPoly> = TlElement::one(2);
        assert_eq!(
            id2.trace(),
            quantum_integer(2).unwrap().mul(&quantum_integer(2).unwrap())
        );
    }

    #[test]
    fn multiply_examples() {
        let e1: TlElement<LaurentPoly> = TlElement::from_matching(e(2, 1), LaurentPoly::one());
        let sq = e1.multiply(&e1).unwrap();
        assert_eq!(sq.coeff(&e(2, 1)), quantum_integer(2).unwrap());
        let p2 = jones_wenzl(2).unwrap();
        let e1r: TlElement<RatFunc> = TlElement::from_matching(e(2, 1), RatFunc::one());
        assert!(p2.multiply(&e1r).unwrap().is_zero());
    }
}
