//! Chain complexes over matrices of cobordisms: construction, validation,
//! planar stacking, disjoint union, mapping cones, closure, and the graded
//! Euler characteristic.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cob::{self, CobLc, DiagObject};
use crate::coeff::{LaurentPoly, PowerSeries, Ring, EXACT_ORDER};
use crate::tl::{Matching, TlElement};
use crate::{Error, Result};

/// Sparse matrix of cobordism entries; rows index targets, columns sources.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CobMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), CobLc>,
}

impl CobMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        CobMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn entry(&self, r: usize, c: usize) -> Option<&CobLc> {
        self.entries.get(&(r, c))
    }

    pub fn set(&mut self, r: usize, c: usize, v: CobLc) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &CobLc) -> Result<()> {
        if v.is_zero() {
            return Ok(());
        }
        match self.entries.get_mut(&(r, c)) {
            Some(e) => {
                let s = e.add(v)?;
                if s.is_zero() {
                    self.entries.remove(&(r, c));
                } else {
                    *e = s;
                }
            }
            None => {
                self.entries.insert((r, c), v.clone());
            }
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &CobLc)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Removes a row and a column, shifting higher indices down.
    pub fn delete(&mut self, row: Option<usize>, col: Option<usize>) {
        let mut next = BTreeMap::new();
        for (&(r, c), v) in &self.entries {
            if Some(r) == row || Some(c) == col {
                continue;
            }
            let nr = if row.is_some_and(|x| r > x) { r - 1 } else { r };
            let nc = if col.is_some_and(|x| c > x) { c - 1 } else { c };
            next.insert((nr, nc), v.clone());
        }
        self.entries = next;
        if row.is_some() {
            self.rows -= 1;
        }
        if col.is_some() {
            self.cols -= 1;
        }
    }
}

/// How much of the ideal unbounded object the stored complex certifies.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Tail {
    /// The stored complex is the whole object.
    Complete,
    /// The true object continues beyond the stored top degree; every omitted
    /// object has minimal delooped q-degree at least `min_q`.
    Truncated { min_q: i64 },
}

impl Tail {
    pub fn min_q(&self) -> i64 {
        match self {
            Tail::Complete => EXACT_ORDER,
            Tail::Truncated { min_q } => *min_q,
        }
    }

    pub fn combine(a: Tail, b: Tail) -> Tail {
        match (a, b) {
            (Tail::Complete, Tail::Complete) => Tail::Complete,
            _ => Tail::Truncated { min_q: a.min_q().min(b.min_q()) },
        }
    }
}

/// A bounded-below chain complex of q-shifted diagrams with degree-zero
/// cobordism differentials. `groups[k]` lives in homological degree
/// `min_degree + k`; `diffs[k]` maps it to `groups[k + 1]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChainComplex {
    pub n: usize,
    pub min_degree: i64,
    pub groups: Vec<Vec<DiagObject>>,
    pub diffs: Vec<CobMatrix>,
    pub tail: Tail,
}

impl ChainComplex {
    /// A single-object complex in degree 0.
    pub fn from_object(obj: DiagObject) -> Self {
        ChainComplex {
            n: obj.n,
            min_degree: 0,
            groups: vec![vec![obj]],
            diffs: vec![],
            tail: Tail::Complete,
        }
    }

    pub fn identity_complex(n: usize) -> Self {
        Self::from_object(DiagObject::identity(n, 0))
    }

    pub fn empty(n: usize) -> Self {
        ChainComplex { n, min_degree: 0, groups: vec![], diffs: vec![], tail: Tail::Complete }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.iter().all(|g| g.is_empty())
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.groups.len() as i64 - 1
    }

    pub fn group(&self, degree: i64) -> &[DiagObject] {
        let idx = degree - self.min_degree;
        if idx < 0 || idx >= self.groups.len() as i64 {
            &[]
        } else {
            &self.groups[idx as usize]
        }
    }

    pub fn diff(&self, degree: i64) -> Option<&CobMatrix> {
        let idx = degree - self.min_degree;
        if idx < 0 || idx >= self.diffs.len() as i64 {
            None
        } else {
            Some(&self.diffs[idx as usize])
        }
    }

    pub fn num_objects(&self) -> usize {
        self.groups.iter().map(|g| g.len()).sum()
    }

    /// Minimal delooped q-degree over all stored objects.
    pub fn global_min_q(&self) -> i64 {
        self.groups
            .iter()
            .flatten()
            .map(|o| o.min_q())
            .min()
            .unwrap_or(EXACT_ORDER)
    }

    /// Checks d^2 = 0, entry boundary consistency, degree-zero entries, and
    /// optionally monotonicity of max_q/min_q per homological degree.
    pub fn validate(&self, check_monotone: bool) -> ValidationReport {
        // structural consistency
        for (k, d) in self.diffs.iter().enumerate() {
            let (src, tgt) = (&self.groups[k], &self.groups[k + 1]);
            if d.cols != src.len() || d.rows != tgt.len() {
                return ValidationReport::fail(format!(
                    "differential {k} has shape {}x{}, groups have {} and {}",
                    d.rows,
                    d.cols,
                    src.len(),
                    tgt.len()
                ));
            }
            for (r, c, v) in d.iter() {
                if v.src != src[c] || v.tgt != tgt[r] {
                    return ValidationReport::fail(format!(
                        "entry ({r},{c}) of differential {k} has mismatched endpoints"
                    ));
                }
                match v.homogeneous_degree() {
                    Some(0) => {}
                    other => {
                        return ValidationReport::fail(format!(
                            "entry ({r},{c}) of differential {k} has degree {other:?}, want 0"
                        ));
                    }
                }
            }
        }
        // d^2 = 0
        for k in 0..self.diffs.len().saturating_sub(1) {
            let (d0, d1) = (&self.diffs[k], &self.diffs[k + 1]);
            match compose_matrices(&self.groups[k], &self.groups[k + 2], d0, d1) {
                Ok(sq) => {
                    if sq.num_entries() > 0 {
                        let (r, c, _) = sq.iter().next().unwrap();
                        return ValidationReport::fail(format!(
                            "d^2 != 0 at degrees {}..{}, entry ({r},{c})",
                            self.min_degree + k as i64,
                            self.min_degree + k as i64 + 2
                        ));
                    }
                }
                Err(e) => return ValidationReport::fail(format!("d^2 composition failed: {e}")),
            }
        }
        if check_monotone {
            let mut prev: Option<(i64, i64)> = None;
            for (k, g) in self.groups.iter().enumerate() {
                if g.is_empty() {
                    continue;
                }
                let mn = g.iter().map(|o| o.min_q()).min().unwrap();
                let mx = g.iter().map(|o| o.max_q()).max().unwrap();
                if let Some((pmn, pmx)) = prev {
                    if mn < pmn || mx < pmx {
                        return ValidationReport::fail(format!(
                            "q-degrees not monotone at stored degree {k}"
                        ));
                    }
                }
                prev = Some((mn, mx));
            }
        }
        ValidationReport::pass()
    }

    /// Planar vertical composition: `other` stacked above `self`, with the
    /// Koszul sign on the second factor's differential.
    pub fn stack(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        let min_degree = self.min_degree + other.min_degree;
        let total_len = if self.groups.is_empty() || other.groups.is_empty() {
            0
        } else {
            self.groups.len() + other.groups.len() - 1
        };
        // objects: per total degree, first factor's degree ascending
        let mut groups: Vec<Vec<DiagObject>> = Vec::with_capacity(total_len);
        let mut offsets: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(total_len);
        for k in 0..total_len {
            let mut g = Vec::new();
            let mut off = BTreeMap::new();
            for i in 0..self.groups.len() {
                let j = k as i64 - i as i64;
                if j < 0 || j >= other.groups.len() as i64 {
                    continue;
                }
                off.insert(i, g.len());
                for a in &self.groups[i] {
                    for b in &other.groups[j as usize] {
                        let (obj, _) = cob::stack_objects(a, b)?;
                        g.push(obj);
                    }
                }
            }
            offsets.push(off);
            groups.push(g);
        }
        let mut diffs: Vec<CobMatrix> = Vec::new();
        for k in 0..total_len.saturating_sub(1) {
            let mut d = CobMatrix::zero(groups[k + 1].len(), groups[k].len());
            for (&i, &base) in &offsets[k] {
                let j = (k - i) as usize;
                let bw = other.groups[j].len();
                // first factor differential (i,j) -> (i+1,j)
                if let Some(&tbase) = offsets[k + 1].get(&(i + 1)) {
                    if let Some(di) = self.diffs.get(i) {
                        for (r, c, v) in di.iter() {
                            for (bj, b) in other.groups[j].iter().enumerate() {
                                let idb = CobLc::identity(b);
                                let glued = cob::hcompose(v, &idb)?;
                                d.add_to(tbase + r * bw + bj, base + c * bw + bj, &glued)?;
                            }
                        }
                    }
                }
                // second factor differential (i,j) -> (i,j+1), sign (-1)^i
                if let Some(&tbase) = offsets[k + 1].get(&i) {
                    if let Some(dj) = other.diffs.get(j) {
                        let bw2 = other.groups[j + 1].len();
                        let sign = if (self.min_degree + i as i64).rem_euclid(2) == 1 {
                            -1
                        } else {
                            1
                        };
                        for (r, c, v) in dj.iter() {
                            for (ai, a) in self.groups[i].iter().enumerate() {
                                let ida = CobLc::identity(a);
                                let glued = cob::hcompose(&ida, v)?.scale_int(sign);
                                d.add_to(tbase + ai * bw2 + r, base + ai * bw + c, &glued)?;
                            }
                        }
                    }
                }
            }
            diffs.push(d);
        }
        let tail = match (self.tail, other.tail) {
            (Tail::Complete, Tail::Complete) => Tail::Complete,
            _ => {
                let a = self.tail.min_q().saturating_add(other.global_min_q());
                let b = other.tail.min_q().saturating_add(self.global_min_q());
                Tail::Truncated { min_q: a.min(b) }
            }
        };
        Ok(ChainComplex { n: self.n, min_degree, groups, diffs, tail })
    }

    /// Adds k vertical strands on the right of every object and identity
    /// sheets to every morphism.
    pub fn disjoint_union(&self, k: usize) -> ChainComplex {
        self.embed(0, k)
    }

    /// Adds vertical strands on both sides.
    pub fn embed(&self, before: usize, after: usize) -> ChainComplex {
        let groups: Vec<Vec<DiagObject>> = self
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|o| {
                        DiagObject::with_circles(
                            o.matching.embed(before, after),
                            o.q_shift,
                            o.circles,
                        )
                    })
                    .collect()
            })
            .collect();
        let diffs = self
            .diffs
            .iter()
            .map(|d| {
                let mut nd = CobMatrix::zero(d.rows, d.cols);
                for (r, c, v) in d.iter() {
                    nd.set(r, c, v.embed(before, after));
                }
                nd
            })
            .collect();
        ChainComplex {
            n: before + self.n + after,
            min_degree: self.min_degree,
            groups,
            diffs,
            tail: self.tail,
        }
    }

    /// Closure: arcs become circles, morphisms are re-glued along the
    /// closure strips. Lands in strand count 0.
    pub fn trace(&self) -> Result<ChainComplex> {
        let groups: Vec<Vec<DiagObject>> = self
            .groups
            .iter()
            .map(|g| g.iter().map(cob::closed_object).collect())
            .collect();
        let mut diffs = Vec::new();
        for d in &self.diffs {
            let mut nd = CobMatrix::zero(d.rows, d.cols);
            for (r, c, v) in d.iter() {
                nd.set(r, c, cob::trace_morphism(v)?);
            }
            diffs.push(nd);
        }
        let tail = match self.tail {
            Tail::Complete => Tail::Complete,
            Tail::Truncated { min_q } => Tail::Truncated { min_q: min_q - self.n as i64 },
        };
        Ok(ChainComplex { n: 0, min_degree: self.min_degree, groups, diffs, tail })
    }

    /// Reflection through the horizontal axis.
    pub fn flip(&self) -> ChainComplex {
        ChainComplex {
            n: self.n,
            min_degree: self.min_degree,
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(DiagObject::flip).collect())
                .collect(),
            diffs: self
                .diffs
                .iter()
                .map(|d| {
                    let mut nd = CobMatrix::zero(d.rows, d.cols);
                    for (r, c, v) in d.iter() {
                        nd.set(r, c, v.flip());
                    }
                    nd
                })
                .collect(),
            tail: self.tail,
        }
    }

    /// Graded Euler characteristic as a Temperley-Lieb element with power
    /// series coefficients, truncated to the certified order (or `order`,
    /// whichever is smaller). Free circles contribute factors q + q^{-1}.
    pub fn euler(&self, order: i64) -> TlElement<PowerSeries> {
        let certified = self.tail.min_q();
        let eff = order.min(certified);
        let two = LaurentPoly::from_terms([(-1, 1.into()), (1, 1.into())]);
        let mut out: TlElement<PowerSeries> = TlElement::zero(self.n);
        for (k, g) in self.groups.iter().enumerate() {
            let deg = self.min_degree + k as i64;
            let sign = if deg.rem_euclid(2) == 1 { -1 } else { 1 };
            for o in g {
                let mut v = LaurentPoly::monomial(o.q_shift, sign.into());
                for _ in 0..o.circles {
                    v = v.mul(&two);
                }
                out.add_term(o.matching.clone(), &PowerSeries::from_laurent(&v, eff));
            }
        }
        // re-truncate terms that cancelled away entirely
        out.map_coeffs(|s| s.truncated(eff))
    }

    /// Multiset of (homological degree, q_shift, matching, circles) over all
    /// stored chain groups, for structural comparisons.
    pub fn graded_objects(&self) -> Vec<(i64, i64, Matching, usize)> {
        let mut v: Vec<(i64, i64, Matching, usize)> = self
            .groups
            .iter()
            .enumerate()
            .flat_map(|(k, g)| {
                let deg = self.min_degree + k as i64;
                g.iter()
                    .map(move |o| (deg, o.q_shift, o.matching.clone(), o.circles))
            })
            .collect();
        v.sort();
        v
    }

    /// Drops empty leading/trailing groups, keeping degrees consistent.
    pub fn trimmed(&self) -> ChainComplex {
        let mut c = self.clone();
        while c.groups.first().is_some_and(|g| g.is_empty()) && !c.groups.is_empty() {
            c.groups.remove(0);
            if !c.diffs.is_empty() {
                c.diffs.remove(0);
            }
            c.min_degree += 1;
        }
        while c.groups.last().is_some_and(|g| g.is_empty()) {
            c.groups.pop();
            c.diffs.pop();
        }
        c
    }
}

/// Matrix composition d1 then d2 (entries composed source-to-target).
pub fn compose_matrices(
    src: &[DiagObject],
    tgt: &[DiagObject],
    d1: &CobMatrix,
    d2: &CobMatrix,
) -> Result<CobMatrix> {
    let mut out = CobMatrix::zero(tgt.len(), src.len());
    for (m, c, f) in d1.iter() {
        for (r, m2, g) in d2.iter() {
            if m2 != m {
                continue;
            }
            let v = cob::compose(f, g)?;
            out.add_to(r, c, &v)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub first_violation: Option<String>,
}

impl ValidationReport {
    fn pass() -> Self {
        ValidationReport { ok: true, first_violation: None }
    }
    fn fail(msg: String) -> Self {
        ValidationReport { ok: false, first_violation: Some(msg) }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            write!(f, "PASS")
        } else {
            write!(f, "FAIL: {}", self.first_violation.as_deref().unwrap_or(""))
        }
    }
}

/// A degree-zero chain map between two complexes of the same strand count.
pub struct ChainMap<'a> {
    pub source: &'a ChainComplex,
    pub target: &'a ChainComplex,
    /// Component matrices per homological degree of the source.
    pub maps: Vec<CobMatrix>,
}

impl<'a> ChainMap<'a> {
    pub fn identity(c: &'a ChainComplex) -> Self {
        let maps = c
            .groups
            .iter()
            .map(|g| {
                let mut m = CobMatrix::zero(g.len(), g.len());
                for (i, o) in g.iter().enumerate() {
                    m.set(i, i, CobLc::identity(o));
                }
                m
            })
            .collect();
        ChainMap { source: c, target: c, maps }
    }

    pub fn zero(source: &'a ChainComplex, target: &'a ChainComplex) -> Self {
        let maps = source
            .groups
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let deg = source.min_degree + k as i64;
                CobMatrix::zero(target.group(deg).len(), g.len())
            })
            .collect();
        ChainMap { source, target, maps }
    }

    /// Checks that the map commutes with the differentials.
    pub fn validate(&self) -> Result<()> {
        if self.source.min_degree != self.target.min_degree {
            return Err(Error::NotChainMap("degree offset not supported".into()));
        }
        for k in 0..self.maps.len().saturating_sub(1) {
            let df = self.source.diffs.get(k);
            let tg_deg = k;
            let dg = self.target.diffs.get(tg_deg);
            let left = match (df, self.maps.get(k + 1)) {
                (Some(d), Some(f)) => {
                    compose_matrices(&self.source.groups[k], &self.target.groups[k + 1], d, f)?
                }
                _ => continue,
            };
            let right = match (self.maps.get(k), dg) {
                (Some(f), Some(d)) => {
                    compose_matrices(&self.source.groups[k], &self.target.groups[k + 1], f, d)?
                }
                _ => continue,
            };
            if left != right {
                return Err(Error::NotChainMap(format!("square at degree {k} does not commute")));
            }
        }
        Ok(())
    }
}

/// Mapping cone: degree k holds source degree k+1 beside target degree k,
/// with differential (x, y) -> (-d x, f(x) + d y).
pub fn cone(f: &ChainMap) -> Result<ChainComplex> {
    f.validate()?;
    let x = f.source;
    let y = f.target;
    if x.n != y.n {
        return Err(Error::StrandMismatch(x.n, y.n));
    }
    let min_degree = (x.min_degree - 1).min(y.min_degree);
    let max_degree = (x.max_degree() - 1).max(y.max_degree());
    let mut groups = Vec::new();
    let mut diffs = Vec::new();
    let xg = |deg: i64| x.group(deg + 1);
    let yg = |deg: i64| y.group(deg);
    for deg in min_degree..=max_degree {
        let mut g: Vec<DiagObject> = xg(deg).to_vec();
        g.extend(yg(deg).iter().cloned());
        groups.push(g);
    }
    for deg in min_degree..max_degree {
        let (xs, ys) = (xg(deg).len(), yg(deg).len());
        let (xt, yt) = (xg(deg + 1).len(), yg(deg + 1).len());
        let mut d = CobMatrix::zero(xt + yt, xs + ys);
        if let Some(dx) = x.diff(deg + 1) {
            for (r, c, v) in dx.iter() {
                d.set(r, c, v.scale_int(-1));
            }
        }
        if let Some(dy) = y.diff(deg) {
            for (r, c, v) in dy.iter() {
                d.set(xt + r, xs + c, v.clone());
            }
        }
        let fidx = (deg + 1) - x.min_degree;
        if fidx >= 0 {
            if let Some(fm) = f.maps.get(fidx as usize) {
                for (r, c, v) in fm.iter() {
                    d.add_to(xt + r, c, v)?;
                }
            }
        }
        diffs.push(d);
    }
    Ok(ChainComplex {
        n: x.n,
        min_degree,
        groups,
        diffs,
        tail: Tail::combine(x.tail, y.tail),
    }
    .trimmed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cob::saddle;
    use num_bigint::BigInt;

    fn e1_complex() -> ChainComplex {
        ChainComplex::from_object(DiagObject::new(Matching::generator(2, 1).unwrap(), 0))
    }

    #[test]
    fn stack_identity_object_complex() {
        let c = e1_complex();
        let id = ChainComplex::identity_complex(2);
        let s = c.stack(&id).unwrap();
        assert_eq!(s.groups, c.groups);
        let s2 = id.stack(&c).unwrap();
        assert_eq!(s2.groups, c.groups);
    }

    #[test]
    fn stack_e1_on_e1_gives_circle() {
        let c = e1_complex();
        let s = c.stack(&c).unwrap();
        assert_eq!(s.groups.len(), 1);
        assert_eq!(s.groups[0].len(), 1);
        let o = &s.groups[0][0];
        assert_eq!(o.matching, Matching::generator(2, 1).unwrap());
        assert_eq!(o.circles, 1);
    }

    /// Two-term complex from a saddle, for bicomplex tests.
    fn crossing_like(n: usize, i: usize) -> ChainComplex {
        let src = DiagObject::identity(n, 0);
        let (tgt, s) = saddle(&src, i, i + 1).unwrap();
        let mut d = CobMatrix::zero(1, 1);
        d.set(0, 0, s);
        ChainComplex {
            n,
            min_degree: 0,
            groups: vec![vec![src], vec![tgt]],
            diffs: vec![d],
            tail: Tail::Complete,
        }
    }

    #[test]
    fn stack_of_two_term_complexes_is_complex() {
        let a = crossing_like(2, 1);
        let s = a.stack(&a).unwrap();
        assert_eq!(s.groups.len(), 3);
        assert_eq!(s.groups[1].len(), 2);
        let rep = s.validate(false);
        assert!(rep.ok, "{rep}");
        // euler multiplicativity
        let ea = a.euler(EXACT_ORDER);
        let es = s.euler(EXACT_ORDER);
        let prod = ea.multiply(&ea).unwrap();
        assert_eq!(prod, es);
    }

    #[test]
    fn validate_catches_nonzero_square() {
        let o = DiagObject::identity(1, 0);
        let id = CobLc::identity(&o);
        let mut d0 = CobMatrix::zero(1, 1);
        d0.set(0, 0, id.clone());
        let mut d1 = CobMatrix::zero(1, 1);
        d1.set(0, 0, id);
        let c = ChainComplex {
            n: 1,
            min_degree: 0,
            groups: vec![vec![o.clone()], vec![o.clone()], vec![o]],
            diffs: vec![d0, d1],
            tail: Tail::Complete,
        };
        // entries have q-degree 0 but d^2 = identity != 0
        let rep = c.validate(false);
        assert!(!rep.ok);
        assert!(rep.first_violation.unwrap().contains("d^2"));
    }

    #[test]
    fn single_object_validates() {
        let c = ChainComplex::identity_complex(3);
        assert!(c.validate(true).ok);
    }

    #[test]
    fn disjoint_union_preserves_counts() {
        let a = crossing_like(2, 1);
        let b = a.disjoint_union(1);
        assert_eq!(b.n, 3);
        for (ga, gb) in a.groups.iter().zip(&b.groups) {
            assert_eq!(ga.len(), gb.len());
        }
        assert!(b.validate(false).ok);
    }

    #[test]
    fn trace_counts_circles() {
        let id1 = ChainComplex::identity_complex(1);
        let t = id1.trace().unwrap();
        assert_eq!(t.groups[0][0].circles, 1);
        let e1 = e1_complex();
        let t = e1.trace().unwrap();
        assert_eq!(t.groups[0][0].circles, 1);
        let id2 = ChainComplex::identity_complex(2);
        let t = id2.trace().unwrap();
        assert_eq!(t.groups[0][0].circles, 2);
    }

    #[test]
    fn cone_of_zero_map_is_shifted_sum() {
        let a = crossing_like(2, 1);
        let b = e1_complex();
        let f = ChainMap::zero(&a, &b);
        let c = cone(&f).unwrap();
        assert_eq!(c.min_degree, -1);
        assert_eq!(c.group(-1).len(), 1);
        assert_eq!(c.group(0).len(), 2); // a's degree-1 object and b's object
        assert!(c.validate(false).ok);
    }

    #[test]
    fn cone_over_inclusion_is_complex() {
        // one-object inclusion into a two-term complex
        let a = crossing_like(2, 1);
        let sub = ChainComplex::from_object(a.groups[0][0].clone());
        let mut maps = vec![CobMatrix::zero(1, 1), CobMatrix::zero(1, 0)];
        maps[0].set(0, 0, CobLc::identity(&sub.groups[0][0]));
        let f = ChainMap { source: &sub, target: &a, maps };
        let c = cone(&f).unwrap();
        assert!(c.validate(false).ok);
        assert_eq!(c.num_objects(), 3);
    }

    #[test]
    fn flip_involution() {
        let a = crossing_like(3, 2);
        let f = a.flip();
        assert_eq!(f.flip(), a);
        assert!(f.validate(false).ok);
    }

    #[test]
    fn euler_of_single_object() {
        let o = DiagObject::new(Matching::generator(2, 1).unwrap(), 5);
        let c = ChainComplex::from_object(o);
        let e = c.euler(EXACT_ORDER);
        let coeff = e.coeff(&Matching::generator(2, 1).unwrap());
        assert_eq!(coeff.coeff(5), BigInt::from(1));
    }
}
