//! The dotted cobordism category: q-shifted diagram objects, canonical-form
//! morphisms, and composition with full reduction by the sphere, dot and
//! neck-cutting relations.
//!
//! Morphisms are kept in a fully neck-cut canonical form: every surface
//! component is compressed to a union of disks, one per boundary circle,
//! carrying at most one dot each. A morphism is then a Z[alpha]-linear
//! combination of dot assignments on the boundary circles of (source,
//! target). Genus contributes a factor 2 and an extra dot per handle, two
//! dots on a component merge into a factor alpha, and closed components
//! evaluate by the sphere relations (0, 1, 0, alpha, ...).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coeff::AlphaPoly;
use crate::tl::{Matching, UnionFind};
use crate::{Error, Result};

/// A q-shifted Temperley-Lieb diagram, possibly with free circles.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DiagObject {
    pub n: usize,
    pub q_shift: i64,
    pub matching: Matching,
    /// Free closed loops carried by the object; identifiers are 0..circles.
    pub circles: usize,
}

impl DiagObject {
    pub fn new(matching: Matching, q_shift: i64) -> Self {
        DiagObject { n: matching.strands(), q_shift, matching, circles: 0 }
    }

    pub fn with_circles(matching: Matching, q_shift: i64, circles: usize) -> Self {
        DiagObject { n: matching.strands(), q_shift, matching, circles }
    }

    pub fn identity(n: usize, q_shift: i64) -> Self {
        Self::new(Matching::identity(n), q_shift)
    }

    pub fn shifted(&self, dq: i64) -> Self {
        let mut o = self.clone();
        o.q_shift += dq;
        o
    }

    /// Minimal q-degree of the object after delooping all circles.
    pub fn min_q(&self) -> i64 {
        self.q_shift - self.circles as i64
    }

    pub fn max_q(&self) -> i64 {
        self.q_shift + self.circles as i64
    }

    pub fn flip(&self) -> Self {
        DiagObject {
            n: self.n,
            q_shift: self.q_shift,
            matching: self.matching.flip(),
            circles: self.circles,
        }
    }

    pub fn is_identity_diagram(&self) -> bool {
        self.circles == 0 && self.matching.is_identity()
    }
}

impl fmt::Display for DiagObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{} {}", self.q_shift, crate::tl::diagram_name(&self.matching))?;
        if self.circles > 0 {
            write!(f, " (+{} circles)", self.circles)?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiagObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The boundary circles of a cobordism between two objects on the same
/// strand count: components of the 1-manifold formed by the source arcs, the
/// target arcs and the 2n vertical boundary segments, followed by the free
/// circles of the source and of the target. Ordering is canonical: arc
/// circles by minimal boundary point, then source circles, then target
/// circles.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryCircles {
    pub count: usize,
    point_circle: Vec<usize>,
    src_free: Vec<usize>,
    tgt_free: Vec<usize>,
}

impl BoundaryCircles {
    pub fn at_point(&self, p: usize) -> usize {
        self.point_circle[p]
    }
    pub fn src_free(&self, i: usize) -> usize {
        self.src_free[i]
    }
    pub fn tgt_free(&self, i: usize) -> usize {
        self.tgt_free[i]
    }
}

pub fn boundary_circles(src: &DiagObject, tgt: &DiagObject) -> Result<BoundaryCircles> {
    if src.n != tgt.n {
        return Err(Error::StrandMismatch(src.n, tgt.n));
    }
    let n2 = 2 * src.n;
    let mut uf = UnionFind::new(n2 + 1);
    for &(a, b) in src.matching.pairs() {
        uf.union(a, b);
    }
    for &(a, b) in tgt.matching.pairs() {
        uf.union(a, b);
    }
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut point_circle = vec![usize::MAX; n2 + 1];
    for p in 1..=n2 {
        let r = uf.find(p);
        let next = index.len();
        let id = *index.entry(r).or_insert(next);
        point_circle[p] = id;
    }
    let mut count = index.len();
    let src_free: Vec<usize> = (0..src.circles)
        .map(|_| {
            let id = count;
            count += 1;
            id
        })
        .collect();
    let tgt_free: Vec<usize> = (0..tgt.circles)
        .map(|_| {
            let id = count;
            count += 1;
            id
        })
        .collect();
    Ok(BoundaryCircles { count, point_circle, src_free, tgt_free })
}

/// A single canonical-form surface term: one disk per boundary circle with
/// zero or one dot. The coefficient lives in the enclosing linear
/// combination.
pub type DotVec = Vec<u8>;

/// A linear combination of canonical cobordism terms over Z[alpha].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CobLc {
    pub src: DiagObject,
    pub tgt: DiagObject,
    pub circles: BoundaryCircles,
    terms: BTreeMap<DotVec, AlphaPoly>,
}

impl CobLc {
    pub fn zero(src: DiagObject, tgt: DiagObject) -> Result<Self> {
        let circles = boundary_circles(&src, &tgt)?;
        Ok(CobLc { src, tgt, circles, terms: BTreeMap::new() })
    }

    pub fn from_terms(
        src: DiagObject,
        tgt: DiagObject,
        terms: impl IntoIterator<Item = (DotVec, AlphaPoly)>,
    ) -> Result<Self> {
        let mut lc = Self::zero(src, tgt)?;
        for (d, c) in terms {
            lc.add_term(d, &c);
        }
        Ok(lc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DotVec, &AlphaPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, dots: DotVec, c: &AlphaPoly) {
        debug_assert_eq!(dots.len(), self.circles.count);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(dots) {
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

    /// Identity cobordism: product disks over arc circles; each free circle
    /// contributes a neck-cut tube (two terms).
    pub fn identity(obj: &DiagObject) -> Self {
        let circles = boundary_circles(obj, obj).expect("same object");
        let mut terms: Vec<(DotVec, AlphaPoly)> = vec![(vec![0; circles.count], AlphaPoly::one())];
        for i in 0..obj.circles {
            let (s, t) = (circles.src_free(i), circles.tgt_free(i));
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (dots, c) in terms {
                let mut d1 = dots.clone();
                d1[s] = 1;
                next.push((d1, c.clone()));
                let mut d2 = dots;
                d2[t] = 1;
                next.push((d2, c));
            }
            terms = next;
        }
        CobLc::from_terms(obj.clone(), obj.clone(), terms).expect("identity")
    }

    /// True if this is c times the identity cobordism of a circle-free
    /// object; returns c.
    pub fn as_scalar_identity(&self) -> Option<&AlphaPoly> {
        if self.src != self.tgt || self.src.circles != 0 {
            return None;
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (dots, c) = self.terms.iter().next().unwrap();
        if dots.iter().all(|&d| d == 0) {
            Some(c)
        } else {
            None
        }
    }

    pub fn scale(&self, c: &AlphaPoly) -> Self {
        let mut out = CobLc {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            circles: self.circles.clone(),
            terms: BTreeMap::new(),
        };
        for (d, k) in self.terms() {
            out.add_term(d.clone(), &k.mul(c));
        }
        out
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&AlphaPoly::from_int(c))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.src != rhs.src || self.tgt != rhs.tgt {
            return Err(Error::BoundaryMismatch("sum of cobordisms with different ends".into()));
        }
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        CobLc {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            circles: self.circles.clone(),
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c.neg())).collect(),
        }
    }

    /// Adds a dot on the given boundary circle of every term; two dots on a
    /// circle reduce to a factor alpha.
    pub fn add_dot(&self, circle: usize) -> Self {
        let mut out = CobLc {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            circles: self.circles.clone(),
            terms: BTreeMap::new(),
        };
        for (d, c) in self.terms() {
            let mut d = d.clone();
            if d[circle] == 1 {
                d[circle] = 0;
                out.add_term(d, &c.mul(&AlphaPoly::alpha()));
            } else {
                d[circle] = 1;
                out.add_term(d, c);
            }
        }
        out
    }

    /// Degrees of a single canonical term: (topological, q, total). The
    /// topological degree of the underlying surface is chi - n - 2 dots,
    /// with chi the number of disks; each alpha in the coefficient carries
    /// topological degree -4.
    pub fn term_degree(&self, dots: &DotVec, alpha_exp: u32) -> (i64, i64, i64) {
        let b = self.circles.count as i64;
        let d: i64 = dots.iter().map(|&x| x as i64).sum();
        let t = b - self.src.n as i64 - 2 * d - 4 * alpha_exp as i64;
        let q = self.tgt.q_shift - self.src.q_shift;
        (t, q, t + q)
    }

    /// Total degree if homogeneous, per monomial of every coefficient.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut deg = None;
        for (dots, c) in self.terms() {
            for (e, _) in c.terms() {
                let (_, _, total) = self.term_degree(dots, e);
                match deg {
                    None => deg = Some(total),
                    Some(d) if d == total => {}
                    _ => return None,
                }
            }
        }
        deg
    }

    /// Relabels the boundary circles through `map` (old index -> new index),
    /// transplanting onto new source/target objects.
    fn relabel(&self, src: DiagObject, tgt: DiagObject, map: &[usize]) -> Result<Self> {
        let circles = boundary_circles(&src, &tgt)?;
        let mut out = CobLc { src, tgt, circles, terms: BTreeMap::new() };
        for (d, c) in self.terms() {
            let mut nd = vec![0u8; out.circles.count];
            for (old, &v) in d.iter().enumerate() {
                if v > 0 {
                    nd[map[old]] = v;
                }
            }
            out.add_term(nd, c);
        }
        Ok(out)
    }

    /// Mirror through the horizontal axis.
    pub fn flip(&self) -> Self {
        let src = self.src.flip();
        let tgt = self.tgt.flip();
        let new_circles = boundary_circles(&src, &tgt).expect("flip");
        let n = self.src.n;
        let mut map = vec![usize::MAX; self.circles.count];
        for p in 1..=2 * n {
            let fp = if p <= n { p + n } else { p - n };
            map[self.circles.at_point(p)] = new_circles.at_point(fp);
        }
        for i in 0..self.src.circles {
            map[self.circles.src_free(i)] = new_circles.src_free(i);
        }
        for i in 0..self.tgt.circles {
            map[self.circles.tgt_free(i)] = new_circles.tgt_free(i);
        }
        self.relabel(src, tgt, &map).expect("flip relabel")
    }

    /// The same cobordism with identity sheets added: `before` strands on
    /// the left and `after` on the right.
    pub fn embed(&self, before: usize, after: usize) -> Self {
        let n = self.src.n;
        let m = before + n + after;
        let src = DiagObject::with_circles(
            self.src.matching.embed(before, after),
            self.src.q_shift,
            self.src.circles,
        );
        let tgt = DiagObject::with_circles(
            self.tgt.matching.embed(before, after),
            self.tgt.q_shift,
            self.tgt.circles,
        );
        let new_circles = boundary_circles(&src, &tgt).expect("embed");
        let mut map = vec![usize::MAX; self.circles.count];
        for p in 1..=2 * n {
            let np = if p <= n { before + p } else { m + before + (p - n) };
            map[self.circles.at_point(p)] = new_circles.at_point(np);
        }
        for i in 0..self.src.circles {
            map[self.circles.src_free(i)] = new_circles.src_free(i);
        }
        for i in 0..self.tgt.circles {
            map[self.circles.tgt_free(i)] = new_circles.tgt_free(i);
        }
        self.relabel(src, tgt, &map).expect("embed relabel")
    }
}

/// Saddle cobordism re-wiring the arcs at boundary points p and p2. If the
/// points lie on different arcs the arcs merge; if they form one arc the
/// move splits off a new free circle.
pub fn saddle(obj: &DiagObject, p: usize, p2: usize) -> Result<(DiagObject, CobLc)> {
    let m = &obj.matching;
    let (q, q2) = (m.partner(p), m.partner(p2));
    if p == p2 {
        return Err(Error::domain("saddle needs two distinct points"));
    }
    if q == p2 {
        // split: the arc (p, p2) persists and a new circle is born; the
        // distinguished component is a tube (chi 0) joining the two
        let tgt = DiagObject::with_circles(m.clone(), obj.q_shift + 1, obj.circles + 1);
        let sc = boundary_circles(obj, &tgt)?;
        let tube_a = sc.at_point(p);
        let tube_b = sc.tgt_free(obj.circles);
        build_product_with_component(obj, &tgt, &sc, &[tube_a, tube_b], 0)
    } else {
        let mut pairs: Vec<(usize, usize)> = m
            .pairs()
            .iter()
            .copied()
            .filter(|&(a, b)| ![a, b].contains(&p) && ![a, b].contains(&p2))
            .collect();
        pairs.push((p, p2));
        pairs.push((q, q2));
        let tm = Matching::new(obj.n, pairs)?;
        let tgt = DiagObject::with_circles(tm, obj.q_shift + 1, obj.circles);
        let sc = boundary_circles(obj, &tgt)?;
        // all four re-wired points lie on one boundary circle and the
        // saddle sheet over them is a disk
        let comp = vec![sc.at_point(p)];
        debug_assert_eq!(sc.at_point(p), sc.at_point(p2));
        debug_assert_eq!(sc.at_point(p), sc.at_point(q2));
        build_product_with_component(obj, &tgt, &sc, &comp, 1)
    }
}

/// Builds the canonical form of a surface that is the identity product
/// outside one distinguished component with the given boundary circles and
/// Euler characteristic.
fn build_product_with_component(
    src: &DiagObject,
    tgt: &DiagObject,
    sc: &BoundaryCircles,
    component: &[usize],
    chi: i64,
) -> Result<(DiagObject, CobLc)> {
    // assemble: distinguished component with given chi and no dots; every
    // other boundary circle is a product disk, with source/target free
    // circles paired into tubes where both sides persist
    let mut expanded: Vec<(DotVec, AlphaPoly)> = vec![(vec![0; sc.count], AlphaPoly::one())];
    // distinguished component
    let mut parts: Vec<(Vec<usize>, i64, u32)> = vec![(component.to_vec(), chi, 0)];
    // free-circle tubes: circles of src and tgt that persist untouched pair
    // by index (they are the same geometric circle)
    let in_comp = |c: usize| component.contains(&c);
    let (ns, nt) = (src.circles, tgt.circles);
    let shared = ns.min(nt);
    for i in 0..shared {
        let (a, b) = (sc.src_free(i), sc.tgt_free(i));
        if !in_comp(a) && !in_comp(b) {
            parts.push((vec![a, b], 0, 0));
        }
    }
    // arc circles not in the distinguished component are product disks
    let mut covered = vec![false; sc.count];
    for (cs, _, _) in &parts {
        for &c in cs {
            covered[c] = true;
        }
    }
    for c in 0..sc.count {
        if !covered[c] {
            parts.push((vec![c], 1, 0));
        }
    }
    for (circles, chi, dots) in parts {
        expanded = expand_component(&expanded, &circles, chi, dots)?;
    }
    let lc = CobLc::from_terms(src.clone(), tgt.clone(), expanded)?;
    Ok((tgt.clone(), lc))
}

/// Expands one connected component (boundary circles, Euler characteristic,
/// dot count) into canonical disk terms, multiplying into the accumulator.
fn expand_component(
    acc: &[(DotVec, AlphaPoly)],
    circles: &[usize],
    chi: i64,
    dots: u32,
) -> Result<Vec<(DotVec, AlphaPoly)>> {
    let b = circles.len() as i64;
    let two_g = 2 - b - chi;
    if two_g < 0 || two_g % 2 != 0 {
        return Err(Error::domain(format!(
            "impossible surface component: chi={chi}, boundary={b}"
        )));
    }
    let g = (two_g / 2) as u32;
    // a handle is a factor 2 and one extra dot
    let mut scalar = AlphaPoly::from_int(BigInt::from(1) << g);
    let total_dots = dots + g;
    scalar = scalar.mul(&AlphaPoly::monomial(total_dots / 2, 1.into()));
    let parity = total_dots % 2;
    if b == 0 {
        // closed component: sphere with `parity` dots evaluates to 0 or 1
        if parity == 0 {
            return Ok(vec![]);
        }
        return Ok(acc
            .iter()
            .map(|(d, c)| (d.clone(), c.mul(&scalar)))
            .collect());
    }
    // neck-cut into disks: recursively split off the first circle
    fn cuts(circles: &[usize], dots: u32) -> Vec<(Vec<(usize, u8)>, u32)> {
        if circles.len() == 1 {
            let alpha_pow = dots / 2;
            return vec![(vec![(circles[0], (dots % 2) as u8)], alpha_pow)];
        }
        let first = circles[0];
        let rest = &circles[1..];
        let mut out = Vec::new();
        for (mut assign, a) in cuts(rest, dots) {
            assign.insert(0, (first, 1));
            out.push((assign, a));
        }
        for (mut assign, a) in cuts(rest, dots + 1) {
            assign.insert(0, (first, 0));
            out.push((assign, a));
        }
        out
    }
    let mut out = Vec::new();
    for (assign, alpha_pow) in cuts(circles, parity as u32) {
        let coeff = scalar.mul(&AlphaPoly::monomial(alpha_pow, 1.into()));
        for (d, c) in acc {
            let mut nd = d.clone();
            let mut ok = true;
            for &(circle, dot) in &assign {
                if nd[circle] != 0 {
                    ok = false;
                    break;
                }
                nd[circle] = dot;
            }
            debug_assert!(ok, "component circles assigned twice");
            if ok {
                out.push((nd, c.mul(&coeff)));
            }
        }
    }
    Ok(out)
}

/// Disk bounding one free circle of the object: the delooping map component.
/// Undotted caps land in q_shift - 1, dotted caps in q_shift + 1.
pub fn cap(obj: &DiagObject, circle: usize, dotted: bool) -> Result<(DiagObject, CobLc)> {
    if circle >= obj.circles {
        return Err(Error::IndexOutOfRange(format!("circle {circle}")));
    }
    let dq = if dotted { 1 } else { -1 };
    let tgt = DiagObject::with_circles(obj.matching.clone(), obj.q_shift + dq, obj.circles - 1);
    let sc = boundary_circles(obj, &tgt)?;
    // the capped circle is the given source circle; free circles above it
    // shift down by one on the target side
    let mut expanded: Vec<(DotVec, AlphaPoly)> = vec![(vec![0; sc.count], AlphaPoly::one())];
    let mut parts: Vec<(Vec<usize>, i64, u32)> =
        vec![(vec![sc.src_free(circle)], 1, u32::from(dotted))];
    for c in 0..obj.circles {
        if c == circle {
            continue;
        }
        let t = if c < circle { c } else { c - 1 };
        parts.push((vec![sc.src_free(c), sc.tgt_free(t)], 0, 0));
    }
    let mut covered = vec![false; sc.count];
    for (cs, _, _) in &parts {
        for &c in cs {
            covered[c] = true;
        }
    }
    for c in 0..sc.count {
        if !covered[c] {
            parts.push((vec![c], 1, 0));
        }
    }
    for (circles, chi, dots) in parts {
        expanded = expand_component(&expanded, &circles, chi, dots)?;
    }
    Ok((tgt.clone(), CobLc::from_terms(obj.clone(), tgt, expanded)?))
}

/// Disk birthing a new free circle, appended as the last identifier: the
/// inverse delooping component. A dotted cup raises q_shift by 1 (it starts
/// from the q^{-1} summand), an undotted cup lowers it.
pub fn cup(obj: &DiagObject, dotted: bool) -> Result<(DiagObject, CobLc)> {
    let dq = if dotted { 1 } else { -1 };
    let tgt = DiagObject::with_circles(obj.matching.clone(), obj.q_shift + dq, obj.circles + 1);
    let sc = boundary_circles(obj, &tgt)?;
    let mut expanded: Vec<(DotVec, AlphaPoly)> = vec![(vec![0; sc.count], AlphaPoly::one())];
    let mut parts: Vec<(Vec<usize>, i64, u32)> =
        vec![(vec![sc.tgt_free(obj.circles)], 1, u32::from(dotted))];
    for c in 0..obj.circles {
        parts.push((vec![sc.src_free(c), sc.tgt_free(c)], 0, 0));
    }
    let mut covered = vec![false; sc.count];
    for (cs, _, _) in &parts {
        for &c in cs {
            covered[c] = true;
        }
    }
    for c in 0..sc.count {
        if !covered[c] {
            parts.push((vec![c], 1, 0));
        }
    }
    for (circles, chi, dots) in parts {
        expanded = expand_component(&expanded, &circles, chi, dots)?;
    }
    Ok((tgt.clone(), CobLc::from_terms(obj.clone(), tgt, expanded)?))
}

/// Vertical composition: `self` then `g` (g glued on top along the shared
/// middle object). Surfaces merge along the middle diagram's arcs and
/// circles; merged components are reduced to canonical form.
pub fn compose(f: &CobLc, g: &CobLc) -> Result<CobLc> {
    if f.tgt != g.src {
        return Err(Error::BoundaryMismatch(format!(
            "compose: middle objects differ ({} vs {})",
            f.tgt, g.src
        )));
    }
    let mid = &f.tgt;
    let n2 = 2 * mid.n;
    let nf = f.circles.count;
    let ng = g.circles.count;
    // gluings along the middle diagram: each arc is an interval (chi -1),
    // each free circle a circle gluing (chi 0)
    let mut gluings: Vec<(usize, usize, bool)> = Vec::new();
    for &(a, b) in mid.matching.pairs() {
        let _ = b;
        gluings.push((f.circles.at_point(a), nf + g.circles.at_point(a), true));
    }
    for i in 0..mid.circles {
        gluings.push((f.circles.tgt_free(i), nf + g.circles.src_free(i), false));
    }
    let out_circles = boundary_circles(&f.src, &g.tgt)?;
    // map each new boundary circle to a node of the glued surface
    let mut assignment = vec![usize::MAX; out_circles.count];
    for p in 1..=n2 {
        assignment[out_circles.at_point(p)] = f.circles.at_point(p);
    }
    for i in 0..f.src.circles {
        assignment[out_circles.src_free(i)] = f.circles.src_free(i);
    }
    for i in 0..g.tgt.circles {
        assignment[out_circles.tgt_free(i)] = nf + g.circles.tgt_free(i);
    }
    glue(
        f.src.clone(),
        g.tgt.clone(),
        out_circles,
        nf + ng,
        &gluings,
        &assignment,
        f.terms().flat_map(|(df, cf)| {
            g.terms().map(move |(dg, cg)| {
                let mut dots = Vec::with_capacity(nf + ng);
                dots.extend_from_slice(df);
                dots.extend_from_slice(dg);
                (dots, cf.mul(cg))
            })
        }),
    )
}

/// Horizontal (planar) composition: `g` stacked above `f`. Both halves glue
/// along the n interface vertical lines; loops created by the diagram
/// composition become free circles of the composite objects.
pub fn hcompose(f: &CobLc, g: &CobLc) -> Result<CobLc> {
    let (src, src_loops) = stack_objects(&f.src, &g.src)?;
    let (tgt, tgt_loops) = stack_objects(&f.tgt, &g.tgt)?;
    let n = f.src.n;
    let nf = f.circles.count;
    let mut gluings: Vec<(usize, usize, bool)> = Vec::new();
    for p in 1..=n {
        // f's top point n+p meets g's bottom point p
        gluings.push((f.circles.at_point(n + p), nf + g.circles.at_point(p), true));
    }
    let out_circles = boundary_circles(&src, &tgt)?;
    let mut assignment = vec![usize::MAX; out_circles.count];
    for p in 1..=n {
        assignment[out_circles.at_point(p)] = f.circles.at_point(p);
        assignment[out_circles.at_point(n + p)] = nf + g.circles.at_point(n + p);
    }
    // source free circles: f's, then g's, then interface loops
    for i in 0..f.src.circles {
        assignment[out_circles.src_free(i)] = f.circles.src_free(i);
    }
    for i in 0..g.src.circles {
        assignment[out_circles.src_free(f.src.circles + i)] = nf + g.circles.src_free(i);
    }
    for (k, lp) in src_loops.iter().enumerate() {
        let pos = lp[0]; // an interface position the loop passes through
        assignment[out_circles.src_free(f.src.circles + g.src.circles + k)] =
            f.circles.at_point(n + pos);
    }
    for i in 0..f.tgt.circles {
        assignment[out_circles.tgt_free(i)] = f.circles.tgt_free(i);
    }
    for i in 0..g.tgt.circles {
        assignment[out_circles.tgt_free(f.tgt.circles + i)] = nf + g.circles.tgt_free(i);
    }
    for (k, lp) in tgt_loops.iter().enumerate() {
        let pos = lp[0];
        assignment[out_circles.tgt_free(f.tgt.circles + g.tgt.circles + k)] =
            f.circles.at_point(n + pos);
    }
    let ng = g.circles.count;
    glue(
        src,
        tgt,
        out_circles,
        nf + ng,
        &gluings,
        &assignment,
        f.terms().flat_map(|(df, cf)| {
            g.terms().map(move |(dg, cg)| {
                let mut dots = Vec::with_capacity(nf + ng);
                dots.extend_from_slice(df);
                dots.extend_from_slice(dg);
                (dots, cf.mul(cg))
            })
        }),
    )
}

/// Planar stacking of objects: `top` above `bottom`; loops become new free
/// circles of the composite, ordered after both operands' own circles.
pub fn stack_objects(bottom: &DiagObject, top: &DiagObject) -> Result<(DiagObject, Vec<Vec<usize>>)> {
    let (m, loops) = bottom.matching.compose_detailed(&top.matching)?;
    let obj = DiagObject::with_circles(
        m,
        bottom.q_shift + top.q_shift,
        bottom.circles + top.circles + loops.len(),
    );
    Ok((obj, loops))
}

/// Closure of a morphism: caps the 2n vertical boundary lines with annular
/// strips joining bottom point i to top point i, producing a morphism
/// between closed (n = 0) objects.
pub fn trace_morphism(f: &CobLc) -> Result<CobLc> {
    let n = f.src.n;
    let src = closed_object(&f.src);
    let tgt = closed_object(&f.tgt);
    let nf = f.circles.count;
    // nodes: f's circles then n strips (each a disk glued along two lines)
    let mut gluings: Vec<(usize, usize, bool)> = Vec::new();
    for i in 1..=n {
        let strip = nf + i - 1;
        gluings.push((f.circles.at_point(i), strip, true));
        gluings.push((f.circles.at_point(n + i), strip, true));
    }
    let out_circles = boundary_circles(&src, &tgt)?;
    let src_comps = f.src.matching.closure_components();
    let tgt_comps = f.tgt.matching.closure_components();
    let mut assignment = vec![usize::MAX; out_circles.count];
    for (k, comp) in src_comps.iter().enumerate() {
        assignment[out_circles.src_free(k)] = f.circles.at_point(comp[0]);
    }
    for i in 0..f.src.circles {
        assignment[out_circles.src_free(src_comps.len() + i)] = f.circles.src_free(i);
    }
    for (k, comp) in tgt_comps.iter().enumerate() {
        assignment[out_circles.tgt_free(k)] = f.circles.at_point(comp[0]);
    }
    for i in 0..f.tgt.circles {
        assignment[out_circles.tgt_free(tgt_comps.len() + i)] = f.circles.tgt_free(i);
    }
    glue(
        src,
        tgt,
        out_circles,
        nf + n,
        &gluings,
        &assignment,
        f.terms().map(|(d, c)| {
            let mut dots = Vec::with_capacity(nf + n);
            dots.extend_from_slice(d);
            dots.extend(std::iter::repeat(0).take(n));
            (dots, c.clone())
        }),
    )
}

/// Closure of an object: arcs become circles over the empty matching.
pub fn closed_object(obj: &DiagObject) -> DiagObject {
    let comps = obj.matching.closure_loops();
    DiagObject::with_circles(
        Matching::identity(0),
        obj.q_shift,
        comps + obj.circles,
    )
}

/// Core gluing engine shared by the composition operations: given per-term
/// dot assignments on the node circles, gluing edges (interval gluings cost
/// one Euler characteristic unit, circle gluings none), and the map from new
/// boundary circles to nodes, reduces every glued component to canonical
/// form and accumulates the resulting linear combination.
#[allow(clippy::too_many_arguments)]
fn glue(
    src: DiagObject,
    tgt: DiagObject,
    out_circles: BoundaryCircles,
    n_nodes: usize,
    gluings: &[(usize, usize, bool)],
    assignment: &[usize],
    pairs: impl Iterator<Item = (DotVec, AlphaPoly)>,
) -> Result<CobLc> {
    // component structure is the same for every term; compute it once
    let mut uf = UnionFind::new(n_nodes);
    for &(a, b, _) in gluings {
        uf.union(a, b);
    }
    let mut comp_of = vec![usize::MAX; n_nodes];
    let mut comps: Vec<Vec<usize>> = Vec::new(); // node lists
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for node in 0..n_nodes {
        let r = uf.find(node);
        let next = comps.len();
        let id = *index.entry(r).or_insert(next);
        if id == comps.len() {
            comps.push(Vec::new());
        }
        comps[id].push(node);
        comp_of[node] = id;
    }
    let mut comp_chi_penalty = vec![0i64; comps.len()];
    for &(a, _, interval) in gluings {
        if interval {
            comp_chi_penalty[comp_of[uf.find(a)]] += 1;
        }
    }
    // boundary circles per component
    let mut comp_circles: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for (circle, &node) in assignment.iter().enumerate() {
        comp_circles[comp_of[uf.find(node)]].push(circle);
    }
    let mut out = CobLc::zero(src, tgt)?;
    for (dots, coeff) in pairs {
        if coeff.is_zero() {
            continue;
        }
        // chi of each glued component: one per disk minus interval gluings
        let mut expanded: Vec<(DotVec, AlphaPoly)> =
            vec![(vec![0; out.circles.count], coeff)];
        let mut dead = false;
        for (cid, nodes) in comps.iter().enumerate() {
            let chi = nodes.len() as i64 - comp_chi_penalty[cid];
            let d: u32 = nodes.iter().map(|&nd| dots[nd] as u32).sum();
            expanded = expand_component(&expanded, &comp_circles[cid], chi, d)?;
            if expanded.is_empty() {
                dead = true;
                break;
            }
        }
        if dead {
            continue;
        }
        for (d, c) in expanded {
            out.add_term(d, &c);
        }
    }
    Ok(out)
}

/// Serialized form of a morphism: block list with coefficient strings.
#[derive(Serialize, Deserialize)]
struct CobLcRepr {
    source: DiagObject,
    target: DiagObject,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    blocks: Vec<BlockRepr>,
    coeff: AlphaPoly,
}

#[derive(Serialize, Deserialize)]
struct BlockRepr {
    circles: Vec<usize>,
    dot: bool,
}

impl Serialize for CobLc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = CobLcRepr {
            source: self.src.clone(),
            target: self.tgt.clone(),
            terms: self
                .terms()
                .map(|(d, c)| TermRepr {
                    blocks: d
                        .iter()
                        .enumerate()
                        .map(|(i, &dot)| BlockRepr { circles: vec![i], dot: dot != 0 })
                        .collect(),
                    coeff: c.clone(),
                })
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CobLc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CobLcRepr::deserialize(d)?;
        let mut lc = CobLc::zero(repr.source, repr.target).map_err(serde::de::Error::custom)?;
        for t in repr.terms {
            let mut dots = vec![0u8; lc.circles.count];
            for b in t.blocks {
                for c in b.circles {
                    if c >= dots.len() {
                        return Err(serde::de::Error::custom("circle index out of range"));
                    }
                    if b.dot {
                        dots[c] = 1;
                    }
                }
            }
            lc.add_term(dots, &t.coeff);
        }
        Ok(lc)
    }
}

impl fmt::Display for CobLc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let dots: Vec<String> = d
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, _)| i.to_string())
                .collect();
            if dots.is_empty() {
                write!(f, "({c})·[sheet]")?;
            } else {
                write!(f, "({c})·[dots on {}]", dots.join(","))?;
            }
        }
        Ok(())
    }
}
