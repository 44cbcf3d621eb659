//! Homotopy-equivalence-preserving reduction of chain complexes: delooping,
//! Gaussian elimination of unit identity entries, simultaneous Gaussian
//! elimination, and a deterministic fixpoint reducer.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cob::{self, CobLc};
use crate::complex::{compose_matrices, ChainComplex, CobMatrix};
use crate::{Error, Result};

/// Audit log of reduction steps; replaying the steps on the original input
/// reproduces the output bit-exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionStep {
    /// Replace the object at (degree index, object index) by its two
    /// delooped summands (the object's last free circle is removed).
    Deloop { degree: usize, index: usize },
    /// Gaussian elimination of the unit identity entry at (degree index,
    /// row, column) of the differential.
    Eliminate { degree: usize, row: usize, col: usize },
}

/// Replays a recorded trace.
pub fn replay(c: &ChainComplex, trace: &ReductionTrace) -> Result<ChainComplex> {
    let mut c = c.clone();
    for step in &trace.steps {
        match *step {
            ReductionStep::Deloop { degree, index } => deloop_at(&mut c, degree, index)?,
            ReductionStep::Eliminate { degree, row, col } => {
                eliminate_at(&mut c, degree, row, col)?
            }
        }
    }
    Ok(c)
}

/// Replaces every object carrying a free circle by the pair of q-shifted
/// circle-free objects, conjugating incident differentials by the delooping
/// isomorphisms.
pub fn deloop(c: &ChainComplex) -> Result<(ChainComplex, ReductionTrace)> {
    let mut out = c.clone();
    let mut trace = ReductionTrace::default();
    loop {
        let mut found = None;
        'scan: for (k, g) in out.groups.iter().enumerate() {
            for (i, o) in g.iter().enumerate() {
                if o.circles > 0 {
                    found = Some((k, i));
                    break 'scan;
                }
            }
        }
        match found {
            None => break,
            Some((k, i)) => {
                deloop_at(&mut out, k, i)?;
                trace.steps.push(ReductionStep::Deloop { degree: k, index: i });
            }
        }
    }
    Ok((out, trace))
}

fn deloop_at(c: &mut ChainComplex, k: usize, i: usize) -> Result<()> {
    let obj = c.groups[k][i].clone();
    if obj.circles == 0 {
        return Err(Error::domain("object has no free circle to deloop"));
    }
    let circle = obj.circles - 1;
    let (lo_obj, cap_plain) = cob::cap(&obj, circle, false)?;
    let (hi_obj, cap_dot) = cob::cap(&obj, circle, true)?;
    let (_, cup_dot) = cob::cup(&lo_obj, true)?;
    let (_, cup_plain) = cob::cup(&hi_obj, false)?;
    debug_assert_eq!(cup_dot.tgt, obj);
    debug_assert_eq!(cup_plain.tgt, obj);
    // replace object i by [q^-1 copy, q^+1 copy]
    c.groups[k].splice(i..=i, [lo_obj, hi_obj]);
    // incoming entries: post-compose with the two caps
    if k > 0 {
        let d = &mut c.diffs[k - 1];
        let mut nd = CobMatrix::zero(d.rows + 1, d.cols);
        for (r, col, v) in d.iter() {
            if r < i {
                nd.add_to(r, col, v)?;
            } else if r > i {
                nd.add_to(r + 1, col, v)?;
            } else {
                nd.add_to(i, col, &cob::compose(v, &cap_plain)?)?;
                nd.add_to(i + 1, col, &cob::compose(v, &cap_dot)?)?;
            }
        }
        *d = nd;
    }
    // outgoing entries: pre-compose with the two cups
    if k < c.diffs.len() {
        let d = &mut c.diffs[k];
        let mut nd = CobMatrix::zero(d.rows, d.cols + 1);
        for (r, col, v) in d.iter() {
            if col < i {
                nd.add_to(r, col, v)?;
            } else if col > i {
                nd.add_to(r, col + 1, v)?;
            } else {
                nd.add_to(r, i, &cob::compose(&cup_dot, v)?)?;
                nd.add_to(r, i + 1, &cob::compose(&cup_plain, v)?)?;
            }
        }
        *d = nd;
    }
    Ok(())
}

/// True if the entry is u times the identity of a circle-free object with
/// u a unit of Z[alpha] (that is, u = ±1); returns u.
fn eliminable_unit(v: &CobLc) -> Option<i64> {
    let c = v.as_scalar_identity()?;
    let (exp, k) = c.as_monomial()?;
    if exp != 0 {
        return None;
    }
    if *k == BigInt::from(1) {
        Some(1)
    } else if *k == BigInt::from(-1) {
        Some(-1)
    } else {
        None
    }
}

/// Gaussian elimination of the unit identity entry at (degree index, row,
/// column): the two incident objects are removed and the surviving entries
/// updated by the standard correction term, preserving the homotopy type.
pub fn eliminate(
    c: &ChainComplex,
    degree: usize,
    row: usize,
    col: usize,
) -> Result<(ChainComplex, ReductionTrace)> {
    let mut out = c.clone();
    eliminate_at(&mut out, degree, row, col)?;
    Ok((
        out,
        ReductionTrace {
            steps: vec![ReductionStep::Eliminate { degree, row, col }],
        },
    ))
}

fn eliminate_at(c: &mut ChainComplex, k: usize, row: usize, col: usize) -> Result<()> {
    let d = c
        .diffs
        .get(k)
        .ok_or_else(|| Error::IndexOutOfRange(format!("differential {k}")))?;
    let entry = d
        .entry(row, col)
        .ok_or_else(|| Error::NotEliminable("entry is zero".into()))?;
    let u = eliminable_unit(entry)
        .ok_or_else(|| Error::NotEliminable(format!("entry is not ±identity: {entry}")))?;
    // corrected entries: eta - mu phi^{-1} lambda, with phi^{-1} = u phi
    let d = &c.diffs[k];
    let mut corrections: Vec<(usize, usize, CobLc)> = Vec::new();
    for (r2, c2, mu) in d.iter() {
        if r2 == row || c2 != col {
            continue;
        }
        for (r1, c1, lambda) in d.iter() {
            if r1 != row || c1 == col {
                continue;
            }
            let corr = cob::compose(lambda, mu)?.scale_int(-u);
            corrections.push((r2, c1, corr));
        }
    }
    let d = &mut c.diffs[k];
    for (r, cc, v) in corrections {
        d.add_to(r, cc, &v)?;
    }
    // remove the two objects and their rows/columns
    c.groups[k].remove(col);
    c.groups[k + 1].remove(row);
    c.diffs[k].delete(Some(row), Some(col));
    if k > 0 {
        c.diffs[k - 1].delete(Some(col), None);
    }
    if k + 1 < c.diffs.len() {
        c.diffs[k + 1].delete(None, Some(row));
    }
    Ok(())
}

/// Block schedule for simultaneous Gaussian elimination: per stored degree,
/// the object indices forming the A block and the B block (the C block is
/// the rest). The A->A submatrices at even steps and B->B submatrices at
/// odd steps must be signed permutation identities.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SimSchedule {
    pub blocks: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Simultaneous Gaussian elimination: removes all A and B objects at once,
/// with the corrected differential computed blockwise from the one-step
/// formulas q_even = j - g a^{-1} c and q_odd = j - h e^{-1} f.
pub fn eliminate_simultaneous(
    c: &ChainComplex,
    schedule: &SimSchedule,
) -> Result<ChainComplex> {
    let len = c.groups.len();
    if schedule.blocks.len() != len {
        return Err(Error::domain("schedule length mismatch"));
    }
    let mut keep: Vec<Vec<usize>> = Vec::with_capacity(len);
    for (k, (a, b)) in schedule.blocks.iter().enumerate() {
        let total = c.groups[k].len();
        let mut is_cut = vec![false; total];
        for &i in a.iter().chain(b) {
            if i >= total {
                return Err(Error::IndexOutOfRange(format!("schedule object {i} at degree {k}")));
            }
            is_cut[i] = true;
        }
        keep.push((0..total).filter(|&i| !is_cut[i]).collect());
    }
    // invert the A->A (even k) and B->B (odd k) submatrices: they must be
    // signed permutation identities
    let inverse_block = |k: usize, rows: &[usize], cols: &[usize]| -> Result<Vec<(usize, usize, i64)>> {
        // entries of the inverse as (col_index_in_cols, row_index_in_rows, sign)
        let d = &c.diffs[k];
        let mut inv = Vec::new();
        let mut used_r = vec![false; rows.len()];
        for (ci, &cc) in cols.iter().enumerate() {
            let mut hit = None;
            for (ri, &rr) in rows.iter().enumerate() {
                if let Some(v) = d.entry(rr, cc) {
                    if let Some(u) = eliminable_unit(v) {
                        if hit.is_some() {
                            return Err(Error::NotEliminable(
                                "schedule block is not a permutation identity".into(),
                            ));
                        }
                        hit = Some((ri, u));
                    } else if !v.is_zero() {
                        return Err(Error::NotEliminable(
                            "schedule block entry is not ±identity".into(),
                        ));
                    }
                }
            }
            let (ri, u) = hit.ok_or_else(|| {
                Error::NotEliminable("schedule block column has no invertible entry".into())
            })?;
            if used_r[ri] {
                return Err(Error::NotEliminable("schedule block row hit twice".into()));
            }
            used_r[ri] = true;
            inv.push((ci, ri, u));
        }
        if !used_r.iter().all(|&x| x) {
            return Err(Error::NotEliminable("schedule blocks are not square".into()));
        }
        Ok(inv)
    };
    let mut groups: Vec<Vec<_>> = Vec::with_capacity(len);
    for (k, ks) in keep.iter().enumerate() {
        groups.push(ks.iter().map(|&i| c.groups[k][i].clone()).collect());
    }
    let mut diffs = Vec::new();
    for k in 0..c.diffs.len() {
        let d = &c.diffs[k];
        // at even k eliminate A_k -> A_{k+1}; at odd k eliminate B -> B
        let (cut_src, cut_tgt) = if k % 2 == 0 {
            (&schedule.blocks[k].0, &schedule.blocks[k + 1].0)
        } else {
            (&schedule.blocks[k].1, &schedule.blocks[k + 1].1)
        };
        let inv = inverse_block(k, cut_tgt, cut_src)?;
        let mut nd = CobMatrix::zero(keep[k + 1].len(), keep[k].len());
        for (nc, &oc) in keep[k].iter().enumerate() {
            for (nr, &or) in keep[k + 1].iter().enumerate() {
                // j entry
                let mut acc: Option<CobLc> = d.entry(or, oc).cloned();
                // correction: - (C -> cut_tgt) then inverse then (cut_src -> C)
                for &(ci, ri, u) in &inv {
                    let lambda = d.entry(cut_tgt[ri], oc);
                    let mu = d.entry(or, cut_src[ci]);
                    if let (Some(lambda), Some(mu)) = (lambda, mu) {
                        let corr = cob::compose(lambda, mu)?.scale_int(-u);
                        acc = Some(match acc {
                            Some(a) => a.add(&corr)?,
                            None => corr,
                        });
                    }
                }
                if let Some(v) = acc {
                    nd.set(nr, nc, v);
                }
            }
        }
        diffs.push(nd);
    }
    Ok(ChainComplex {
        n: c.n,
        min_degree: c.min_degree,
        groups,
        diffs,
        tail: c.tail,
    })
}

/// Fixpoint reduction: deloop everything, then repeatedly eliminate the
/// first eligible unit identity entry in scan order (lowest degree, then
/// row, then column) until none remain.
pub fn reduce(c: &ChainComplex) -> Result<(ChainComplex, ReductionTrace)> {
    let (mut out, mut trace) = deloop(c)?;
    let mut start_k = 0usize;
    loop {
        let mut found = None;
        'scan: for k in start_k..out.diffs.len() {
            for (r, cc, v) in out.diffs[k].iter() {
                if eliminable_unit(v).is_some()
                    && out.groups[k][cc] == out.groups[k + 1][r]
                    && out.groups[k][cc].circles == 0
                {
                    found = Some((k, r, cc));
                    break 'scan;
                }
            }
        }
        match found {
            None => {
                if start_k == 0 {
                    break;
                }
                // corrections can only appear at the elimination degree;
                // degrees below the scan start are already clean
                start_k = 0;
            }
            Some((k, r, cc)) => {
                eliminate_at(&mut out, k, r, cc)?;
                trace.steps.push(ReductionStep::Eliminate { degree: k, row: r, col: cc });
                start_k = k.saturating_sub(1);
            }
        }
    }
    Ok((out, trace))
}

/// True iff the reduced complex has no chain groups in degrees below
/// `length - window`.
pub fn contractible_in_window(c: &ChainComplex, length: usize, window: usize) -> Result<bool> {
    let (r, _) = reduce(c)?;
    let bound = length as i64 - window as i64;
    for (k, g) in r.groups.iter().enumerate() {
        let deg = r.min_degree + k as i64;
        if deg < bound && !g.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cob::{saddle, DiagObject};
    use crate::coeff::EXACT_ORDER;
    use crate::complex::Tail;
    use crate::tl::Matching;

    fn circle_complex() -> ChainComplex {
        ChainComplex::from_object(DiagObject::with_circles(Matching::identity(0), 0, 1))
    }

    #[test]
    fn deloop_circle_object() {
        let c = circle_complex();
        let (d, trace) = deloop(&c).unwrap();
        assert_eq!(d.groups[0].len(), 2);
        assert_eq!(d.groups[0][0].q_shift, -1);
        assert_eq!(d.groups[0][1].q_shift, 1);
        assert_eq!(trace.steps.len(), 1);
        // circle-free complexes are untouched
        let id = ChainComplex::identity_complex(2);
        let (d2, t2) = deloop(&id).unwrap();
        assert_eq!(d2, id);
        assert!(t2.steps.is_empty());
    }

    #[test]
    fn deloop_preserves_euler() {
        let c = circle_complex();
        let (d, _) = deloop(&c).unwrap();
        assert_eq!(c.euler(EXACT_ORDER), d.euler(EXACT_ORDER));
    }

    #[test]
    fn eliminate_identity_pair_gives_zero_complex() {
        let o = DiagObject::identity(2, 0);
        let mut d = CobMatrix::zero(1, 1);
        d.set(0, 0, CobLc::identity(&o));
        let c = ChainComplex {
            n: 2,
            min_degree: 0,
            groups: vec![vec![o.clone()], vec![o]],
            diffs: vec![d],
            tail: Tail::Complete,
        };
        let (r, _) = eliminate(&c, 0, 0, 0).unwrap();
        assert!(r.is_empty());
    }

    /// Synthetic four-term complex with an invertible middle entry; checks
    /// the corrected bottom-row entry against an independent composition.
    #[test]
    fn eliminate_bottom_row_formula() {
        // A -> B ⊕ C -> D ⊕ E -> F with phi: B -> D the identity.
        // Use 2-strand objects; maps built from saddles and dots.
        let id2 = DiagObject::identity(2, 0);
        let (e1q, sad) = saddle(&id2, 1, 2).unwrap(); // q e1
        let b = e1q.clone();
        let d_obj = e1q.clone();
        let a = id2.clone();
        let c_obj = id2.clone();
        let e_obj = e1q.clone();
        let f_obj = DiagObject::with_circles(e1q.matching.clone(), 3, 0);
        // lambda: C -> D is the saddle, mu: B -> E is 2·identity (degree 0),
        // eta: C -> E is a saddle; phi: B -> D identity
        let phi = CobLc::identity(&b);
        let lambda = sad.clone();
        let mu = CobLc::identity(&b).scale_int(2);
        let eta = sad.clone();
        // alpha: A -> B saddle; we leave psi: A -> C zero. For d^2 = 0 we
        // need phi∘alpha + lambda∘psi = 0 ... this synthetic test skips
        // validation and checks only the correction arithmetic.
        let dot = CobLc::identity(&e_obj).add_dot(1);
        let _ = (&a, &c_obj, &f_obj, &dot);
        let groups = vec![
            vec![c_obj.clone()],
            vec![b.clone(), c_obj.clone()],
            vec![d_obj.clone(), e_obj.clone()],
        ];
        let mut d0 = CobMatrix::zero(2, 1);
        d0.set(1, 0, CobLc::identity(&c_obj)); // include C
        let mut d1 = CobMatrix::zero(2, 2);
        d1.set(0, 0, phi.clone());
        d1.set(0, 1, lambda.clone());
        d1.set(1, 0, mu.clone());
        d1.set(1, 1, eta.clone());
        let cpx = ChainComplex {
            n: 2,
            min_degree: 0,
            groups,
            diffs: vec![d0, d1],
            tail: Tail::Complete,
        };
        let (r, _) = eliminate(&cpx, 1, 0, 0).unwrap();
        // surviving entry: eta - mu phi^{-1} lambda = sad - 2·sad = -sad
        let got = r.diffs[1].entry(0, 0).unwrap();
        let expected = eta.sub(&cob::compose(&lambda, &mu).unwrap()).unwrap();
        assert_eq!(got, &expected);
        assert_eq!(got, &sad.scale_int(-1));
    }

    #[test]
    fn reduce_is_idempotent_on_circle() {
        let c = circle_complex();
        let (r1, _) = reduce(&c).unwrap();
        let (r2, _) = reduce(&r1).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.groups[0].len(), 2);
    }

    #[test]
    fn replay_reproduces_output() {
        let c = circle_complex();
        let (r, trace) = reduce(&c).unwrap();
        let replayed = replay(&c, &trace).unwrap();
        assert_eq!(r, replayed);
    }
}
