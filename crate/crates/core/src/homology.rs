//! Integral graded homology of closed complexes after delooping, computed
//! through Smith normal form, with the deformation parameter specialized to
//! an integer.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::simplify;
use crate::{Error, Result};

/// One free rank-1 summand per entry: `degrees[k][i]` is the q-degree of the
/// i-th summand in homological degree `min_degree + k`. Differentials are
/// integer matrices; the specialized differential never lowers q-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    pub min_degree: i64,
    pub degrees: Vec<Vec<i64>>,
    pub mats: Vec<IntMatrix>,
}

/// Dense arbitrary-precision integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = IntMatrix::zero(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }

    pub fn column_submatrix(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, j)] = self[(i, c)].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{:>4} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Smith normal form U M V = D with U, V unimodular and the diagonal entries
/// forming a divisibility chain. Pivoting picks the entry of minimal nonzero
/// absolute value to bound coefficient growth.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let rank_bound = m.rows.min(m.cols);
    let mut t = 0;
    while t < rank_bound {
        // pick the minimal nonzero |entry| in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                if !d[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);
        // clear row and column t
        let mut again = false;
        for i in t + 1..d.rows {
            if !d[(i, t)].is_zero() {
                let q = div_round(&d[(i, t)], &d[(t, t)]);
                row_op(&mut d, &mut u, i, t, &q);
                if !d[(i, t)].is_zero() {
                    again = true;
                }
            }
        }
        for j in t + 1..d.cols {
            if !d[(t, j)].is_zero() {
                let q = div_round(&d[(t, j)], &d[(t, t)]);
                col_op(&mut d, &mut v, j, t, &q);
                if !d[(t, j)].is_zero() {
                    again = true;
                }
            }
        }
        if again {
            continue; // smaller remainders now exist; re-pivot this block
        }
        // divisibility: fold in any entry the pivot does not divide
        let mut fixed = true;
        'outer: for i in t + 1..d.rows {
            for j in t + 1..d.cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    // add row i to row t and restart the block
                    add_row(&mut d, &mut u, t, i);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, &mut u, t);
        }
        t += 1;
    }
    (d, u, v)
}

fn swap_rows(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols {
        let (x, y) = (d[(a, j)].clone(), d[(b, j)].clone());
        d[(a, j)] = y;
        d[(b, j)] = x;
    }
    for j in 0..u.cols {
        let (x, y) = (u[(a, j)].clone(), u[(b, j)].clone());
        u[(a, j)] = y;
        u[(b, j)] = x;
    }
}

fn swap_cols(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        let (x, y) = (d[(i, a)].clone(), d[(i, b)].clone());
        d[(i, a)] = y;
        d[(i, b)] = x;
    }
    for i in 0..v.rows {
        let (x, y) = (v[(i, a)].clone(), v[(i, b)].clone());
        v[(i, a)] = y;
        v[(i, b)] = x;
    }
}

/// row_i -= q * row_t
fn row_op(d: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    for j in 0..d.cols {
        let v = q * &d[(t, j)];
        d[(i, j)] -= v;
    }
    for j in 0..u.cols {
        let v = q * &u[(t, j)];
        u[(i, j)] -= v;
    }
}

/// col_j -= q * col_t
fn col_op(d: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for i in 0..d.rows {
        let w = q * &d[(i, t)];
        d[(i, j)] -= w;
    }
    for i in 0..v.rows {
        let w = q * &v[(i, t)];
        v[(i, j)] -= w;
    }
}

fn add_row(d: &mut IntMatrix, u: &mut IntMatrix, t: usize, i: usize) {
    for j in 0..d.cols {
        let v = d[(i, j)].clone();
        d[(t, j)] += v;
    }
    for j in 0..u.cols {
        let v = u[(i, j)].clone();
        u[(t, j)] += v;
    }
}

fn negate_row(d: &mut IntMatrix, u: &mut IntMatrix, t: usize) {
    for j in 0..d.cols {
        let v = -d[(t, j)].clone();
        d[(t, j)] = v;
    }
    for j in 0..u.cols {
        let v = -u[(t, j)].clone();
        u[(t, j)] = v;
    }
}

/// Quotient minimizing the remainder's absolute value.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a / b;
    let r = a - &q * b;
    if (r.abs() << 1) > b.abs() {
        if (&r * b).is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Saturated basis of the integer kernel of M, as matrix columns.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (d, _, v) = smith_normal_form(m);
    let rank = (0..d.rows.min(d.cols)).take_while(|&i| !d[(i, i)].is_zero()).count();
    let cols: Vec<usize> = (rank..m.cols).collect();
    v.column_submatrix(&cols)
}

/// Graded homology groups: one entry per (homological degree, q-degree).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedHomology {
    pub entries: Vec<HomologyEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyEntry {
    pub degree: i64,
    pub q_degree: i64,
    pub free_rank: usize,
    /// Torsion orders > 1, sorted, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl GradedHomology {
    pub fn at(&self, degree: i64) -> Vec<&HomologyEntry> {
        self.entries.iter().filter(|e| e.degree == degree).collect()
    }
}

impl fmt::Display for GradedHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut by_deg: BTreeMap<i64, Vec<&HomologyEntry>> = BTreeMap::new();
        for e in &self.entries {
            by_deg.entry(e.degree).or_default().push(e);
        }
        for (deg, entries) in by_deg {
            write!(f, "H_{deg} =")?;
            let mut first = true;
            for e in entries {
                let mut parts: Vec<String> = Vec::new();
                if e.free_rank > 0 {
                    let z = if e.free_rank == 1 {
                        "Z".to_string()
                    } else {
                        format!("Z^{}", e.free_rank)
                    };
                    parts.push(z);
                }
                for t in &e.torsion {
                    parts.push(format!("Z/{t}"));
                }
                for p in parts {
                    if first {
                        write!(f, " q^{} {}", e.q_degree, p)?;
                        first = false;
                    } else {
                        write!(f, " + q^{} {}", e.q_degree, p)?;
                    }
                }
            }
            if first {
                write!(f, " 0")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Deloops a closed complex and specializes alpha, producing integer
/// matrices over q-graded free summands.
pub fn to_free_complex(c: &ChainComplex, alpha: &BigInt) -> Result<FreeComplex> {
    if c.n != 0 {
        return Err(Error::domain("homology requires a closed complex (n = 0)"));
    }
    let (d, _) = simplify::deloop(c)?;
    let degrees: Vec<Vec<i64>> = d
        .groups
        .iter()
        .map(|g| g.iter().map(|o| o.q_shift).collect())
        .collect();
    let mut mats = Vec::new();
    for (k, m) in d.diffs.iter().enumerate() {
        let mut im = IntMatrix::zero(m.rows, m.cols);
        for (r, cc, v) in m.iter() {
            let mut val = BigInt::zero();
            for (dots, coeff) in v.terms() {
                debug_assert!(dots.is_empty(), "delooped entries have no boundary circles");
                val += coeff.eval(alpha);
            }
            im[(r, cc)] = val;
        }
        let _ = k;
        mats.push(im);
    }
    Ok(FreeComplex { min_degree: d.min_degree, degrees, mats })
}

/// Homology of the free complex in homological degrees 0..=max_degree,
/// graded by the q-filtration: since the specialized differential never
/// lowers q, the summands with q-degree >= p form a subcomplex F_p, and the
/// piece reported at q^p is Z_p / (Z_{p'} + B) for p' the next q-degree.
pub fn graded_homology(
    c: &ChainComplex,
    alpha: &BigInt,
    max_degree: i64,
) -> Result<GradedHomology> {
    if c.min_degree + (c.groups.len() as i64) <= max_degree + 1 {
        return Err(Error::Uncertified(format!(
            "homology through degree {max_degree} needs stored degrees through {}",
            max_degree + 1
        )));
    }
    let fc = to_free_complex(c, alpha)?;
    let mut entries = Vec::new();
    for deg in c.min_degree..=max_degree {
        let k = (deg - fc.min_degree) as usize;
        let dim = fc.degrees[k].len();
        if dim == 0 {
            continue;
        }
        let d_out = fc
            .mats
            .get(k)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zero(0, dim));
        let d_in = if k == 0 {
            IntMatrix::zero(dim, 0)
        } else {
            fc.mats[k - 1].clone()
        };
        // cycles supported in each q-filtration level
        let mut qs: Vec<i64> = fc.degrees[k].clone();
        qs.sort_unstable();
        qs.dedup();
        let cycles_at = |p: Option<i64>| -> IntMatrix {
            let cols: Vec<usize> = fc.degrees[k]
                .iter()
                .enumerate()
                .filter(|(_, &q)| p.is_none_or(|p| q >= p))
                .map(|(i, _)| i)
                .collect();
            let sub = d_out.column_submatrix(&cols);
            let ker = integer_kernel(&sub);
            // embed back into the full coordinate space
            let mut full = IntMatrix::zero(dim, ker.cols);
            for (j, &cidx) in cols.iter().enumerate() {
                for kk in 0..ker.cols {
                    full[(cidx, kk)] = ker[(j, kk)].clone();
                }
            }
            full
        };
        for (qi, &p) in qs.iter().enumerate() {
            let z_p = cycles_at(Some(p));
            if z_p.cols == 0 {
                continue;
            }
            let z_next = match qs.get(qi + 1) {
                Some(&p2) => cycles_at(Some(p2)),
                None => IntMatrix::zero(dim, 0),
            };
            let rel = z_next.hstack(&d_in);
            let (rank, torsion) = subquotient(&z_p, &rel);
            if rank > 0 || !torsion.is_empty() {
                entries.push(HomologyEntry { degree: deg, q_degree: p, free_rank: rank, torsion });
            }
        }
    }
    Ok(GradedHomology { entries })
}

/// Structure of L(A) / (L(A) ∩ L(B)) for integer column lattices, where A
/// has linearly independent columns: free rank and torsion orders.
fn subquotient(a: &IntMatrix, b: &IntMatrix) -> (usize, Vec<BigInt>) {
    // solve A x = B y: kernel of [A | -B], project onto the x block
    let neg_b = {
        let mut m = b.clone();
        for i in 0..m.rows {
            for j in 0..m.cols {
                let v = -m[(i, j)].clone();
                m[(i, j)] = v;
            }
        }
        m
    };
    let stacked = a.hstack(&neg_b);
    let ker = integer_kernel(&stacked);
    let mut x_block = IntMatrix::zero(a.cols, ker.cols);
    for i in 0..a.cols {
        for j in 0..ker.cols {
            x_block[(i, j)] = ker[(i, j)].clone();
        }
    }
    // quotient Z^{a.cols} / column lattice of x_block
    let (d, _, _) = smith_normal_form(&x_block);
    let mut torsion = Vec::new();
    let mut nonzero = 0;
    for i in 0..d.rows.min(d.cols) {
        if d[(i, i)].is_zero() {
            break;
        }
        nonzero += 1;
        if d[(i, i)] > BigInt::from(1) {
            torsion.push(d[(i, i)].clone());
        }
    }
    (a.cols - nonzero, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_scalar() {
        let m = IntMatrix::from_rows(vec![vec![2]]);
        let (d, u, v) = smith_normal_form(&m);
        assert_eq!(d[(0, 0)], BigInt::from(2));
        assert_eq!(u.mul(&m).mul(&v), d);
    }

    #[test]
    fn snf_zero() {
        let m = IntMatrix::zero(3, 2);
        let (d, _, _) = smith_normal_form(&m);
        assert!(d.is_zero());
    }

    #[test]
    fn snf_random_property() {
        let mut state = 0x1234_5678_u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 21) as i64 - 10
        };
        for _ in 0..50 {
            let m = IntMatrix::from_rows(
                (0..4).map(|_| (0..4).map(|_| rnd()).collect()).collect(),
            );
            let (d, u, v) = smith_normal_form(&m);
            assert_eq!(u.mul(&m).mul(&v), d, "U M V = D");
            let k = d.rows.min(d.cols);
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        assert!(d[(i, j)].is_zero());
                    }
                }
            }
            for i in 0..k.saturating_sub(1) {
                if !d[(i + 1, i + 1)].is_zero() {
                    assert!(!d[(i, i)].is_zero());
                    assert!((&d[(i + 1, i + 1)] % &d[(i, i)]).is_zero(), "divisibility");
                }
            }
        }
    }

    #[test]
    fn kernel_is_saturated() {
        let m = IntMatrix::from_rows(vec![vec![2, 4]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols, 1);
        // kernel generator is primitive: (2, -1) or (-2, 1)
        let (a, b) = (k[(0, 0)].clone(), k[(1, 0)].clone());
        assert_eq!(a.abs(), BigInt::from(2));
        assert_eq!(b.abs(), BigInt::from(1));
    }

    #[test]
    fn subquotient_torsion() {
        // Z^2 / <2e1, 6e2>
        let a = IntMatrix::identity(2);
        let b = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 6]]);
        let (rank, torsion) = subquotient(&a, &b);
        assert_eq!(rank, 0);
        assert_eq!(torsion, vec![BigInt::from(2), BigInt::from(6)]);
    }
}
