//! Integer homology of finite chain complexes via Smith normal form.
//!
//! Boundary matrices of the complexes in this crate are large, very sparse
//! and almost entirely `±1`. [`smith_invariants`] therefore eliminates unit
//! pivots sparsely first (each such pivot contributes an invariant factor
//! of 1 and leaves the Schur complement), and only hands the small leftover
//! block to a dense Smith normal form. The sparse pass runs on `i64` with
//! checked arithmetic and restarts on big integers if anything overflows.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Integer, Result};

/// Matrices smaller than this in both dimensions skip the sparse pass.
const DENSE_CUTOFF: usize = 64;

/// Sparse integer matrix stored by columns; each column is sorted by row
/// and holds no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Integer)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions
    /// are summed and zero results dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Integer)>,
    {
        let mut columns: Vec<Vec<(usize, Integer)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidArgument(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            columns[c].push((r, v));
        }
        for col in &mut columns {
            col.sort_by_key(|(r, _)| *r);
            let mut merged: Vec<(usize, Integer)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *col = merged;
        }
        Ok(SparseIntMatrix { rows, cols, columns })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let triplets = rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(j, v)| (i, j, Integer::from(*v)))
        });
        Self::from_triplets(nrows, ncols, triplets).expect("indices in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Nonzero entries of column `c` as `(row, value)`, sorted by row.
    pub fn column(&self, c: usize) -> &[(usize, Integer)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Integer {
        self.columns[c]
            .binary_search_by_key(&r, |(row, _)| *row)
            .map_or_else(|_| Integer::zero(), |i| self.columns[c][i].1.clone())
    }

    /// Iterates over nonzero entries in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Integer)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    /// Overwrites one entry, removing it when `value` is zero.
    pub fn set(&mut self, r: usize, c: usize, value: Integer) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |(row, _)| *row) {
            Ok(i) if value.is_zero() => {
                col.remove(i);
            }
            Ok(i) => col[i].1 = value,
            Err(_) if value.is_zero() => {}
            Err(i) => col.insert(i, (r, value)),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Integer>> {
        let mut out = vec![vec![Integer::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    /// The product `self * rhs`.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::MalformedComplex(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut columns = Vec::with_capacity(rhs.cols);
        for col in &rhs.columns {
            let mut acc: HashMap<usize, Integer> = HashMap::new();
            for (k, b) in col {
                for (i, a) in &self.columns[*k] {
                    *acc.entry(*i).or_insert_with(Integer::zero) += a * b;
                }
            }
            let mut entries: Vec<(usize, Integer)> =
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            entries.sort_by_key(|(r, _)| *r);
            columns.push(entries);
        }
        Ok(SparseIntMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

/// Coefficient arithmetic used by the sparse elimination.
trait Coeff: Clone + fmt::Debug + Send + Sync {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_unit(&self) -> bool;
    fn is_null(&self) -> bool;
    /// `self - a * b`, or `None` on overflow.
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self>;
    /// `-(a * b)`, or `None` on overflow.
    fn neg_mul(a: &Self, b: &Self) -> Option<Self>;
    fn mul(a: &Self, b: &Self) -> Option<Self>;
}

impl Coeff for i64 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_null(&self) -> bool {
        *self == 0
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b).and_then(|p| self.checked_sub(p))
    }
    fn neg_mul(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b).and_then(i64::checked_neg)
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b)
    }
}

impl Coeff for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn is_null(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self - a * b)
    }
    fn neg_mul(a: &Self, b: &Self) -> Option<Self> {
        Some(-(a * b))
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
}

#[derive(Debug)]
struct Overflow;

type Row<C> = Vec<(usize, C)>;

/// Result of the sparse pass: number of unit pivots eliminated and the
/// leftover block as dense rows.
struct Reduced {
    unit_pivots: usize,
    leftover: Vec<Vec<BigInt>>,
}

/// `target - factor * pivot`, merging two column-sorted rows. Column `skip`
/// is dropped from the result.
fn row_axpy<C: Coeff>(
    target: &Row<C>,
    factor: &C,
    pivot: &Row<C>,
    skip: usize,
) -> std::result::Result<Row<C>, Overflow> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ti = target.get(i).map(|e| e.0);
        let pj = pivot.get(j).map(|e| e.0);
        let (col, val) = match (ti, pj) {
            (Some(a), Some(b)) if a == b => {
                let v = target[i].1.sub_mul(factor, &pivot[j].1).ok_or(Overflow)?;
                i += 1;
                j += 1;
                (a, v)
            }
            (Some(a), Some(b)) if a < b => {
                i += 1;
                (a, target[i - 1].1.clone())
            }
            (Some(a), None) => {
                i += 1;
                (a, target[i - 1].1.clone())
            }
            (_, Some(b)) => {
                let v = C::neg_mul(factor, &pivot[j].1).ok_or(Overflow)?;
                j += 1;
                (b, v)
            }
            (None, None) => unreachable!(),
        };
        if col != skip && !val.is_null() {
            out.push((col, val));
        }
    }
    Ok(out)
}

fn sparse_reduce<C: Coeff>(m: &SparseIntMatrix) -> std::result::Result<Reduced, Overflow> {
    let mut rows: Vec<Option<Row<C>>> = vec![Some(Vec::new()); m.rows];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m.cols];
    for (c, col) in m.columns.iter().enumerate() {
        for (r, v) in col {
            rows[*r]
                .as_mut()
                .unwrap()
                .push((c, C::from_big(v).ok_or(Overflow)?));
            col_rows[c].push(*r);
        }
    }
    // triplets() is column-major, so every row is already sorted by column

    let mut order: Vec<usize> = (0..m.cols).collect();
    order.sort_by_key(|&c| (m.columns[c].len(), c));
    let mut col_done = vec![false; m.cols];
    let mut unit_pivots = 0;

    loop {
        let mut progress = false;
        for &c in &order {
            if col_done[c] {
                continue;
            }
            // live rows still holding column c
            let mut live: Vec<usize> = Vec::new();
            col_rows[c].sort_unstable();
            col_rows[c].dedup();
            for &r in &col_rows[c] {
                if let Some(row) = &rows[r] {
                    if row.binary_search_by_key(&c, |e| e.0).is_ok() {
                        live.push(r);
                    }
                }
            }
            col_rows[c] = live.clone();
            if live.is_empty() {
                col_done[c] = true;
                continue;
            }
            let entry = |r: usize| -> &C {
                let row = rows[r].as_ref().unwrap();
                let i = row.binary_search_by_key(&c, |e| e.0).unwrap();
                &row[i].1
            };
            let pivot_row = live
                .iter()
                .copied()
                .filter(|&r| entry(r).is_unit())
                .min_by_key(|&r| (rows[r].as_ref().unwrap().len(), r));
            let Some(pr) = pivot_row else { continue };

            let pivot = rows[pr].take().unwrap();
            let pval = {
                let i = pivot.binary_search_by_key(&c, |e| e.0).unwrap();
                pivot[i].1.clone()
            };
            for &r in &live {
                if r == pr {
                    continue;
                }
                let target = rows[r].as_ref().unwrap();
                let a = {
                    let i = target.binary_search_by_key(&c, |e| e.0).unwrap();
                    target[i].1.clone()
                };
                // pivot is a unit, so its inverse is itself
                let factor = C::mul(&a, &pval).ok_or(Overflow)?;
                let updated = row_axpy(target, &factor, &pivot, c)?;
                rows[r] = Some(updated);
                for (pc, _) in &pivot {
                    if *pc != c {
                        col_rows[*pc].push(r);
                    }
                }
            }
            col_done[c] = true;
            unit_pivots += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| !col_done[c]).collect();
    let col_pos: HashMap<usize, usize> =
        live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let leftover = rows
        .into_iter()
        .flatten()
        .filter(|row| !row.is_empty())
        .map(|row| {
            let mut dense = vec![BigInt::zero(); live_cols.len()];
            for (c, v) in row {
                dense[col_pos[&c]] = v.to_big();
            }
            dense
        })
        .collect();
    Ok(Reduced {
        unit_pivots,
        leftover,
    })
}

/// Nonzero Smith invariants of a dense matrix, in divisibility order.
///
/// Each step moves the nonzero entry of least absolute value (ties to the
/// lowest row, then column) into the pivot position, reduces its row and
/// column modulo it, and repeats until the pivot divides everything left.
pub fn dense_smith_invariants(matrix: &[Vec<Integer>]) -> Vec<Integer> {
    let mut a: Vec<Vec<Integer>> = matrix.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..cols {
                    let delta = &q * &a[t][j];
                    a[i][j] -= delta;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for i in t..rows {
                    let delta = &q * &a[i][t];
                    a[i][j] -= delta;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                // a smaller remainder appeared in row or column t: move it in
                let mut best = (t, t);
                for i in t..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            // row and column are clear; enforce divisibility of the rest
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Nonzero diagonal entries `d1 | d2 | ...` of the Smith normal form, all
/// positive. Zero matrices give an empty list.
pub fn smith_invariants(m: &SparseIntMatrix) -> Vec<Integer> {
    if m.is_zero() {
        return Vec::new();
    }
    if m.rows < DENSE_CUTOFF && m.cols < DENSE_CUTOFF {
        return dense_smith_invariants(&m.to_dense());
    }
    let reduced = match sparse_reduce::<i64>(m) {
        Ok(r) => r,
        Err(Overflow) => sparse_reduce::<BigInt>(m).expect("big integers do not overflow"),
    };
    let mut out = vec![Integer::one(); reduced.unit_pivots];
    out.extend(dense_smith_invariants(&reduced.leftover));
    // units from the sparse pass precede anything the dense pass found
    out
}

/// Homology of one degree: free rank plus torsion coefficients, each
/// greater than one and dividing the next.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub d: usize,
    #[serde(serialize_with = "ser_usize_str")]
    pub rank: usize,
    #[serde(serialize_with = "ser_ints_str")]
    pub torsion: Vec<Integer>,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for DegreeHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "H{} = 0", self.d)
        } else {
            write!(f, "H{} = {}", self.d, parts.join(" + "))
        }
    }
}

fn ser_usize_str<S: serde::Serializer>(v: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_ints_str<S: serde::Serializer>(
    v: &[Integer],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

/// Homology of a whole complex, one entry per degree `0..=dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyResult {
    pub fn degree(&self, d: usize) -> Option<&DegreeHomology> {
        self.degrees.get(d)
    }

    /// Ranks per degree.
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|h| h.rank).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.iter().all(DegreeHomology::is_free)
    }
}

/// A finite chain complex of free abelian groups.
///
/// `boundaries[i]` is `∂_{i+1} : C_{i+1} -> C_i`, an `f[i] x f[i+1]` matrix.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    f_vector: Vec<usize>,
    boundaries: Vec<SparseIntMatrix>,
}

impl ChainComplex {
    /// Checks shapes and that consecutive boundaries compose to zero.
    pub fn new(f_vector: Vec<usize>, boundaries: Vec<SparseIntMatrix>) -> Result<Self> {
        let top = f_vector.len();
        if boundaries.len() + 1 != top.max(1) {
            return Err(Error::MalformedComplex(format!(
                "{} boundary matrices for {} nonzero degrees",
                boundaries.len(),
                top
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows != f_vector[i] || b.cols != f_vector[i + 1] {
                return Err(Error::MalformedComplex(format!(
                    "boundary in degree {} is {}x{}, expected {}x{}",
                    i + 1,
                    b.rows,
                    b.cols,
                    f_vector[i],
                    f_vector[i + 1]
                )));
            }
        }
        let cx = ChainComplex {
            f_vector,
            boundaries,
        };
        cx.check_square_zero()?;
        Ok(cx)
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for (i, pair) in self.boundaries.windows(2).enumerate() {
            let prod = pair[0].mul(&pair[1])?;
            let first = prod.triplets().next().map(|(r, c, v)| (r, c, v.clone()));
            if let Some((r, c, v)) = first {
                return Err(Error::MalformedComplex(format!(
                    "boundary squared is nonzero: (∂{}∘∂{})[{r}, {c}] = {v}",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(())
    }

    pub fn f_vector(&self) -> &[usize] {
        &self.f_vector
    }

    /// `∂_d`, or `None` for `d = 0` and degrees beyond the top.
    pub fn boundary(&self, d: usize) -> Option<&SparseIntMatrix> {
        d.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    fn invariants(&self, d: usize) -> Vec<Integer> {
        self.boundary(d).map(smith_invariants).unwrap_or_default()
    }

    /// Homology in a single degree; only `∂_d` and `∂_{d+1}` are reduced.
    pub fn homology_in_degree(&self, d: usize) -> DegreeHomology {
        let (incoming, outgoing) = rayon::join(|| self.invariants(d + 1), || self.invariants(d));
        Self::assemble(d, self.f_vector.get(d).copied().unwrap_or(0), &outgoing, &incoming)
    }

    fn assemble(d: usize, cells: usize, outgoing: &[Integer], incoming: &[Integer]) -> DegreeHomology {
        DegreeHomology {
            d,
            rank: cells - outgoing.len() - incoming.len(),
            torsion: incoming.iter().filter(|v| !v.is_one()).cloned().collect(),
        }
    }

    /// Homology in every degree from 0 to the top cell dimension.
    pub fn homology(&self) -> HomologyResult {
        let top = self.f_vector.len();
        let invariants: Vec<Vec<Integer>> = (0..=top).into_par_iter().map(|d| self.invariants(d)).collect();
        let degrees = (0..top)
            .map(|d| Self::assemble(d, self.f_vector[d], &invariants[d], &invariants[d + 1]))
            .collect();
        HomologyResult { degrees }
    }
}

/// Homology from a list of boundary matrices `∂_1, ∂_2, ...` and cell
/// counts. Fails if the shapes disagree or `∂∘∂ ≠ 0`.
pub fn chain_homology(boundaries: Vec<SparseIntMatrix>, f_vector: Vec<usize>) -> Result<HomologyResult> {
    Ok(ChainComplex::new(f_vector, boundaries)?.homology())
}
