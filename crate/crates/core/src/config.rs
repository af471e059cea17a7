//! Discretized configuration complexes `D_k(X)` and their quotients
//! `UD_k(X)`.
//!
//! A cell of `D_k(X)` is an ordered `k`-tuple of faces of `X` whose vertex
//! sets are pairwise disjoint. Its dimension is the sum of the factor
//! dimensions. Each factor carries the orientation of its increasing vertex
//! order and the product boundary is
//!
//! ```text
//! ∂(σ1 × ... × σk) = Σ_i (-1)^(dim σ1 + ... + dim σ(i-1)) σ1 × ... × ∂σi × ... × σk
//! ```
//!
//! with `∂σ = Σ_j (-1)^j (σ without its j-th vertex)`.
//!
//! The symmetric group acts freely on cells by permuting factors (factors
//! are disjoint, hence distinct). `UD_k(X)` keeps the representative whose
//! factors are in increasing lexicographic order; boundary terms are moved
//! to their representative with the Koszul sign `(-1)^(ab)` for every
//! transposition of adjacent factors of dimensions `a` and `b`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::homology::{ChainComplex, SparseIntMatrix};
use crate::partitions::Poset;
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::{Integer, Result};

/// An ordered tuple of pairwise vertex-disjoint simplices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConfigCell {
    parts: Vec<Simplex>,
}

impl ConfigCell {
    /// Fails unless the parts are pairwise disjoint.
    pub fn new(parts: Vec<Simplex>) -> Result<Self> {
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                if !a.is_disjoint(b) {
                    return Err(crate::Error::InvalidArgument(format!(
                        "parts {a} and {b} share a vertex"
                    )));
                }
            }
        }
        Ok(ConfigCell { parts })
    }

    pub fn parts(&self) -> &[Simplex] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().map(Simplex::dim).sum()
    }

    /// Whether each part of `self` is a face of the matching part of `other`.
    pub fn is_face_of(&self, other: &ConfigCell) -> bool {
        self.parts.len() == other.parts.len()
            && self
                .parts
                .iter()
                .zip(&other.parts)
                .all(|(a, b)| a.is_face_of(b))
    }

    /// Codimension-one faces with their incidence signs, in the ordered
    /// complex.
    pub fn boundary(&self) -> Vec<(ConfigCell, i64)> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (i, part) in self.parts.iter().enumerate() {
            let d = part.dim();
            if d > 0 {
                for j in 0..=d {
                    let mut parts = self.parts.clone();
                    parts[i] = part.facet(j);
                    let sign = if (offset + j) % 2 == 0 { 1 } else { -1 };
                    out.push((ConfigCell { parts }, sign));
                }
            }
            offset += d;
        }
        out
    }

    /// The orbit representative (parts sorted) and the Koszul sign of the
    /// reordering.
    pub fn canonical(&self) -> (ConfigCell, i64) {
        let mut parts = self.parts.clone();
        let mut sign = 1;
        // insertion sort; every adjacent swap of dims a, b costs (-1)^(ab)
        for i in 1..parts.len() {
            let mut j = i;
            while j > 0 && parts[j - 1] > parts[j] {
                if parts[j - 1].dim() * parts[j].dim() % 2 == 1 {
                    sign = -sign;
                }
                parts.swap(j - 1, j);
                j -= 1;
            }
        }
        (ConfigCell { parts }, sign)
    }

    pub fn is_canonical(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] < w[1])
    }
}

impl fmt::Display for ConfigCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// The cell complex `D_k(X)` or `UD_k(X)`, with cells listed per dimension
/// in lexicographic order.
#[derive(Clone, Debug)]
pub struct ConfigComplex {
    k: usize,
    ambient: SimplicialComplex,
    ordered: bool,
    cells_by_dim: Vec<Vec<ConfigCell>>,
    index: OnceLock<Vec<HashMap<ConfigCell, usize>>>,
}

/// Faces of the ambient complex with their vertex sets as bitsets of
/// `words` 64-bit words each, sorted lexicographically.
struct FaceTable {
    faces: Vec<Simplex>,
    masks: Vec<u64>,
    words: usize,
}

impl FaceTable {
    fn new(x: &SimplicialComplex) -> Self {
        let mut faces: Vec<Simplex> = x.iter_faces().cloned().collect();
        faces.sort();
        let words = (x.vertex_count() as usize + 1).div_ceil(64);
        let mut masks = vec![0u64; faces.len() * words];
        for (i, f) in faces.iter().enumerate() {
            for &v in f.vertices() {
                masks[i * words + v as usize / 64] |= 1 << (v % 64);
            }
        }
        FaceTable { faces, masks, words }
    }

    fn mask(&self, i: usize) -> &[u64] {
        &self.masks[i * self.words..(i + 1) * self.words]
    }

    fn is_free(&self, i: usize, used: &[u64]) -> bool {
        self.mask(i).iter().zip(used).all(|(m, u)| m & u == 0)
    }

    fn toggle(&self, i: usize, used: &mut [u64]) {
        for (u, m) in used.iter_mut().zip(self.mask(i)) {
            *u ^= m;
        }
    }

    /// Depth-first enumeration of disjoint tuples extending `current`, in
    /// lexicographic order; each complete tuple of face indices goes to
    /// `sink`. `free` counts the unused vertices.
    fn extend<F: FnMut(&[usize])>(&self, k: usize, free: usize, used: &mut [u64], current: &mut Vec<usize>, sink: &mut F) {
        if current.len() == k {
            sink(current);
            return;
        }
        // every later part needs at least one unused vertex
        let reserve = k - current.len() - 1;
        for i in 0..self.faces.len() {
            let size = self.faces[i].vertices().len();
            if size + reserve > free || !self.is_free(i, used) {
                continue;
            }
            self.toggle(i, used);
            current.push(i);
            self.extend(k, free - size, used, current, sink);
            current.pop();
            self.toggle(i, used);
        }
    }

    /// Runs `extend` once per choice of first part, in parallel, and
    /// concatenates the per-task results in order.
    fn enumerate<T, F>(&self, k: usize, free: usize, per_task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&[usize], &mut Vec<T>) + Sync,
    {
        (0..self.faces.len())
            .into_par_iter()
            .filter(|&first| self.faces[first].vertices().len() + k - 1 <= free)
            .flat_map_iter(|first| {
                let mut used = vec![0u64; self.words];
                self.toggle(first, &mut used);
                let mut out = Vec::new();
                let rest = free - self.faces[first].vertices().len();
                self.extend(k, rest, &mut used, &mut vec![first], &mut |t: &[usize]| per_task(t, &mut out));
                out
            })
            .collect()
    }

    fn tuple_dim(&self, tuple: &[usize]) -> usize {
        tuple.iter().map(|&i| self.faces[i].dim()).sum()
    }
}

/// Face indices ascend exactly when the parts are in lexicographic order.
fn is_canonical_tuple(tuple: &[usize]) -> bool {
    tuple.windows(2).all(|w| w[0] < w[1])
}

/// Cell counts per dimension of `D_k(X)` (or `UD_k(X)` when `ordered` is
/// false), from the same enumeration as the builders but without storing
/// any cells.
pub fn count_f_vector(x: &SimplicialComplex, k: usize, ordered: bool) -> Vec<usize> {
    if k == 0 {
        return vec![1];
    }
    let table = FaceTable::new(x);
    let dims: Vec<usize> = table.enumerate(k, x.vertex_count() as usize, |t, out| {
        if ordered || is_canonical_tuple(t) {
            out.push(table.tuple_dim(t));
        }
    });
    let mut fv = Vec::new();
    for d in dims {
        if fv.len() <= d {
            fv.resize(d + 1, 0);
        }
        fv[d] += 1;
    }
    fv
}

impl ConfigComplex {
    /// `D_k(X)`: every ordered `k`-tuple of pairwise disjoint faces of `X`.
    pub fn build_ordered(x: &SimplicialComplex, k: usize) -> Self {
        Self::build(x, k, true)
    }

    /// `UD_k(X)`: one cell per orbit of the factor-permuting action.
    pub fn build_unordered(x: &SimplicialComplex, k: usize) -> Self {
        Self::build(x, k, false)
    }

    fn build(x: &SimplicialComplex, k: usize, ordered: bool) -> Self {
        let all: Vec<ConfigCell> = if k == 0 {
            vec![ConfigCell { parts: Vec::new() }]
        } else {
            let table = FaceTable::new(x);
            table.enumerate(k, x.vertex_count() as usize, |t, out| {
                if ordered || is_canonical_tuple(t) {
                    out.push(ConfigCell {
                        parts: t.iter().map(|&i| table.faces[i].clone()).collect(),
                    });
                }
            })
        };
        let mut cells_by_dim: Vec<Vec<ConfigCell>> = Vec::new();
        for cell in all {
            let d = cell.dim();
            if cells_by_dim.len() <= d {
                cells_by_dim.resize_with(d + 1, Vec::new);
            }
            cells_by_dim[d].push(cell);
        }
        ConfigComplex {
            k,
            ambient: x.clone(),
            ordered,
            cells_by_dim,
            index: OnceLock::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ambient(&self) -> &SimplicialComplex {
        &self.ambient
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    /// Top cell dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.cells_by_dim.len().checked_sub(1)
    }

    pub fn cells(&self, d: usize) -> &[ConfigCell] {
        self.cells_by_dim.get(d).map_or(&[], Vec::as_slice)
    }

    fn index(&self) -> &[HashMap<ConfigCell, usize>] {
        self.index.get_or_init(|| {
            self.cells_by_dim
                .iter()
                .map(|list| list.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
                .collect()
        })
    }

    /// Position of `cell` within its dimension.
    pub fn index_of(&self, cell: &ConfigCell) -> Option<usize> {
        self.index().get(cell.dim())?.get(cell).copied()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.cells_by_dim.iter().map(Vec::len).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.cells_by_dim.iter().map(Vec::len).sum()
    }

    /// Alternating sum of the f-vector.
    pub fn euler_characteristic(&self) -> Integer {
        self.f_vector()
            .iter()
            .enumerate()
            .fold(Integer::zero(), |acc, (i, &c)| {
                if i % 2 == 0 { acc + c } else { acc - c }
            })
    }

    /// `∂_d` for `d = 1..=dim`, as `f[d-1] x f[d]` matrices.
    pub fn boundary_matrices(&self) -> Vec<SparseIntMatrix> {
        (1..self.cells_by_dim.len())
            .map(|d| self.boundary_matrix(d))
            .collect()
    }

    /// `∂_d : C_d -> C_{d-1}`.
    pub fn boundary_matrix(&self, d: usize) -> SparseIntMatrix {
        let rows = d.checked_sub(1).map_or(0, |e| self.cells(e).len());
        let cols = self.cells(d).len();
        if d == 0 {
            return SparseIntMatrix::zeros(0, cols);
        }
        let row_index = &self.index()[d - 1];
        let mut triplets = Vec::new();
        for (j, cell) in self.cells(d).iter().enumerate() {
            for (face, sign) in cell.boundary() {
                let (face, sign) = if self.ordered {
                    (face, sign)
                } else {
                    let (rep, koszul) = face.canonical();
                    (rep, sign * koszul)
                };
                let i = row_index[&face];
                triplets.push((i, j, Integer::from(sign)));
            }
        }
        SparseIntMatrix::from_triplets(rows, cols, triplets).expect("face indices in range")
    }

    /// The cellular chain complex; fails only if `∂∘∂ ≠ 0`.
    pub fn chain_complex(&self) -> Result<ChainComplex> {
        ChainComplex::new(self.f_vector(), self.boundary_matrices())
    }

    /// Cells in global order (by dimension, then lexicographic).
    pub fn all_cells(&self) -> impl Iterator<Item = &ConfigCell> {
        self.cells_by_dim.iter().flatten()
    }

    /// The face poset of an ordered complex, built from codimension-one
    /// incidences and closed transitively. Elements follow
    /// [`all_cells`](Self::all_cells).
    pub fn face_poset(&self) -> Poset {
        let offsets: Vec<usize> = self
            .cells_by_dim
            .iter()
            .scan(0, |acc, list| {
                let start = *acc;
                *acc += list.len();
                Some(start)
            })
            .collect();
        let mut covers: Vec<Vec<usize>> = Vec::with_capacity(self.cell_count());
        for (d, list) in self.cells_by_dim.iter().enumerate() {
            for cell in list {
                let mut below: Vec<usize> = cell
                    .boundary()
                    .into_iter()
                    .map(|(face, _)| {
                        let face = if self.ordered { face } else { face.canonical().0 };
                        offsets[d - 1] + self.index()[d - 1][&face]
                    })
                    .collect();
                below.sort_unstable();
                below.dedup();
                covers.push(below);
            }
        }
        Poset::from_lower_covers(&covers)
    }

    pub fn summary(&self, space: &str) -> ComplexSummary {
        ComplexSummary {
            space: space.to_string(),
            k: self.k,
            ordered: self.ordered,
            f_vector: self.f_vector().iter().map(ToString::to_string).collect(),
            dim: self.dim(),
            euler: self.euler_characteristic().to_string(),
        }
    }
}

/// JSON summary of a built complex. Counts are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexSummary {
    pub space: String,
    pub k: usize,
    pub ordered: bool,
    pub f_vector: Vec<String>,
    pub dim: Option<usize>,
    pub euler: String,
}
