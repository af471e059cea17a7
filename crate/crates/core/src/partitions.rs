//! Ordered partial partitions and finite posets.
//!
//! An ordered partial partition of `[n]` with `k` parts is a `k`-tuple of
//! nonempty, pairwise disjoint subsets of `[n]`; their union need not be all
//! of `[n]`. They are ordered by componentwise inclusion. Sending a cell
//! `σ1 × ... × σk` of `D_k(Δ^(n-1))` to the tuple of its vertex sets is an
//! isomorphism onto this poset, checked by [`face_poset_isomorphism`].

use std::collections::HashMap;
use std::fmt;

use crate::config::{ConfigCell, ConfigComplex};
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::{Error, Result};

/// A finite poset stored as its full order relation, one bitset row per
/// element: bit `b` of row `a` is set iff `a <= b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    len: usize,
    words: usize,
    up: Vec<u64>,
}

impl Poset {
    fn empty(len: usize) -> Self {
        let words = len.div_ceil(64);
        Poset {
            len,
            words,
            up: vec![0; len * words],
        }
    }

    fn set(&mut self, a: usize, b: usize) {
        self.up[a * self.words + b / 64] |= 1 << (b % 64);
    }

    /// Builds the poset from an order predicate. The predicate must be
    /// reflexive, antisymmetric and transitive; this is not checked.
    pub fn from_relation(len: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut p = Self::empty(len);
        for a in 0..len {
            for b in 0..len {
                if leq(a, b) {
                    p.set(a, b);
                }
            }
        }
        p
    }

    /// Transitive closure of a lower-cover list. Every cover of `i` must
    /// have a smaller index than `i`.
    pub fn from_lower_covers(covers: &[Vec<usize>]) -> Self {
        let len = covers.len();
        let mut down = Self::empty(len);
        for (i, below) in covers.iter().enumerate() {
            down.set(i, i);
            for &j in below {
                assert!(j < i, "lower covers must precede the element");
                for w in 0..down.words {
                    let bits = down.up[j * down.words + w];
                    down.up[i * down.words + w] |= bits;
                }
            }
        }
        // `down` holds down-sets; transpose into up-sets
        let mut p = Self::empty(len);
        for i in 0..len {
            for j in 0..len {
                if down.up[i * down.words + j / 64] >> (j % 64) & 1 == 1 {
                    p.set(j, i);
                }
            }
        }
        p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&b| !(0..self.len).any(|a| self.lt(a, b)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&a| !(0..self.len).any(|b| self.lt(a, b)))
            .collect()
    }

    /// Upper covers of `a`: elements `b > a` with nothing strictly between.
    pub fn upper_covers(&self, a: usize) -> Vec<usize> {
        let above: Vec<usize> = (0..self.len).filter(|&b| self.lt(a, b)).collect();
        above
            .iter()
            .copied()
            .filter(|&b| !above.iter().any(|&c| c != b && self.lt(c, b)))
            .collect()
    }

    /// Edges `[lower, upper]` of the Hasse diagram, sorted.
    pub fn hasse_edges(&self) -> Vec<[usize; 2]> {
        (0..self.len)
            .flat_map(|a| self.upper_covers(a).into_iter().map(move |b| [a, b]))
            .collect()
    }

    /// The order complex: element `i` becomes vertex `i + 1`, and the
    /// faces are the nonempty chains.
    pub fn order_complex(&self) -> SimplicialComplex {
        let covers: Vec<Vec<usize>> = (0..self.len).map(|a| self.upper_covers(a)).collect();
        let mut facets = Vec::new();
        let mut chain = Vec::new();
        fn walk(a: usize, covers: &[Vec<usize>], chain: &mut Vec<u32>, facets: &mut Vec<Simplex>) {
            chain.push(a as u32 + 1);
            if covers[a].is_empty() {
                facets.push(Simplex::new(chain.clone()).expect("chains are strict"));
            }
            for &b in &covers[a] {
                walk(b, covers, chain, facets);
            }
            chain.pop();
        }
        for a in self.minimal_elements() {
            walk(a, &covers, &mut chain, &mut facets);
        }
        SimplicialComplex::from_facets(self.len as u32, facets).expect("labels in range")
    }
}

/// A `k`-tuple of nonempty, pairwise disjoint subsets of `[n]`, each stored
/// as a bitmask with bit `i - 1` standing for element `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedPartialPartition {
    parts: Vec<u64>,
}

impl OrderedPartialPartition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        let mut seen = 0u64;
        for &p in &parts {
            if p == 0 {
                return Err(Error::InvalidArgument("empty part".into()));
            }
            if seen & p != 0 {
                return Err(Error::InvalidArgument("parts overlap".into()));
            }
            seen |= p;
        }
        Ok(OrderedPartialPartition { parts })
    }

    /// From parts given as lists of elements of `[n]`.
    pub fn from_sets(parts: &[&[u32]]) -> Result<Self> {
        let masks = parts
            .iter()
            .map(|set| {
                set.iter().try_fold(0u64, |acc, &v| {
                    if v == 0 || v > 64 {
                        Err(Error::InvalidArgument(format!("element {v} outside [1, 64]")))
                    } else {
                        Ok(acc | 1 << (v - 1))
                    }
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        Self::new(masks)
    }

    /// Vertex sets of the parts of a configuration cell.
    pub fn from_cell(cell: &ConfigCell) -> Self {
        let parts = cell
            .parts()
            .iter()
            .map(|s| s.vertices().iter().fold(0u64, |acc, &v| acc | 1 << (v - 1)))
            .collect();
        OrderedPartialPartition { parts }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// Number of elements of `[n]` covered by the parts.
    pub fn support_size(&self) -> u32 {
        self.parts.iter().map(|p| p.count_ones()).sum()
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.parts.len() == other.parts.len()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a & !b == 0)
    }

    /// Componentwise intersection, absent if any intersection is empty.
    pub fn meet(&self, other: &Self) -> Option<Self> {
        let parts: Vec<u64> = self.parts.iter().zip(&other.parts).map(|(a, b)| a & b).collect();
        parts.iter().all(|&p| p != 0).then_some(OrderedPartialPartition { parts })
    }

    /// Componentwise union, absent if the unions are not pairwise disjoint.
    pub fn join(&self, other: &Self) -> Option<Self> {
        let parts: Vec<u64> = self.parts.iter().zip(&other.parts).map(|(a, b)| a | b).collect();
        OrderedPartialPartition::new(parts).ok()
    }
}

impl fmt::Display for OrderedPartialPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let elems: Vec<String> = (0..64)
                .filter(|b| p >> b & 1 == 1)
                .map(|b| (b + 1).to_string())
                .collect();
            write!(f, "{{{}}}", elems.join(","))?;
        }
        write!(f, ")")
    }
}

/// The poset of ordered partial partitions of `[n]` with exactly `k` parts.
#[derive(Clone, Debug)]
pub struct PartitionPoset {
    n: u32,
    k: usize,
    elements: Vec<OrderedPartialPartition>,
}

impl PartitionPoset {
    /// All elements, sorted by support size and then by part bitmasks, so
    /// the order is a linear extension of the poset.
    pub fn build(n: u32, k: usize) -> Result<Self> {
        if k < 1 || k > n as usize || n > 64 {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= k <= n <= 64, got n={n} k={k}"
            )));
        }
        fn go(remaining: u64, k: usize, parts: &mut Vec<u64>, out: &mut Vec<OrderedPartialPartition>) {
            if parts.len() == k {
                out.push(OrderedPartialPartition { parts: parts.clone() });
                return;
            }
            // nonempty submasks of `remaining`
            let mut sub = remaining;
            while sub != 0 {
                parts.push(sub);
                go(remaining & !sub, k, parts, out);
                parts.pop();
                sub = (sub - 1) & remaining;
            }
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut elements = Vec::new();
        go(full, k, &mut Vec::new(), &mut elements);
        elements.sort_by(|a, b| (a.support_size(), &a.parts).cmp(&(b.support_size(), &b.parts)));
        Ok(PartitionPoset { n, k, elements })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn elements(&self) -> &[OrderedPartialPartition] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.elements[a].leq(&self.elements[b])
    }

    pub fn poset(&self) -> Poset {
        Poset::from_relation(self.len(), |a, b| self.leq(a, b))
    }

    pub fn order_complex(&self) -> SimplicialComplex {
        self.poset().order_complex()
    }

    pub fn hasse_edges(&self) -> Vec<[usize; 2]> {
        self.poset().hasse_edges()
    }
}

/// Maps every cell of `D_k(Δ^(n-1))` to its tuple of vertex sets and
/// checks that this is a bijection onto the partition poset that preserves
/// and reflects the order. The cell side uses the face poset closed from
/// boundary incidences; the partition side uses subset tests.
pub fn face_poset_isomorphism(n: u32, k: usize) -> Result<Vec<(ConfigCell, OrderedPartialPartition)>> {
    let poset = PartitionPoset::build(n, k)?;
    let complex = ConfigComplex::build_ordered(&SimplicialComplex::full_simplex(n - 1), k);
    let cells: Vec<ConfigCell> = complex.all_cells().cloned().collect();
    if cells.len() != poset.len() {
        return Err(Error::Verification(format!(
            "{} cells but {} partitions",
            cells.len(),
            poset.len()
        )));
    }
    let position: HashMap<&OrderedPartialPartition, usize> =
        poset.elements().iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut image = Vec::with_capacity(cells.len());
    let mut hit = vec![false; poset.len()];
    for cell in &cells {
        let part = OrderedPartialPartition::from_cell(cell);
        let Some(&i) = position.get(&part) else {
            return Err(Error::Verification(format!("cell {cell} maps outside the poset")));
        };
        if std::mem::replace(&mut hit[i], true) {
            return Err(Error::Verification(format!("two cells map to {part}")));
        }
        image.push(i);
    }
    let faces = complex.face_poset();
    for a in 0..cells.len() {
        for b in 0..cells.len() {
            if faces.leq(a, b) != poset.leq(image[a], image[b]) {
                return Err(Error::Verification(format!(
                    "order mismatch between {} and {}",
                    cells[a], cells[b]
                )));
            }
        }
    }
    Ok(cells
        .into_iter()
        .zip(image)
        .map(|(c, i)| (c, poset.elements()[i].clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opp(parts: &[&[u32]]) -> OrderedPartialPartition {
        OrderedPartialPartition::from_sets(parts).unwrap()
    }

    #[test]
    fn poset_sizes() {
        assert_eq!(PartitionPoset::build(3, 2).unwrap().len(), 12);
        let p = PartitionPoset::build(2, 2).unwrap();
        assert_eq!(p.len(), 2);
        assert!(!p.leq(0, 1) && !p.leq(1, 0));
        assert_eq!(PartitionPoset::build(4, 1).unwrap().len(), 15);
        assert!(PartitionPoset::build(2, 3).is_err());
        assert!(PartitionPoset::build(3, 0).is_err());
    }

    #[test]
    fn meet_and_join_examples() {
        let a = opp(&[&[1, 2], &[3]]);
        let b = opp(&[&[1], &[3, 4]]);
        assert_eq!(a.meet(&b), Some(opp(&[&[1], &[3]])));
        assert_eq!(opp(&[&[1], &[2]]).meet(&opp(&[&[1], &[3]])), None);
        assert_eq!(a.meet(&a), Some(a.clone()));
        assert_eq!(opp(&[&[1], &[3]]).join(&opp(&[&[2], &[4]])), Some(opp(&[&[1, 2], &[3, 4]])));
        assert_eq!(opp(&[&[1], &[2]]).join(&opp(&[&[2], &[1]])), None);
        assert_eq!(a.join(&a), Some(a.clone()));
        assert_eq!(a.to_string(), "({1,2}, {3})");
    }

    #[test]
    fn meet_join_are_bounds() {
        for n in 1..=4u32 {
            for k in 1..=n as usize {
                let p = PartitionPoset::build(n, k).unwrap();
                let els = p.elements();
                for a in els {
                    for b in els {
                        let lower: Vec<&OrderedPartialPartition> =
                            els.iter().filter(|c| c.leq(a) && c.leq(b)).collect();
                        let upper: Vec<&OrderedPartialPartition> =
                            els.iter().filter(|c| a.leq(c) && b.leq(c)).collect();
                        let glb = lower.iter().find(|g| lower.iter().all(|c| c.leq(g)));
                        let lub = upper.iter().find(|l| upper.iter().all(|c| l.leq(c)));
                        assert_eq!(a.meet(b).as_ref(), glb.copied());
                        assert_eq!(a.join(b).as_ref(), lub.copied());
                    }
                }
            }
        }
    }

    #[test]
    fn not_a_lattice() {
        let p = PartitionPoset::build(2, 2).unwrap();
        let e = p.elements();
        assert!(e[0].join(&e[1]).is_none());
        assert!(e[0].meet(&e[1]).is_none());
    }

    #[test]
    fn order_complex_examples() {
        let antichain = Poset::from_relation(2, |a, b| a == b);
        assert_eq!(antichain.order_complex().f_vector(), vec![2]);
        let chain = Poset::from_relation(3, |a, b| a <= b);
        assert_eq!(chain.order_complex().f_vector(), vec![3, 3, 1]);
        let hex = PartitionPoset::build(3, 2).unwrap().order_complex();
        assert_eq!(hex.f_vector(), vec![12, 12]);
    }

    #[test]
    fn hasse_diagram() {
        let chain = Poset::from_relation(3, |a, b| a <= b);
        assert_eq!(chain.hasse_edges(), vec![[0, 1], [1, 2]]);
        let hex = PartitionPoset::build(3, 2).unwrap();
        // every edge of the hexagon has two vertices
        assert_eq!(hex.hasse_edges().len(), 12);
        for [lo, hi] in hex.hasse_edges() {
            assert!(hex.leq(lo, hi) && lo != hi);
        }
    }

    #[test]
    fn isomorphism_examples() {
        let map = face_poset_isomorphism(3, 2).unwrap();
        let cell = ConfigCell::new(vec![
            Simplex::new(vec![1]).unwrap(),
            Simplex::new(vec![2, 3]).unwrap(),
        ])
        .unwrap();
        let image = map.iter().find(|(c, _)| *c == cell).map(|(_, p)| p.clone());
        assert_eq!(image, Some(opp(&[&[1], &[2, 3]])));
        for (c, p) in &map {
            if c.dim() == 0 {
                assert!(p.parts().iter().all(|m| m.count_ones() == 1));
            }
        }
    }

    #[test]
    fn isomorphism_exhaustive() {
        for n in 1..=5u32 {
            for k in 1..=n as usize {
                face_poset_isomorphism(n, k).unwrap_or_else(|e| panic!("n={n} k={k}: {e}"));
            }
        }
    }

    #[test]
    fn element_count_matches_cell_count() {
        for n in 1..=6u32 {
            for k in 1..=n as usize {
                let p = PartitionPoset::build(n, k).unwrap();
                let c = ConfigComplex::build_ordered(&SimplicialComplex::full_simplex(n - 1), k);
                assert_eq!(p.len(), c.cell_count());
            }
        }
    }
}
