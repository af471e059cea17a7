//! Abstract finite simplicial complexes on 1-based vertex labels.

use std::collections::BTreeSet;
use std::fmt;

use smallvec::SmallVec;

use crate::{Error, Result};

/// A nonempty simplex given by its strictly increasing vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(SmallVec<[u32; 7]>);

impl Simplex {
    /// Builds a simplex from arbitrary labels; they are sorted and must be
    /// distinct, positive and nonempty.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.is_empty() {
            return Err(Error::InvalidArgument("empty simplex".into()));
        }
        if vertices[0] == 0 {
            return Err(Error::InvalidArgument("vertex labels are 1-based".into()));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "repeated vertex in simplex {vertices:?}"
            )));
        }
        Ok(Simplex(SmallVec::from_vec(vertices)))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The face obtained by deleting the `j`-th vertex. Requires `dim >= 1`.
    pub fn facet(&self, j: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(j);
        Simplex(v)
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A downward-closed family of simplices on the vertex set `[vertex_count]`.
///
/// Faces are stored per dimension, each list sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: u32,
    faces: Vec<Vec<Simplex>>,
}

impl SimplicialComplex {
    /// The closure of a list of facets. Labels must lie in `[vertex_count]`.
    pub fn from_facets<I>(vertex_count: u32, facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut by_dim: Vec<BTreeSet<Simplex>> = Vec::new();
        for facet in facets {
            if let Some(&v) = facet.vertices().last() {
                if v > vertex_count {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} outside [1, {vertex_count}]"
                    )));
                }
            }
            if facet.0.len() > 31 {
                return Err(Error::InvalidArgument(format!(
                    "facet of dimension {} is too large to expand",
                    facet.dim()
                )));
            }
            let verts = facet.vertices();
            let len = verts.len();
            for mask in 1u32..(1u32 << len) {
                let sub: SmallVec<[u32; 7]> = (0..len)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| verts[i])
                    .collect();
                let d = sub.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, BTreeSet::new);
                }
                by_dim[d].insert(Simplex(sub));
            }
        }
        Ok(SimplicialComplex {
            vertex_count,
            faces: by_dim.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    /// The full simplex `Δⁿ` on vertices `[n+1]`.
    pub fn full_simplex(n: u32) -> Self {
        let top = Simplex((1..=n + 1).collect());
        Self::from_facets(n + 1, [top]).expect("full simplex is well formed")
    }

    /// The complete graph `K_m` as a 1-dimensional complex.
    pub fn complete_graph(m: u32) -> Self {
        Self::full_simplex(m.saturating_sub(1)).skeleton(1).with_vertex_count(m)
    }

    fn with_vertex_count(mut self, m: u32) -> Self {
        self.vertex_count = m;
        if m == 0 {
            self.faces.clear();
        }
        self
    }

    /// All faces of dimension at most `d`.
    pub fn skeleton(&self, d: usize) -> Self {
        SimplicialComplex {
            vertex_count: self.vertex_count,
            faces: self.faces.iter().take(d + 1).cloned().collect(),
        }
    }

    /// Faces of dimension exactly `d`, lexicographically ordered. Negative
    /// or too-large dimensions give an empty slice.
    pub fn faces_of_dim(&self, d: i64) -> &[Simplex] {
        usize::try_from(d)
            .ok()
            .and_then(|d| self.faces.get(d))
            .map_or(&[], Vec::as_slice)
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    /// Dimension of the complex, or `None` when it has no faces.
    pub fn dim(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn face_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// Every face, in order of dimension and then lexicographically.
    pub fn iter_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.faces
            .get(s.dim())
            .is_some_and(|list| list.binary_search(s).is_ok())
    }

    /// Parses the facet-list text format: one facet per line, vertex labels
    /// separated by commas. Blank lines and lines starting with `#` are
    /// skipped. The vertex count is the largest label seen.
    pub fn parse_facets(text: &str) -> Result<Self> {
        let mut facets = Vec::new();
        let mut max_label = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let labels = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<u32>().map_err(|e| Error::Parse {
                        line: idx + 1,
                        msg: format!("bad vertex label {:?}: {e}", tok.trim()),
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            let simplex = Simplex::new(labels).map_err(|e| Error::Parse {
                line: idx + 1,
                msg: e.to_string(),
            })?;
            max_label = max_label.max(*simplex.vertices().last().unwrap());
            facets.push(simplex);
        }
        Self::from_facets(max_label, facets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;

    #[test]
    fn full_simplex_face_counts() {
        assert_eq!(SimplicialComplex::full_simplex(2).face_count(), 7);
        assert_eq!(SimplicialComplex::full_simplex(2).f_vector(), vec![3, 3, 1]);
        assert_eq!(SimplicialComplex::full_simplex(0).f_vector(), vec![1]);
        assert_eq!(SimplicialComplex::full_simplex(4).face_count(), 31);
        for n in 0..=10u32 {
            let x = SimplicialComplex::full_simplex(n);
            for d in 0..=n {
                assert_eq!(
                    binomial(i64::from(n) + 1, i64::from(d) + 1).unwrap(),
                    x.faces_of_dim(i64::from(d)).len().into()
                );
            }
        }
    }

    #[test]
    fn skeleta() {
        let k4 = SimplicialComplex::full_simplex(3).skeleton(1);
        assert_eq!(k4.f_vector(), vec![4, 6]);
        assert_eq!(k4, SimplicialComplex::complete_graph(4));
        let d2 = SimplicialComplex::full_simplex(2);
        assert_eq!(d2.skeleton(2), d2);
        assert_eq!(SimplicialComplex::full_simplex(4).skeleton(1).f_vector(), vec![5, 10]);
        let s = SimplicialComplex::full_simplex(5);
        for d in 0..6 {
            assert_eq!(s.skeleton(d).skeleton(d), s.skeleton(d));
        }
    }

    #[test]
    fn faces_of_dim_examples() {
        let d3 = SimplicialComplex::full_simplex(3);
        assert_eq!(d3.faces_of_dim(1).len(), 6);
        assert_eq!(d3.faces_of_dim(3).len(), 1);
        assert!(d3.faces_of_dim(-1).is_empty());
        let k5 = SimplicialComplex::complete_graph(5);
        assert!(k5.faces_of_dim(2).is_empty());
        let edges = d3.faces_of_dim(1);
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(edges[0].vertices(), &[1, 2]);
    }

    #[test]
    fn closure_and_parse() {
        let x = SimplicialComplex::parse_facets("# a square\n1,2\n2,3\n3,4\n4,1\n").unwrap();
        assert_eq!(x.f_vector(), vec![4, 4]);
        assert!(x.contains(&Simplex::new(vec![1, 4]).unwrap()));
        assert!(!x.contains(&Simplex::new(vec![1, 3]).unwrap()));
        for face in x.iter_faces() {
            if face.dim() > 0 {
                for j in 0..=face.dim() {
                    assert!(x.contains(&face.facet(j)));
                }
            }
        }
        assert!(matches!(
            SimplicialComplex::parse_facets("1,2\n1,x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(SimplicialComplex::parse_facets("1,1\n").is_err());
        assert!(SimplicialComplex::parse_facets("0,1\n").is_err());
    }

    #[test]
    fn simplex_relations() {
        let a = Simplex::new(vec![3, 1]).unwrap();
        let b = Simplex::new(vec![1, 2, 3]).unwrap();
        assert_eq!(a.vertices(), &[1, 3]);
        assert!(a.is_face_of(&b));
        assert!(!b.is_face_of(&a));
        assert!(!a.is_disjoint(&b));
        assert!(Simplex::new(vec![2]).unwrap().is_disjoint(&a));
        assert_eq!(b.facet(1).vertices(), &[1, 3]);
        assert!(Simplex::new(vec![]).is_err());
    }
}
