//! Abstract simplicial complexes over the vertex set `{1..R}`.
//!
//! A complex is stored by its maximal simplices; downward closure is
//! implicit. Vertices are 1-based region indices. The empty simplex is the
//! implicit bottom element of every complex: it can be built and queried but
//! is never stored or emitted.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex {vertex} out of range 1..={vertex_count}")]
    IndexOutOfRange { vertex: usize, vertex_count: usize },
}

/// A face: a set of 1-based vertex indices, kept strictly increasing.
///
/// Ordering is lexicographic on the vertex sequence, the canonical order for
/// all emitted output.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    verts: Vec<usize>,
}

impl Simplex {
    /// Builds a simplex from any iterator of vertices; sorts and drops
    /// duplicates.
    pub fn new(verts: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = verts.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Simplex { verts: v }
    }

    pub fn empty() -> Self {
        Simplex { verts: Vec::new() }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    pub fn size(&self) -> usize {
        self.verts.len()
    }

    /// Dimension is cardinality minus one; the empty simplex has dimension -1.
    pub fn dim(&self) -> isize {
        self.verts.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.verts.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        self.verts.iter().all(|v| other.contains_vertex(*v))
    }

    /// All subsets of the given size, in lexicographic order.
    pub fn subsets_of_size(&self, s: usize) -> Vec<Simplex> {
        self.verts
            .iter()
            .copied()
            .combinations(s)
            .map(Simplex::new)
            .collect()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.verts.iter().join(","))
    }
}

/// A simplicial complex over `{1..vertex_count}`, stored by its maximal
/// simplices (a pairwise non-containing family covering every vertex).
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    maximal: BTreeSet<Simplex>,
}

/// Keeps only the maximal elements of a family of simplices.
fn antichain(mut faces: Vec<Simplex>) -> BTreeSet<Simplex> {
    faces.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| a.cmp(b)));
    let mut kept: Vec<Simplex> = Vec::new();
    for f in faces {
        if f.is_empty() {
            continue;
        }
        if !kept.iter().any(|k| f.is_subset_of(k)) {
            kept.push(f);
        }
    }
    kept.into_iter().collect()
}

impl SimplicialComplex {
    /// Downward closure of the given faces, represented by its maximal
    /// elements. Vertices not covered by any face are added as maximal
    /// singletons, so every complex covers its full vertex set.
    pub fn from_simplices(
        vertex_count: usize,
        faces: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self, ComplexError> {
        let faces: Vec<Simplex> = faces.into_iter().collect();
        for f in &faces {
            for &v in f.vertices() {
                if v < 1 || v > vertex_count {
                    return Err(ComplexError::IndexOutOfRange {
                        vertex: v,
                        vertex_count,
                    });
                }
            }
        }
        let mut maximal = antichain(faces);
        let covered: BTreeSet<usize> = maximal
            .iter()
            .flat_map(|s| s.vertices().iter().copied())
            .collect();
        for r in 1..=vertex_count {
            if !covered.contains(&r) {
                maximal.insert(Simplex::new([r]));
            }
        }
        Ok(SimplicialComplex {
            vertex_count,
            maximal,
        })
    }

    /// The closure of the single simplex `{1..vertex_count}`.
    pub fn full_simplex(vertex_count: usize) -> Self {
        SimplicialComplex::from_simplices(vertex_count, [Simplex::new(1..=vertex_count)])
            .expect("full simplex is always in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn maximal_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.maximal.iter()
    }

    pub fn maximal_count(&self) -> usize {
        self.maximal.len()
    }

    /// Validates a query simplex against this complex's vertex range.
    pub fn check_simplex(&self, s: &Simplex) -> Result<(), ComplexError> {
        for &v in s.vertices() {
            if v < 1 || v > self.vertex_count {
                return Err(ComplexError::IndexOutOfRange {
                    vertex: v,
                    vertex_count: self.vertex_count,
                });
            }
        }
        Ok(())
    }

    /// Membership: true iff `s` is a subset of some maximal simplex. The
    /// empty simplex is always a member.
    pub fn contains(&self, s: &Simplex) -> bool {
        s.is_empty() || self.maximal.iter().any(|m| s.is_subset_of(m))
    }

    pub fn dim(&self) -> isize {
        self.maximal.iter().map(Simplex::dim).max().unwrap_or(-1)
    }

    /// All faces of exactly the given (non-zero) size, lexicographically
    /// sorted.
    pub fn faces_of_size(&self, s: usize) -> BTreeSet<Simplex> {
        let mut out = BTreeSet::new();
        for m in &self.maximal {
            if m.size() >= s {
                out.extend(m.subsets_of_size(s));
            }
        }
        out
    }

    /// All non-empty faces.
    pub fn all_faces(&self) -> BTreeSet<Simplex> {
        let mut out = BTreeSet::new();
        for m in &self.maximal {
            for s in 1..=m.size() {
                out.extend(m.subsets_of_size(s));
            }
        }
        out
    }

    /// The subcomplex of simplices of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Self {
        let size = k + 1;
        let mut faces = Vec::new();
        for m in &self.maximal {
            if m.size() <= size {
                faces.push(m.clone());
            } else {
                faces.extend(m.subsets_of_size(size));
            }
        }
        SimplicialComplex {
            vertex_count: self.vertex_count,
            maximal: antichain(faces),
        }
    }

    /// Least fixpoint of inserting every simplex all of whose `k`-dimensional
    /// faces (subsets of size `k+1`) are already present. Requires `k >= 1`.
    pub fn completion(&self, k: usize) -> Self {
        assert!(k >= 1, "completion requires k >= 1");
        self.completed_by_face_size(k + 1)
    }

    /// Completion indexed by face cardinality instead of dimension: inserts
    /// every simplex all of whose subsets of size `s` are present. With
    /// `s = 1` this is the full simplex (all singletons are always present).
    ///
    /// Inserting a qualifying simplex never creates a new size-`s` face (all
    /// of its size-`s` subsets were present already), so the qualifying
    /// criterion is static and a single closed-form pass computes the least
    /// fixpoint.
    pub fn completed_by_face_size(&self, s: usize) -> Self {
        assert!(s >= 1, "completion requires a positive face size");
        assert!(
            self.vertex_count <= 128,
            "completion supports at most 128 vertices"
        );
        if self.vertex_count == 0 {
            return self.clone();
        }
        if s == 1 {
            return SimplicialComplex::full_simplex(self.vertex_count);
        }

        let to_mask = |sx: &Simplex| -> u128 {
            sx.vertices().iter().fold(0u128, |m, &v| m | (1 << (v - 1)))
        };
        let base: BTreeSet<u128> = self.faces_of_size(s).iter().map(to_mask).collect();

        // Grow qualifying sets one vertex at a time, always appending a
        // vertex larger than the current maximum so each set is built once.
        let mut qualifying: Vec<u128> = Vec::new();
        let mut level: Vec<u128> = base.iter().copied().collect();
        while !level.is_empty() {
            let mut next = Vec::new();
            for &q in &level {
                let verts: Vec<usize> = (0..self.vertex_count)
                    .filter(|b| q & (1 << b) != 0)
                    .map(|b| b + 1)
                    .collect();
                let max_v = *verts.last().expect("level sets are non-empty");
                'ext: for v in (max_v + 1)..=self.vertex_count {
                    let vbit = 1u128 << (v - 1);
                    // Every size-s subset containing v must be a base face;
                    // subsets avoiding v are covered by q's own qualification.
                    for rest in verts.iter().copied().combinations(s - 1) {
                        let sub = rest.iter().fold(vbit, |m, &w| m | (1 << (w - 1)));
                        if !base.contains(&sub) {
                            continue 'ext;
                        }
                    }
                    next.push(q | vbit);
                }
            }
            next.sort_unstable();
            next.dedup();
            qualifying.extend(next.iter().copied());
            level = next;
        }

        let from_mask = |m: u128| -> Simplex {
            Simplex::new((0..self.vertex_count).filter(|b| m & (1 << b) != 0).map(|b| b + 1))
        };
        let mut faces: Vec<Simplex> = self.maximal.iter().cloned().collect();
        faces.extend(qualifying.into_iter().map(from_mask));
        SimplicialComplex {
            vertex_count: self.vertex_count,
            maximal: antichain(faces),
        }
    }

    /// True iff the complex equals the clique complex of its 1-skeleton.
    pub fn is_flag(&self) -> bool {
        self.completion(1) == *self
    }

    /// Necessary condition for realizability by convex regions in `n`-space:
    /// inserting simplices whose size-`n` boundary faces are all present
    /// changes nothing. Requires `n >= 1`.
    pub fn helly_check(&self, n: usize) -> bool {
        assert!(n >= 1, "helly_check requires n >= 1");
        self.completed_by_face_size(n) == *self
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Complex(R={}; {})",
            self.vertex_count,
            self.maximal.iter().map(|s| format!("{s:?}")).join(" ")
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    vertex_count: usize,
    maximal: Vec<Vec<usize>>,
}

impl Serialize for SimplicialComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ComplexRepr {
            vertex_count: self.vertex_count,
            maximal: self
                .maximal
                .iter()
                .map(|s| s.vertices().to_vec())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ComplexRepr::deserialize(deserializer)?;
        SimplicialComplex::from_simplices(
            repr.vertex_count,
            repr.maximal.into_iter().map(Simplex::new),
        )
        .map_err(D::Error::custom)
    }
}
