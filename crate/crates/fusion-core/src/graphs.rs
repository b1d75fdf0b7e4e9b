//! Graphs and their stable-set polytopes: STAB (convex hull of stable-set
//! indicators, a native V-description), FRAC (edge relaxation), QSTAB
//! (maximal-clique relaxation), bipartite and perfectness tests, the
//! flag-complex correspondence, and the closed-form necklace vertex family
//! for cycle configurations.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::config::SensorConfiguration;
use crate::polytope::{
    enumerate, polyhedra_equal, positive_fusion_polytope, HPolyhedron, HRow, PolytopeError,
    VRepresentation,
};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range 1..={vertex_count}")]
    IndexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("loop at vertex {0} not allowed")]
    LoopEdge(usize),
    #[error("{vertices} vertices exceeds the guard of {guard}")]
    TooLarge { vertices: usize, guard: usize },
    #[error("operation requires a generic configuration")]
    NotGeneric,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Simple undirected graph on vertices `1..=n`, edges stored as ordered
/// pairs `(min, max)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.vertex_count, self.edges.len())
    }
}

impl Graph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w < 1 || w > vertex_count {
                    return Err(GraphError::IndexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph {
            vertex_count,
            edges: set,
        })
    }

    pub fn edgeless(vertex_count: usize) -> Self {
        Graph {
            vertex_count,
            edges: BTreeSet::new(),
        }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((n, 1));
        Graph::new(n, edges).expect("cycle edges are in range")
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (1..=n).tuple_combinations()).expect("pairs are in range")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (1..=a).flat_map(|u| (a + 1..=a + b).map(move |v| (u, v)));
        Graph::new(a + b, edges).expect("pairs are in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (1..=self.vertex_count)
            .filter(|&u| u != v && self.has_edge(u, v))
            .collect()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (1..=self.vertex_count)
            .filter(|&v| self.degree(v) == 0)
            .collect()
    }

    pub fn complement(&self) -> Graph {
        let edges = (1..=self.vertex_count)
            .tuple_combinations()
            .filter(|&(u, v)| !self.has_edge(u, v));
        Graph::new(self.vertex_count, edges).expect("pairs are in range")
    }

    /// Adjacency as bitmasks (bit `v-1` for vertex `v`); requires at most 64
    /// vertices.
    fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.vertex_count <= 64, "bitmask operations cap at 64");
        let mut adj = vec![0u64; self.vertex_count + 1];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << (v - 1);
            adj[v] |= 1 << (u - 1);
        }
        adj
    }
}

/// The graph of the size-1 and size-2 faces of a complex.
pub fn one_skeleton(cx: &SimplicialComplex) -> Graph {
    let edges = cx
        .faces_of_size(2)
        .into_iter()
        .map(|s| (s.vertices()[0], s.vertices()[1]));
    Graph::new(cx.vertex_count(), edges).expect("faces are in range")
}

fn indicator(n: usize, set: &BTreeSet<usize>) -> Vec<Rational> {
    (1..=n)
        .map(|v| {
            if set.contains(&v) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// All stable (independent) sets, the empty set included, in mask order.
pub fn stable_sets(g: &Graph) -> Vec<BTreeSet<usize>> {
    let n = g.vertex_count();
    assert!(n <= 20, "stable-set enumeration is exponential");
    let adj = g.adjacency_masks();
    let mut out = Vec::new();
    'outer: for mask in 0u64..(1 << n) {
        for v in 1..=n {
            if mask >> (v - 1) & 1 == 1 && adj[v] & mask != 0 {
                continue 'outer;
            }
        }
        out.push((1..=n).filter(|&v| mask >> (v - 1) & 1 == 1).collect());
    }
    out
}

fn is_stable(g: &Graph, set: &BTreeSet<usize>) -> bool {
    set.iter()
        .tuple_combinations()
        .all(|(&u, &v)| !g.has_edge(u, v))
}

/// The stable-set polytope as a native V-description: one 0/1 vertex per
/// stable set. The dominant subset is exactly the maximal stable sets.
pub fn stab(g: &Graph) -> VRepresentation {
    let n = g.vertex_count();
    let vertices: Vec<Vec<Rational>> = stable_sets(g)
        .iter()
        .map(|s| indicator(n, s))
        .collect();
    VRepresentation::new(n, vertices, vec![]).expect("indicators have length n")
}

/// Edge relaxation: `x_v >= 0` for every vertex and `x_u + x_v <= 1` per
/// edge.
pub fn frac(g: &Graph) -> HPolyhedron {
    let n = g.vertex_count();
    let mut rows: Vec<HRow> = Vec::new();
    for v in 0..n {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[v] = -Rational::one();
        rows.push(HRow::new(coeffs, Rational::zero()));
    }
    for (u, v) in g.edges() {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[u - 1] = Rational::one();
        coeffs[v - 1] = Rational::one();
        rows.push(HRow::new(coeffs, Rational::one()));
    }
    HPolyhedron::new(n, rows).expect("rows have length n")
}

/// Maximal cliques by Bron-Kerbosch with pivoting.
pub fn maximal_cliques(g: &Graph) -> Vec<BTreeSet<usize>> {
    let n = g.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    let adj = g.adjacency_masks();
    let mut out: Vec<u64> = Vec::new();
    fn bk(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = {
            let mut best = 0usize;
            let mut best_count = usize::MAX;
            let mut candidates = p | x;
            while candidates != 0 {
                let v = candidates.trailing_zeros() as usize + 1;
                candidates &= candidates - 1;
                let uncovered = (p & !adj[v]).count_ones() as usize;
                if uncovered < best_count {
                    best_count = uncovered;
                    best = v;
                }
            }
            best
        };
        let mut work = p & !adj[pivot];
        while work != 0 {
            let v = work.trailing_zeros() as usize + 1;
            work &= work - 1;
            let bit = 1u64 << (v - 1);
            bk(adj, r | bit, p & adj[v], x & adj[v], out);
            p &= !bit;
            x |= bit;
        }
    }
    bk(&adj, 0, (1u64 << n) - 1, 0, &mut out);
    let mut cliques: Vec<BTreeSet<usize>> = out
        .into_iter()
        .map(|mask| (1..=n).filter(|&v| mask >> (v - 1) & 1 == 1).collect())
        .collect();
    cliques.sort();
    cliques
}

/// Clique relaxation: `x_v >= 0` plus one row per maximal clique (subsets
/// are implied, so only maximal cliques are emitted).
pub fn qstab(g: &Graph) -> HPolyhedron {
    let n = g.vertex_count();
    let mut rows: Vec<HRow> = Vec::new();
    for v in 0..n {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[v] = -Rational::one();
        rows.push(HRow::new(coeffs, Rational::zero()));
    }
    for q in maximal_cliques(g) {
        let mut coeffs = vec![Rational::zero(); n];
        for v in q {
            coeffs[v - 1] = Rational::one();
        }
        rows.push(HRow::new(coeffs, Rational::one()));
    }
    HPolyhedron::new(n, rows).expect("rows have length n")
}

pub fn is_bipartite(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut color = vec![0i8; n + 1];
    for start in 1..=n {
        if color[start] != 0 {
            continue;
        }
        color[start] = 1;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for u in g.neighbors(v) {
                if color[u] == 0 {
                    color[u] = -color[v];
                    queue.push(u);
                } else if color[u] == color[v] {
                    return false;
                }
            }
        }
    }
    true
}

fn induced_is_cycle(g: &Graph, subset: &[usize]) -> bool {
    let inside: BTreeSet<usize> = subset.iter().copied().collect();
    let mut degrees = vec![0usize; subset.len()];
    let mut edge_count = 0;
    for (i, &u) in subset.iter().enumerate() {
        for (j, &v) in subset.iter().enumerate().skip(i + 1) {
            if g.has_edge(u, v) {
                degrees[i] += 1;
                degrees[j] += 1;
                edge_count += 1;
            }
        }
    }
    if edge_count != subset.len() || degrees.iter().any(|&d| d != 2) {
        return false;
    }
    // Two-regular with |E| = |V|: connected iff a single cycle.
    let mut seen = BTreeSet::from([subset[0]]);
    let mut queue = vec![subset[0]];
    while let Some(v) = queue.pop() {
        for u in g.neighbors(v) {
            if inside.contains(&u) && seen.insert(u) {
                queue.push(u);
            }
        }
    }
    seen.len() == subset.len()
}

fn has_odd_hole(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut size = 5;
    while size <= n {
        for subset in (1..=n).combinations(size) {
            if induced_is_cycle(g, &subset) {
                return true;
            }
        }
        size += 2;
    }
    false
}

/// Perfectness by the odd-hole / odd-antihole characterization. A graph is
/// perfect iff neither it nor its complement contains an induced odd cycle
/// of length at least five.
pub fn is_perfect(g: &Graph) -> Result<bool, GraphError> {
    const GUARD: usize = 14;
    if g.vertex_count() > GUARD {
        return Err(GraphError::TooLarge {
            vertices: g.vertex_count(),
            guard: GUARD,
        });
    }
    Ok(!has_odd_hole(g) && !has_odd_hole(&g.complement()))
}

/// Whether the convex hull of the stable-set indicators equals the point
/// set of `h`. Decided by mutual containment: `h` must be bounded with
/// every vertex a stable-set indicator, and every stable-set indicator must
/// satisfy `h`.
pub fn stab_equals_polyhedron(g: &Graph, h: &HPolyhedron) -> Result<bool, GraphError> {
    let v = enumerate(h)?;
    if !v.is_bounded() {
        return Ok(false);
    }
    for w in v.vertices() {
        if !w.iter().all(|c| c.is_zero() || c.is_one()) {
            return Ok(false);
        }
        let set: BTreeSet<usize> = (1..=g.vertex_count())
            .filter(|&i| w[i - 1].is_one())
            .collect();
        if !is_stable(g, &set) {
            return Ok(false);
        }
    }
    Ok(stable_sets(g)
        .iter()
        .all(|s| h.contains_point(&indicator(g.vertex_count(), s))))
}

/// Whether the non-negative dual feasible set of a generic configuration is
/// exactly the clique relaxation of the nerve's 1-skeleton. True precisely
/// when the nerve is a flag complex.
pub fn flag_correspondence_check(c: &SensorConfiguration) -> Result<bool, GraphError> {
    if !c.is_generic() {
        return Err(GraphError::NotGeneric);
    }
    let nerve = c.nerve();
    let g = one_skeleton(&nerve);
    Ok(polyhedra_equal(&positive_fusion_polytope(c), &qstab(&g))?)
}

/// Closed-form dominant vertices of the edge relaxation of a cycle: all 0/1
/// circular words with no adjacent pair of ones and no three consecutive
/// zeros, plus the all-1/2 point exactly when the length is odd.
pub fn necklace_vertices(r: usize) -> VRepresentation {
    assert!(r >= 3, "cycles start at length 3");
    assert!(r <= 32, "mask enumeration caps at 32");
    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    'outer: for mask in 0u64..(1 << r) {
        for i in 0..r {
            let a = mask >> i & 1;
            let b = mask >> ((i + 1) % r) & 1;
            let c = mask >> ((i + 2) % r) & 1;
            if a == 1 && b == 1 {
                continue 'outer;
            }
            if a == 0 && b == 0 && c == 0 {
                continue 'outer;
            }
        }
        vertices.push(
            (0..r)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        );
    }
    if r % 2 == 1 {
        vertices.push(vec![crate::ratio(1, 2); r]);
    }
    VRepresentation::new(r, vertices, vec![]).expect("words have length r")
}

/// Canonical key for isomorphism classes: the sorted degree sequence plus
/// the minimum edge bitmask over all vertex orders that respect the degree
/// sort (isomorphisms preserve degrees, so searching within degree classes
/// is exhaustive).
fn canonical_key(g: &Graph) -> (Vec<usize>, u64) {
    let n = g.vertex_count();
    assert!(n * (n - 1) / 2 <= 64, "edge mask must fit 64 bits");
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&v| g.degree(v));
    let degrees: Vec<usize> = order.iter().map(|&v| g.degree(v)).collect();

    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && degrees[i] == degrees[i - 1] {
            classes.last_mut().unwrap().push(v);
        } else {
            classes.push(vec![v]);
        }
    }

    let mut pair_bit = vec![vec![0usize; n]; n];
    let mut bit = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            pair_bit[i][j] = bit;
            bit += 1;
        }
    }

    fn visit(
        g: &Graph,
        classes: &[Vec<usize>],
        level: usize,
        relabel: &mut Vec<usize>,
        pair_bit: &[Vec<usize>],
        best: &mut Option<u64>,
    ) {
        if level == classes.len() {
            let mut mask = 0u64;
            for i in 0..relabel.len() {
                for j in (i + 1)..relabel.len() {
                    if g.has_edge(relabel[i], relabel[j]) {
                        mask |= 1 << pair_bit[i][j];
                    }
                }
            }
            if best.map_or(true, |b| mask < b) {
                *best = Some(mask);
            }
            return;
        }
        let k = classes[level].len();
        for perm in classes[level].iter().permutations(k) {
            let mark = relabel.len();
            relabel.extend(perm.into_iter().copied());
            visit(g, classes, level + 1, relabel, pair_bit, best);
            relabel.truncate(mark);
        }
    }

    let mut best = None;
    let mut relabel = Vec::with_capacity(n);
    visit(g, &classes, 0, &mut relabel, &pair_bit, &mut best);
    (degrees, best.expect("at least one ordering exists"))
}

pub fn graphs_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonical_key(a) == canonical_key(b)
}

/// One representative per isomorphism class of graphs on exactly `n`
/// vertices, built incrementally: every class on `n` vertices arises from a
/// class on `n - 1` vertices by attaching the new vertex to some neighbor
/// subset.
pub fn all_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!((1..=8).contains(&n), "battery generator is for 1..=8 vertices");
    let mut level: Vec<Graph> = vec![Graph::edgeless(1)];
    for k in 2..=n {
        let mut seen: BTreeSet<(Vec<usize>, u64)> = BTreeSet::new();
        let mut next: Vec<Graph> = Vec::new();
        for g in &level {
            for subset in 0u32..(1 << (k - 1)) {
                let mut edges: Vec<(usize, usize)> = g.edges().collect();
                for v in 1..k {
                    if subset >> (v - 1) & 1 == 1 {
                        edges.push((v, k));
                    }
                }
                let candidate = Graph::new(k, edges).expect("indices below k+1");
                if seen.insert(canonical_key(&candidate)) {
                    next.push(candidate);
                }
            }
        }
        level = next;
    }
    level
}

/// Uniform random graph: each pair becomes an edge with probability 1/2.
pub fn random_graph<R: rand::Rng>(n: usize, rng: &mut R) -> Graph {
    let edges = (1..=n)
        .tuple_combinations()
        .filter(|_| rng.gen_bool(0.5))
        .collect::<Vec<_>>();
    Graph::new(n, edges).expect("pairs are in range")
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            vertices: self.vertex_count,
            edges: self.edges.iter().copied().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        Graph::new(repr.vertices, repr.edges).map_err(D::Error::custom)
    }
}
