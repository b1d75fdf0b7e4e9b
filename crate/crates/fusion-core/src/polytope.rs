//! Exact rational polyhedra: halfspace descriptions, vertex/ray
//! enumeration by the double description method, dominance filtering, and
//! coordinate lower-bound reports.
//!
//! All arithmetic is exact (arbitrary-precision rationals); enumeration
//! outputs are canonically ordered, so equal inputs give byte-identical
//! results.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::config::SensorConfiguration;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("row has {got} coefficients, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polyhedron has no points, so there is nothing to enumerate")]
    EmptyPolyhedron,
    #[error("polyhedron contains a line, so it has no vertices to enumerate")]
    NonPointed,
    #[error(
        "size guard: {dim} variables / {rows} rows exceeds {dim_guard}/{row_guard}; \
         pass force to run anyway"
    )]
    TooLarge {
        dim: usize,
        rows: usize,
        dim_guard: usize,
        row_guard: usize,
    },
    #[error("ambient dimension must be at least 1")]
    ZeroDimension,
    #[error("a ray must have a nonzero direction")]
    ZeroRay,
}

/// One inequality `coeffs . y <= rhs`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl HRow {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        HRow { coeffs, rhs }
    }

    /// Indices (1-based) of the nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }

    fn sort_key(&self) -> (usize, Vec<usize>, Vec<Rational>, Rational) {
        let s = self.support();
        (s.len(), s, self.coeffs.clone(), self.rhs.clone())
    }
}

/// An intersection of halfspaces in fixed canonical row order: rows are
/// sorted by support size, then support, then coefficients, then right-hand
/// side, with exact duplicates removed.
#[derive(Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<HRow>,
}

impl fmt::Debug for HPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPolyhedron(dim={}, rows={})", self.dim, self.rows.len())
    }
}

impl HPolyhedron {
    pub fn new(dim: usize, rows: Vec<HRow>) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::ZeroDimension);
        }
        for r in &rows {
            if r.coeffs.len() != dim {
                return Err(PolytopeError::DimensionMismatch {
                    expected: dim,
                    got: r.coeffs.len(),
                });
            }
        }
        let mut rows = rows;
        rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        rows.dedup();
        Ok(HPolyhedron { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[HRow] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn contains_point(&self, y: &[Rational]) -> bool {
        y.len() == self.dim
            && self.rows.iter().all(|r| {
                r.coeffs
                    .iter()
                    .zip(y)
                    .map(|(c, v)| c * v)
                    .sum::<Rational>()
                    <= r.rhs
            })
    }

    /// True iff moving along `r` never leaves the polyhedron: `A r <= 0`.
    pub fn admits_ray(&self, r: &[Rational]) -> bool {
        r.len() == self.dim
            && self.rows.iter().all(|row| {
                row.coeffs
                    .iter()
                    .zip(r)
                    .map(|(c, v)| c * v)
                    .sum::<Rational>()
                    .is_negative()
                    || row
                        .coeffs
                        .iter()
                        .zip(r)
                        .map(|(c, v)| c * v)
                        .sum::<Rational>()
                        .is_zero()
            })
    }
}

/// Vertices and extreme rays, each list sorted lexicographically. Rays are
/// scaled to primitive integer vectors (coordinate gcd 1) with their
/// direction preserved.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VRepresentation {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
    rays: Vec<Vec<Rational>>,
}

impl VRepresentation {
    pub fn new(
        dim: usize,
        vertices: Vec<Vec<Rational>>,
        rays: Vec<Vec<Rational>>,
    ) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::ZeroDimension);
        }
        for v in vertices.iter().chain(rays.iter()) {
            if v.len() != dim {
                return Err(PolytopeError::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();
        let mut rays = rays
            .into_iter()
            .map(|r| {
                if r.iter().all(Rational::is_zero) {
                    return Err(PolytopeError::ZeroRay);
                }
                Ok(to_primitive_integers(&r)
                    .into_iter()
                    .map(Rational::from_integer)
                    .collect::<Vec<Rational>>())
            })
            .collect::<Result<Vec<_>, _>>()?;
        rays.sort();
        rays.dedup();
        Ok(VRepresentation {
            dim,
            vertices,
            rays,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<Rational>] {
        &self.rays
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn has_vertex(&self, v: &[Rational]) -> bool {
        self.vertices.iter().any(|w| w.as_slice() == v)
    }

    pub fn has_ray(&self, r: &[Rational]) -> bool {
        self.rays.iter().any(|w| w.as_slice() == r)
    }
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Run even when the size guard would refuse.
    pub force: bool,
    pub dim_guard: usize,
    pub row_guard: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            force: false,
            dim_guard: 34,
            row_guard: 400,
        }
    }
}

/// The dual feasible set of a configuration: one row `sum_{r in a} y_r <= 1`
/// per atom `a`, in canonical atom order. Coordinates are not sign
/// constrained.
pub fn fusion_polytope(c: &SensorConfiguration) -> HPolyhedron {
    let dim = c.region_count();
    let rows = c
        .atoms()
        .map(|a| {
            let mut coeffs = vec![Rational::zero(); dim];
            for &r in a.regions() {
                coeffs[r - 1] = Rational::one();
            }
            HRow::new(coeffs, Rational::one())
        })
        .collect();
    HPolyhedron::new(dim, rows).expect("atom rows match the region count")
}

/// The non-negative variant: one row per maximal face of the nerve plus
/// `y_r >= 0` for every region. For generic configurations its maximum of a
/// non-negative linear functional agrees with the full dual feasible set.
pub fn positive_fusion_polytope(c: &SensorConfiguration) -> HPolyhedron {
    let dim = c.region_count();
    let mut rows: Vec<HRow> = c
        .nerve()
        .maximal_simplices()
        .iter()
        .map(|s| {
            let mut coeffs = vec![Rational::zero(); dim];
            for &r in s.vertices() {
                coeffs[r - 1] = Rational::one();
            }
            HRow::new(coeffs, Rational::one())
        })
        .collect();
    for r in 0..dim {
        let mut coeffs = vec![Rational::zero(); dim];
        coeffs[r] = -Rational::one();
        rows.push(HRow::new(coeffs, Rational::zero()));
    }
    HPolyhedron::new(dim, rows).expect("rows match the region count")
}

/// Fixed-width bitset used for generator zero-sets.
#[derive(Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains_all(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| b & !a == 0)
    }
}

struct Generator {
    vec: Vec<BigInt>,
    zeros: Bits,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divide through by the gcd of the entries, keeping direction.
fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if g > BigInt::one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction.
fn to_primitive_integers(v: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let lr = Rational::from_integer(l);
    let mut out: Vec<BigInt> = v.iter().map(|x| (x * &lr).to_integer()).collect();
    make_primitive(&mut out);
    out
}

/// Greedy row reduction over the rationals; returns the indices of the first
/// maximal independent set of rows, scanning in order.
fn independent_rows(rows: &[Vec<BigInt>], want: usize) -> Vec<usize> {
    let width = if rows.is_empty() { 0 } else { rows[0].len() };
    let mut reduced: Vec<(usize, Vec<Rational>)> = Vec::new(); // (pivot col, row)
    let mut picked = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut r: Vec<Rational> = row
            .iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect();
        for (p, base) in &reduced {
            if !r[*p].is_zero() {
                let f = r[*p].clone() / &base[*p];
                for j in 0..width {
                    let delta = &f * &base[j];
                    r[j] -= delta;
                }
            }
        }
        if let Some(p) = (0..width).find(|&j| !r[j].is_zero()) {
            reduced.push((p, r));
            picked.push(idx);
            if picked.len() == want {
                break;
            }
        }
    }
    picked
}

/// Gauss-Jordan inverse of a square rational matrix; `None` when singular.
fn invert(mat: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = mat.len();
    let mut a: Vec<Vec<Rational>> = mat.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let da = &f * &a[col][j];
                    a[r][j] -= da;
                    let di = &f * &inv[col][j];
                    inv[r][j] -= di;
                }
            }
        }
    }
    Some(inv)
}

pub fn enumerate(h: &HPolyhedron) -> Result<VRepresentation, PolytopeError> {
    enumerate_with(h, &EnumerateOptions::default())
}

/// Double description enumeration of the vertices and extreme rays of
/// `{y : A y <= b}`.
///
/// The system is homogenized to the cone `{(t, y) : t >= 0, b t - A y >= 0}`
/// in dimension `d + 1`; vertices are generators with `t > 0` (scaled to
/// `t = 1`) and rays those with `t = 0`. The incremental step keeps, for each
/// generator, the bitset of constraint rows it satisfies with equality, and
/// only combines pairs that pass the standard adjacency test (rank prefilter
/// on the shared zero count, then the check that no third generator's
/// zero-set contains the pair's intersection).
pub fn enumerate_with(
    h: &HPolyhedron,
    opts: &EnumerateOptions,
) -> Result<VRepresentation, PolytopeError> {
    if !opts.force && (h.dim() > opts.dim_guard || h.row_count() > opts.row_guard) {
        return Err(PolytopeError::TooLarge {
            dim: h.dim(),
            rows: h.row_count(),
            dim_guard: opts.dim_guard,
            row_guard: opts.row_guard,
        });
    }
    let d = h.dim();
    let width = d + 1;

    // Homogenized integer rows: t-row first, then [b, -a] per inequality.
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(h.row_count() + 1);
    let mut t_row = vec![BigInt::zero(); width];
    t_row[0] = BigInt::one();
    m.push(t_row);
    for row in h.rows() {
        let mut v: Vec<Rational> = Vec::with_capacity(width);
        v.push(row.rhs.clone());
        v.extend(row.coeffs.iter().map(|c| -c));
        m.push(to_primitive_integers(&v));
    }
    let row_total = m.len();

    let basis = independent_rows(&m, width);
    if basis.len() < width {
        return Err(PolytopeError::NonPointed);
    }
    let basis_mat: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&i| {
            m[i].iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let inv = invert(&basis_mat).expect("basis rows are independent");

    // Column j of the inverse generates the j-th extreme ray of the basis
    // cone; it vanishes on every basis row except basis[j].
    let mut gens: Vec<Generator> = (0..width)
        .map(|j| {
            let col: Vec<Rational> = (0..width).map(|i| inv[i][j].clone()).collect();
            let vec = to_primitive_integers(&col);
            let mut zeros = Bits::new(row_total);
            for (pos, &row_idx) in basis.iter().enumerate() {
                if pos != j {
                    zeros.set(row_idx);
                }
            }
            Generator { vec, zeros }
        })
        .collect();

    let in_basis = |k: usize| basis.contains(&k);
    for k in 0..row_total {
        if in_basis(k) {
            continue;
        }
        let signs: Vec<BigInt> = gens.iter().map(|g| dot(&m[k], &g.vec)).collect();
        if signs.iter().all(|s| !s.is_negative()) {
            for (g, s) in gens.iter_mut().zip(&signs) {
                if s.is_zero() {
                    g.zeros.set(k);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..gens.len())
            .filter(|&i| signs[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..gens.len())
            .filter(|&i| signs[i].is_negative())
            .collect();

        let mut fresh: Vec<Generator> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let shared = gens[p].zeros.and(&gens[n].zeros);
                if shared.count() + 2 < width {
                    continue;
                }
                let blocked = gens
                    .iter()
                    .enumerate()
                    .any(|(i, g)| i != p && i != n && g.zeros.contains_all(&shared));
                if blocked {
                    continue;
                }
                let sp = &signs[p];
                let sn = &signs[n];
                let mut vec: Vec<BigInt> = gens[n]
                    .vec
                    .iter()
                    .zip(&gens[p].vec)
                    .map(|(nv, pv)| sp * nv - sn * pv)
                    .collect();
                make_primitive(&mut vec);
                let mut zeros = shared;
                zeros.set(k);
                fresh.push(Generator { vec, zeros });
            }
        }
        let mut kept: Vec<Generator> = Vec::new();
        for (i, g) in gens.into_iter().enumerate() {
            if signs[i].is_positive() {
                kept.push(g);
            } else if signs[i].is_zero() {
                let mut g = g;
                g.zeros.set(k);
                kept.push(g);
            }
        }
        kept.extend(fresh);
        gens = kept;
    }

    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    let mut rays: Vec<Vec<Rational>> = Vec::new();
    for g in &gens {
        let t = &g.vec[0];
        if t.is_positive() {
            let tr = Rational::from_integer(t.clone());
            vertices.push(
                g.vec[1..]
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()) / &tr)
                    .collect(),
            );
        } else {
            rays.push(
                g.vec[1..]
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect(),
            );
        }
    }
    if vertices.is_empty() {
        return Err(PolytopeError::EmptyPolyhedron);
    }
    VRepresentation::new(d, vertices, rays)
}

/// Keep exactly the vertices not componentwise dominated by another distinct
/// vertex; rays pass through unchanged.
pub fn dominant(v: &VRepresentation) -> VRepresentation {
    let dominated = |a: &[Rational], b: &[Rational]| -> bool {
        // b dominates a
        a != b && a.iter().zip(b).all(|(x, y)| x <= y)
    };
    let vertices: Vec<Vec<Rational>> = v
        .vertices()
        .iter()
        .filter(|a| !v.vertices().iter().any(|b| dominated(a, b)))
        .cloned()
        .collect();
    VRepresentation::new(v.dim(), vertices, v.rays().to_vec())
        .expect("filtered copies keep their dimension")
}

/// Equality of the point sets described by two halfspace systems, decided by
/// enumerating both and checking each side's vertices and rays against the
/// other side's inequalities.
pub fn polyhedra_equal(a: &HPolyhedron, b: &HPolyhedron) -> Result<bool, PolytopeError> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let va = enumerate(a)?;
    let vb = enumerate(b)?;
    let va_in_b = va.vertices().iter().all(|v| b.contains_point(v))
        && va.rays().iter().all(|r| b.admits_ray(r));
    let vb_in_a = vb.vertices().iter().all(|v| a.contains_point(v))
        && vb.rays().iter().all(|r| a.admits_ray(r));
    Ok(va_in_b && vb_in_a)
}

/// How far below zero the coordinates of a vertex/ray description reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundReport {
    /// Smallest coordinate over all vertices; `None` when there are none.
    pub vertex_min: Option<Rational>,
    /// Vertices attaining that minimum.
    pub attaining_vertices: Vec<Vec<Rational>>,
    /// True iff some ray has a negative coordinate, so points of the set
    /// reach arbitrarily far below any bound in that coordinate.
    pub ray_coordinate_negative: bool,
}

impl LowerBoundReport {
    /// True iff every point of the described set is componentwise >= 0.
    pub fn is_nonnegative(&self) -> bool {
        !self.ray_coordinate_negative
            && self
                .vertex_min
                .as_ref()
                .map_or(true, |m| !m.is_negative())
    }
}

pub fn lower_coordinate_bound(v: &VRepresentation) -> LowerBoundReport {
    let vertex_min = v
        .vertices()
        .iter()
        .flat_map(|w| w.iter())
        .min()
        .cloned();
    let attaining_vertices = match &vertex_min {
        None => Vec::new(),
        Some(m) => v
            .vertices()
            .iter()
            .filter(|w| w.iter().any(|c| c == m))
            .cloned()
            .collect(),
    };
    LowerBoundReport {
        vertex_min,
        attaining_vertices,
        ray_coordinate_negative: v
            .rays()
            .iter()
            .any(|r| r.iter().any(|c| c.is_negative())),
    }
}
