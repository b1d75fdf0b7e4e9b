//! Sensor configurations: atom families over labeled regions.
//!
//! An atom is the set of region indices whose common intersection, minus all
//! other regions, is non-empty. The configuration never stores point sets;
//! the generators in this module derive the atom combinatorics of concrete
//! geometries (inflated square lattices, inflated hexagon patches, glued
//! tetrahedra) in closed form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_traits::Signed;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("atom must be non-empty")]
    EmptyAtom,
    #[error("region {region} out of range 1..={region_count}")]
    IndexOutOfRange { region: usize, region_count: usize },
    #[error("a configuration needs at least one region")]
    NoRegions,
    #[error("region {0} is not covered by any atom")]
    UncoveredRegion(usize),
    #[error("cell list is empty")]
    EmptyInput,
    #[error("tetrahedron {index} has fewer than 4 distinct vertex labels")]
    InvalidGluing { index: usize },
    #[error("cycle length {0} is too short; need at least 3")]
    CycleTooShort(usize),
    #[error("measurement entry {index} is negative")]
    NegativeMeasurement { index: usize },
    #[error("measurement vector has length {got}, expected {expected}")]
    MeasurementLength { got: usize, expected: usize },
}

/// The set of regions containing one atom, kept strictly increasing.
///
/// The canonical atom order, used for every matrix column and emitted list,
/// is by size first, then lexicographic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    regions: Vec<usize>,
}

impl Atom {
    pub fn new(regions: impl IntoIterator<Item = usize>) -> Result<Self, ConfigError> {
        let mut v: Vec<usize> = regions.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(ConfigError::EmptyAtom);
        }
        Ok(Atom { regions: v })
    }

    pub fn regions(&self) -> &[usize] {
        &self.regions
    }

    pub fn size(&self) -> usize {
        self.regions.len()
    }

    pub fn contains(&self, r: usize) -> bool {
        self.regions.binary_search(&r).is_ok()
    }

    pub fn to_simplex(&self) -> Simplex {
        Simplex::new(self.regions.iter().copied())
    }

    pub fn from_simplex(s: &Simplex) -> Result<Self, ConfigError> {
        Atom::new(s.vertices().iter().copied())
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.regions
            .len()
            .cmp(&other.regions.len())
            .then_with(|| self.regions.cmp(&other.regions))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.regions.iter().join(","))
    }
}

/// Planar placement metadata carried by the lattice generators so extreme
/// points can be drawn. Region `i` corresponds to `cells[i-1]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Layout {
    /// Unit squares at integer cells `(x, y)`.
    SquareGrid { cells: Vec<(i64, i64)> },
    /// Unit hexagons at axial coordinates `(q, r)`.
    HexAxial { cells: Vec<(i64, i64)> },
}

/// A family of atoms over `region_count` labeled regions.
///
/// Construction checks that atoms are in range and that every region appears
/// in at least one atom, so coverage holds for every value of this type.
/// Equality compares the region count and the atom family; the provenance
/// tag and layout are presentation metadata and do not participate.
#[derive(Clone)]
pub struct SensorConfiguration {
    region_count: usize,
    atoms: BTreeSet<Atom>,
    tag: Option<String>,
    layout: Option<Layout>,
}

impl PartialEq for SensorConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.region_count == other.region_count && self.atoms == other.atoms
    }
}

impl Eq for SensorConfiguration {}

impl fmt::Debug for SensorConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Config(R={}; {})",
            self.region_count,
            self.atoms.iter().map(|a| format!("{a:?}")).join(" ")
        )
    }
}

impl SensorConfiguration {
    pub fn new(
        region_count: usize,
        atoms: impl IntoIterator<Item = Atom>,
    ) -> Result<Self, ConfigError> {
        if region_count == 0 {
            return Err(ConfigError::NoRegions);
        }
        let atoms: BTreeSet<Atom> = atoms.into_iter().collect();
        let mut covered = vec![false; region_count + 1];
        for a in &atoms {
            for &r in a.regions() {
                if r < 1 || r > region_count {
                    return Err(ConfigError::IndexOutOfRange {
                        region: r,
                        region_count,
                    });
                }
                covered[r] = true;
            }
        }
        for r in 1..=region_count {
            if !covered[r] {
                return Err(ConfigError::UncoveredRegion(r));
            }
        }
        Ok(SensorConfiguration {
            region_count,
            atoms,
            tag: None,
            layout: None,
        })
    }

    pub fn with_tag(mut self, tag: &str) -> Self {
        self.tag = Some(tag.to_string());
        self
    }

    pub fn with_layout(mut self, layout: Layout) -> Self {
        self.layout = Some(layout);
        self
    }

    pub fn region_count(&self) -> usize {
        self.region_count
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Atoms in canonical order (size, then lexicographic).
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter()
    }

    pub fn has_atom(&self, a: &Atom) -> bool {
        self.atoms.contains(a)
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn layout(&self) -> Option<&Layout> {
        self.layout.as_ref()
    }

    /// The nerve: the complex whose faces are the subsets of atoms.
    pub fn nerve(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(
            self.region_count,
            self.atoms.iter().map(Atom::to_simplex),
        )
        .expect("atoms are validated on construction")
    }

    /// True iff every non-empty simplex of the nerve appears verbatim as an
    /// atom: the atom/simplex correspondence is a bijection.
    pub fn is_generic(&self) -> bool {
        let faces = self.nerve().all_faces();
        if faces.len() != self.atoms.len() {
            return false;
        }
        faces
            .iter()
            .all(|f| self.atoms.contains(&Atom::from_simplex(f).expect("faces are non-empty")))
    }

    /// True iff every singleton atom is present: no region lies entirely in
    /// the union of the others.
    pub fn is_irredundant(&self) -> bool {
        (1..=self.region_count).all(|r| {
            self.atoms
                .contains(&Atom::new([r]).expect("singleton is non-empty"))
        })
    }

    /// Coverage is established by the constructor; this recomputes it for
    /// reporting.
    pub fn is_covering(&self) -> bool {
        let covered: BTreeSet<usize> = self
            .atoms
            .iter()
            .flat_map(|a| a.regions().iter().copied())
            .collect();
        (1..=self.region_count).all(|r| covered.contains(&r))
    }

    /// 0/1 incidence: rows indexed by regions `1..=R`, columns by atoms in
    /// canonical order; entry `(r, a)` is 1 iff `r` is in `a`.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.atoms.len()]; self.region_count];
        for (j, a) in self.atoms.iter().enumerate() {
            for &r in a.regions() {
                m[r - 1][j] = 1;
            }
        }
        m
    }
}

/// Non-negative per-region measurements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MeasurementVector {
    values: Vec<Rational>,
}

impl MeasurementVector {
    pub fn new(values: Vec<Rational>) -> Result<Self, ConfigError> {
        for (i, v) in values.iter().enumerate() {
            if v.is_negative() {
                return Err(ConfigError::NegativeMeasurement { index: i + 1 });
            }
        }
        Ok(MeasurementVector { values })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self, ConfigError> {
        MeasurementVector::new(values.iter().map(|&v| crate::rat(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(Rational::is_integer)
    }

    pub fn total(&self) -> Rational {
        self.values.iter().sum()
    }

    /// Integer view, available when all entries are integral and fit `i64`.
    pub fn as_integers(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(|v| {
                if v.is_integer() {
                    i64::try_from(v.numer().clone()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

/// The generic configuration whose atoms are exactly the non-empty faces of
/// the complex.
pub fn gen_generic_from_complex(c: &SimplicialComplex) -> SensorConfiguration {
    assert!(c.vertex_count() >= 1, "complex must have at least one vertex");
    SensorConfiguration::new(
        c.vertex_count(),
        c.all_faces()
            .iter()
            .map(|f| Atom::from_simplex(f).expect("faces are non-empty")),
    )
    .expect("faces of a complex cover every vertex")
    .with_tag("abstract")
}

/// Atoms of slightly inflated unit squares at the given lattice cells, under
/// the sup-norm. Derived by corner-local interval analysis:
/// - every cell is an atom (irredundancy);
/// - every horizontally or vertically adjacent pair is an atom (edge strip);
/// - a lattice corner surrounded by k of the given cells contributes the
///   atom of all k cells when k is 3 or 4, and the diagonal-pair atom when
///   exactly the two diagonal cells are present; any cell adjacent to both
///   members of a diagonal pair covers the whole corner neighborhood, which
///   is why diagonal pairs and corner triples stop being atoms once the
///   corner fills up.
pub fn gen_square_lattice(cells: &[(i64, i64)]) -> Result<SensorConfiguration, ConfigError> {
    if cells.is_empty() {
        return Err(ConfigError::EmptyInput);
    }
    let mut cs: Vec<(i64, i64)> = cells.to_vec();
    cs.sort_unstable();
    cs.dedup();
    let index: BTreeMap<(i64, i64), usize> = cs
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i + 1))
        .collect();
    let present = |c: (i64, i64)| index.contains_key(&c);

    let mut atoms: BTreeSet<Atom> = BTreeSet::new();
    for (&cell, &i) in &index {
        atoms.insert(Atom::new([i])?);
        for d in [(1, 0), (0, 1)] {
            let nb = (cell.0 + d.0, cell.1 + d.1);
            if let Some(&j) = index.get(&nb) {
                atoms.insert(Atom::new([i, j])?);
            }
        }
    }

    let mut corners: BTreeSet<(i64, i64)> = BTreeSet::new();
    for &(x, y) in &cs {
        for c in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
            corners.insert(c);
        }
    }
    for (u, v) in corners {
        let around = [
            (u - 1, v - 1),
            (u, v - 1),
            (u - 1, v),
            (u, v),
        ];
        let here: Vec<(i64, i64)> = around.iter().copied().filter(|&c| present(c)).collect();
        match here.len() {
            3 | 4 => {
                atoms.insert(Atom::new(here.iter().map(|c| index[c]))?);
            }
            2 => {
                let (a, b) = (here[0], here[1]);
                let diagonal = a.0 != b.0 && a.1 != b.1;
                if diagonal {
                    atoms.insert(Atom::new([index[&a], index[&b]])?);
                }
            }
            _ => {}
        }
    }

    Ok(SensorConfiguration::new(cs.len(), atoms)?
        .with_tag("square-lattice")
        .with_layout(Layout::SquareGrid { cells: cs }))
}

/// Axial-coordinate neighbor offsets on the honeycomb lattice.
pub const HEX_NEIGHBOR_OFFSETS: [(i64, i64); 6] =
    [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

pub fn hexes_adjacent(a: (i64, i64), b: (i64, i64)) -> bool {
    let d = (b.0 - a.0, b.1 - a.1);
    HEX_NEIGHBOR_OFFSETS.contains(&d)
}

/// Atoms of slightly inflated unit hexagons at the given axial cells:
/// singletons, adjacent pairs, and the triples of mutually adjacent cells
/// around a shared corner. Intersections are at most 3-fold, so the result
/// is generic and its nerve is a flag complex of dimension at most 2.
pub fn gen_hex_patch(cells: &[(i64, i64)]) -> Result<SensorConfiguration, ConfigError> {
    if cells.is_empty() {
        return Err(ConfigError::EmptyInput);
    }
    let mut cs: Vec<(i64, i64)> = cells.to_vec();
    cs.sort_unstable();
    cs.dedup();

    let mut atoms: BTreeSet<Atom> = BTreeSet::new();
    for i in 0..cs.len() {
        atoms.insert(Atom::new([i + 1])?);
        for j in (i + 1)..cs.len() {
            if !hexes_adjacent(cs[i], cs[j]) {
                continue;
            }
            atoms.insert(Atom::new([i + 1, j + 1])?);
            for k in (j + 1)..cs.len() {
                if hexes_adjacent(cs[i], cs[k]) && hexes_adjacent(cs[j], cs[k]) {
                    atoms.insert(Atom::new([i + 1, j + 1, k + 1])?);
                }
            }
        }
    }

    Ok(SensorConfiguration::new(cs.len(), atoms)?
        .with_tag("hex-patch")
        .with_layout(Layout::HexAxial { cells: cs }))
}

/// A family of solid tetrahedra glued by shared vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TetraGluing {
    tetrahedra: Vec<[String; 4]>,
}

impl TetraGluing {
    pub fn new(tetrahedra: Vec<[String; 4]>) -> Self {
        TetraGluing { tetrahedra }
    }

    pub fn tetrahedra(&self) -> &[[String; 4]] {
        &self.tetrahedra
    }

    /// The five standard gluings: 1 two tetrahedra sharing a vertex,
    /// 2 three in a string glued at vertices, 3 three in a cycle glued at
    /// vertices, 4 three in a string glued along edges, 5 three in a cycle
    /// glued along edges.
    pub fn standard_case(case: usize) -> Option<Self> {
        let t = |s: [&str; 4]| -> [String; 4] { s.map(str::to_string) };
        let tetras = match case {
            1 => vec![t(["a", "b", "c", "d"]), t(["a", "s", "t", "u"])],
            2 => vec![
                t(["a", "b", "c", "d"]),
                t(["a", "s", "t", "u"]),
                t(["u", "x", "y", "z"]),
            ],
            3 => vec![
                t(["a", "b", "c", "d"]),
                t(["a", "s", "t", "u"]),
                t(["u", "b", "y", "z"]),
            ],
            4 => vec![
                t(["a", "b", "c", "d"]),
                t(["a", "b", "t", "u"]),
                t(["t", "u", "y", "z"]),
            ],
            5 => vec![
                t(["a", "b", "c", "d"]),
                t(["a", "b", "t", "u"]),
                t(["t", "u", "c", "d"]),
            ],
            _ => return None,
        };
        Some(TetraGluing::new(tetras))
    }

    /// Distinct labels in canonical (lexicographic) order; label `i` maps to
    /// region `i + 1` in the generated configuration.
    pub fn labels(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.tetrahedra.iter().flatten().collect();
        set.into_iter().cloned().collect()
    }

    pub fn region_of(&self, label: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == label).map(|i| i + 1)
    }
}

/// Generic configuration whose nerve is the union of the glued solid
/// tetrahedra.
pub fn gen_glued_tetrahedra(gluing: &TetraGluing) -> Result<SensorConfiguration, ConfigError> {
    if gluing.tetrahedra().is_empty() {
        return Err(ConfigError::EmptyInput);
    }
    for (i, t) in gluing.tetrahedra().iter().enumerate() {
        let distinct: BTreeSet<&String> = t.iter().collect();
        if distinct.len() < 4 {
            return Err(ConfigError::InvalidGluing { index: i + 1 });
        }
    }
    let labels = gluing.labels();
    let region: BTreeMap<&String, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l, i + 1))
        .collect();
    let faces = gluing
        .tetrahedra()
        .iter()
        .map(|t| Simplex::new(t.iter().map(|l| region[l])));
    let complex = SimplicialComplex::from_simplices(labels.len(), faces)
        .expect("regions are indexed from the label list");
    Ok(gen_generic_from_complex(&complex).with_tag("glued-tetrahedra"))
}

/// Generic configuration of a cycle of regions: atoms are the vertices and
/// consecutive pairs of the cycle graph.
pub fn gen_cycle(r: usize) -> Result<SensorConfiguration, ConfigError> {
    if r < 3 {
        return Err(ConfigError::CycleTooShort(r));
    }
    let mut faces: Vec<Simplex> = (1..r).map(|i| Simplex::new([i, i + 1])).collect();
    faces.push(Simplex::new([r, 1]));
    let complex = SimplicialComplex::from_simplices(r, faces).expect("cycle edges are in range");
    Ok(gen_generic_from_complex(&complex).with_tag("cycle"))
}

#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    regions: usize,
    atoms: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    tag: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    layout: Option<Layout>,
}

impl Serialize for SensorConfiguration {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ConfigRepr {
            regions: self.region_count,
            atoms: self.atoms.iter().map(|a| a.regions().to_vec()).collect(),
            tag: self.tag.clone(),
            layout: self.layout.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SensorConfiguration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ConfigRepr::deserialize(deserializer)?;
        let atoms: Result<Vec<Atom>, ConfigError> =
            repr.atoms.into_iter().map(Atom::new).collect();
        let mut cfg = SensorConfiguration::new(repr.regions, atoms.map_err(D::Error::custom)?)
            .map_err(D::Error::custom)?;
        if let Some(tag) = repr.tag {
            cfg = cfg.with_tag(&tag);
        }
        if let Some(layout) = repr.layout {
            cfg = cfg.with_layout(layout);
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;

    fn atom(v: &[usize]) -> Atom {
        Atom::new(v.iter().copied()).unwrap()
    }

    fn config(r: usize, atoms: &[&[usize]]) -> SensorConfiguration {
        SensorConfiguration::new(r, atoms.iter().map(|a| atom(a))).unwrap()
    }

    fn fig_1a() -> SensorConfiguration {
        config(3, &[&[1], &[2], &[3], &[1, 3], &[2, 3], &[1, 2, 3]])
    }

    #[test]
    fn atom_canonical_order_is_size_then_lex() {
        let mut set = BTreeSet::new();
        for a in [&[1, 2, 3][..], &[2, 3], &[1, 3], &[3], &[2], &[1]] {
            set.insert(atom(a));
        }
        let order: Vec<Vec<usize>> = set.iter().map(|a| a.regions().to_vec()).collect();
        assert_eq!(
            order,
            vec![
                vec![1],
                vec![2],
                vec![3],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
    }

    #[test]
    fn construction_validates() {
        assert_eq!(Atom::new([]).unwrap_err(), ConfigError::EmptyAtom);
        assert_eq!(
            SensorConfiguration::new(2, [atom(&[3])]).unwrap_err(),
            ConfigError::IndexOutOfRange {
                region: 3,
                region_count: 2
            }
        );
        assert_eq!(
            SensorConfiguration::new(3, [atom(&[1, 2])]).unwrap_err(),
            ConfigError::UncoveredRegion(3)
        );
        assert!(SensorConfiguration::new(0, []).is_err());
    }

    #[test]
    fn nerve_examples() {
        let full3 = SimplicialComplex::full_simplex(3);
        assert_eq!(fig_1a().nerve(), full3);

        let two = config(2, &[&[1], &[2], &[1, 2]]);
        assert_eq!(two.nerve(), SimplicialComplex::full_simplex(2));

        let fig3 = config(3, &[&[1], &[2], &[3], &[1, 2, 3]]);
        assert_eq!(fig3.nerve(), full3);
    }

    #[test]
    fn genericity_examples() {
        assert!(!fig_1a().is_generic());
        let all3 = gen_generic_from_complex(&SimplicialComplex::full_simplex(3));
        assert!(all3.is_generic());
        assert_eq!(all3.atom_count(), 7);
        let squares = gen_square_lattice(&[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert!(!squares.is_generic());
    }

    #[test]
    fn irredundancy_examples() {
        assert!(config(3, &[&[1], &[2], &[3], &[1, 2, 3]]).is_irredundant());
        let missing = config(3, &[&[1, 2], &[1], &[2, 3], &[3]]);
        assert!(!missing.is_irredundant());
        assert!(fig_1a().is_irredundant());
    }

    #[test]
    fn incidence_matrix_matches_canonical_layout() {
        let m = fig_1a().incidence_matrix();
        assert_eq!(
            m,
            vec![
                vec![1, 0, 0, 1, 0, 1],
                vec![0, 1, 0, 0, 1, 1],
                vec![0, 0, 1, 1, 1, 1],
            ]
        );

        let single = config(1, &[&[1]]);
        assert_eq!(single.incidence_matrix(), vec![vec![1]]);

        let triangle_graph = config(3, &[&[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3]]);
        let m = triangle_graph.incidence_matrix();
        for row in &m {
            assert_eq!(row.iter().map(|&x| x as usize).sum::<usize>(), 3);
        }
    }

    #[test]
    fn generic_generator_counts() {
        let tetra = SimplicialComplex::from_simplices(
            4,
            [
                Simplex::new([1, 2, 3]),
                Simplex::new([1, 2, 4]),
                Simplex::new([1, 3, 4]),
                Simplex::new([2, 3, 4]),
            ],
        )
        .unwrap();
        let c = gen_generic_from_complex(&tetra);
        assert_eq!(c.atom_count(), 14);
        assert!(c.is_generic());
        assert!(c.is_irredundant());

        let c5 = gen_cycle(5).unwrap();
        assert_eq!(c5.atom_count(), 10);
        assert!(c5.is_generic());
        assert!(gen_cycle(2).is_err());
    }

    #[test]
    fn round_trip_generic_iff() {
        let generic = gen_generic_from_complex(&SimplicialComplex::full_simplex(3));
        assert_eq!(gen_generic_from_complex(&generic.nerve()), generic);

        let degenerate = fig_1a();
        assert!(!degenerate.is_generic());
        assert_ne!(gen_generic_from_complex(&degenerate.nerve()), degenerate);
    }

    #[test]
    fn square_lattice_block() {
        let c = gen_square_lattice(&[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        // Region order is the lexicographic cell order:
        // 1=(0,0) 2=(0,1) 3=(1,0) 4=(1,1).
        assert_eq!(c.region_count(), 4);
        assert_eq!(c.atom_count(), 9);
        let expected: BTreeSet<Atom> = [
            atom(&[1]),
            atom(&[2]),
            atom(&[3]),
            atom(&[4]),
            atom(&[1, 2]),
            atom(&[1, 3]),
            atom(&[2, 4]),
            atom(&[3, 4]),
            atom(&[1, 2, 3, 4]),
        ]
        .into_iter()
        .collect();
        assert_eq!(c.atoms().cloned().collect::<BTreeSet<_>>(), expected);
        // The nerve has the diagonal pairs and the four triples as faces.
        let nerve = c.nerve();
        assert!(nerve.contains(&Simplex::new([1, 4])));
        assert!(nerve.contains(&Simplex::new([2, 3])));
        assert!(nerve.contains(&Simplex::new([1, 2, 3])));
        assert!(!c.has_atom(&atom(&[1, 4])));
        assert!(!c.has_atom(&atom(&[1, 2, 3])));
        assert!(c.is_irredundant());
    }

    #[test]
    fn square_lattice_small_cases() {
        let single = gen_square_lattice(&[(0, 0)]).unwrap();
        assert_eq!(single.atom_count(), 1);

        let lshape = gen_square_lattice(&[(0, 0), (0, 1), (1, 0)]).unwrap();
        // 1=(0,0) 2=(0,1) 3=(1,0); the corner triple survives because the
        // fourth square is absent.
        assert!(lshape.has_atom(&atom(&[1, 2, 3])));
        assert_eq!(lshape.atom_count(), 6);

        let diag = gen_square_lattice(&[(0, 0), (1, 1)]).unwrap();
        assert!(diag.has_atom(&atom(&[1, 2])));
        assert_eq!(diag.atom_count(), 3);

        assert_eq!(
            gen_square_lattice(&[]).unwrap_err(),
            ConfigError::EmptyInput
        );
    }

    /// Exact interval-arithmetic oracle for the square generator. Inflates
    /// each unit square by eps = 1/10 under the sup-norm and samples the
    /// midpoints of the coordinate arrangement; every atom of inflated
    /// squares has full-dimensional interior (no two boundary lines
    /// coincide), so midpoint sampling finds exactly the atoms.
    fn square_atoms_oracle(cells: &[(i64, i64)]) -> BTreeSet<Vec<usize>> {
        use crate::{rat, ratio};
        let eps = ratio(1, 10);
        let mut cs: Vec<(i64, i64)> = cells.to_vec();
        cs.sort_unstable();
        cs.dedup();

        let mut xs: Vec<Rational> = Vec::new();
        let mut ys: Vec<Rational> = Vec::new();
        for &(x, y) in &cs {
            xs.push(rat(x) - &eps);
            xs.push(rat(x + 1) + &eps);
            ys.push(rat(y) - &eps);
            ys.push(rat(y + 1) + &eps);
        }
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        let mids = |v: &[Rational]| -> Vec<Rational> {
            v.windows(2)
                .map(|w| (&w[0] + &w[1]) / rat(2))
                .collect()
        };

        let mut found = BTreeSet::new();
        for px in mids(&xs) {
            for py in mids(&ys) {
                let mut t = Vec::new();
                for (i, &(x, y)) in cs.iter().enumerate() {
                    let inside = rat(x) - &eps <= px
                        && px <= rat(x + 1) + &eps
                        && rat(y) - &eps <= py
                        && py <= rat(y + 1) + &eps;
                    if inside {
                        t.push(i + 1);
                    }
                }
                if !t.is_empty() {
                    found.insert(t);
                }
            }
        }
        found
    }

    #[test]
    fn square_generator_matches_interval_oracle() {
        let cases: Vec<Vec<(i64, i64)>> = vec![
            vec![(0, 0)],
            vec![(0, 0), (1, 0)],
            vec![(0, 0), (1, 1)],
            vec![(0, 0), (0, 1), (1, 0)],
            vec![(0, 0), (0, 1), (1, 0), (1, 1)],
            vec![(0, 0), (0, 1), (0, 2), (1, 1)],
            vec![(0, 0), (1, 1), (2, 0), (0, 2)],
            vec![(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)],
        ];
        for cells in &cases {
            let c = gen_square_lattice(cells).unwrap();
            let generated: BTreeSet<Vec<usize>> =
                c.atoms().map(|a| a.regions().to_vec()).collect();
            assert_eq!(
                generated,
                square_atoms_oracle(cells),
                "cells {cells:?}"
            );
        }
    }

    #[test]
    fn hex_patch_small_cases() {
        let two = gen_hex_patch(&[(0, 0), (1, 0)]).unwrap();
        assert_eq!(two.atom_count(), 3);

        let three = gen_hex_patch(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        assert_eq!(three.atom_count(), 7);
        assert!(three.is_generic());

        assert_eq!(gen_hex_patch(&[]).unwrap_err(), ConfigError::EmptyInput);
    }

    #[test]
    fn hex_patch_nerve_is_low_dimensional_flag() {
        let flower: Vec<(i64, i64)> = std::iter::once((0, 0))
            .chain(HEX_NEIGHBOR_OFFSETS)
            .collect();
        let c = gen_hex_patch(&flower).unwrap();
        assert_eq!(c.region_count(), 7);
        // 7 cells, 12 adjacencies, 6 corner triples.
        assert_eq!(c.atom_count(), 25);
        assert!(c.is_generic());
        assert!(c.is_irredundant());
        let nerve = c.nerve();
        assert!(nerve.dim() <= 2);
        assert!(nerve.is_flag());
    }

    /// Exact fixed-point oracle for the hexagon generator. A pointy-top unit
    /// hexagon centered at axial (q, r) is, in the scaled coordinates
    /// x' = x / (sqrt3/2), y' = y / (1/2), the set
    /// |x' - cx| <= 1, |x' + y' - (cx + cy)| <= 2, |x' - y' - (cx - cy)| <= 2
    /// with cx = 2q + r, cy = 3r. Inflating by 1/10 scales the bounds to
    /// 44/40 and 88/40; sampling a grid of pitch 1/40 (integers after
    /// scaling everything by 40) is far below the 1/10 feature width.
    fn hex_atoms_oracle(cells: &[(i64, i64)]) -> BTreeSet<Vec<usize>> {
        let mut cs: Vec<(i64, i64)> = cells.to_vec();
        cs.sort_unstable();
        cs.dedup();
        let centers: Vec<(i64, i64)> = cs.iter().map(|&(q, r)| (2 * q + r, 3 * r)).collect();
        let min_x = centers.iter().map(|c| c.0).min().unwrap() * 40 - 80;
        let max_x = centers.iter().map(|c| c.0).max().unwrap() * 40 + 80;
        let min_y = centers.iter().map(|c| c.1).min().unwrap() * 40 - 80;
        let max_y = centers.iter().map(|c| c.1).max().unwrap() * 40 + 80;

        let mut found = BTreeSet::new();
        for gx in min_x..=max_x {
            for gy in min_y..=max_y {
                let mut t = Vec::new();
                for (i, &(cx, cy)) in centers.iter().enumerate() {
                    let dx = gx - 40 * cx;
                    let dy = gy - 40 * cy;
                    if dx.abs() <= 44 && (dx + dy).abs() <= 88 && (dx - dy).abs() <= 88 {
                        t.push(i + 1);
                    }
                }
                if !t.is_empty() {
                    found.insert(t);
                }
            }
        }
        found
    }

    #[test]
    fn hex_generator_matches_geometry_oracle() {
        let flower: Vec<(i64, i64)> = std::iter::once((0, 0))
            .chain(HEX_NEIGHBOR_OFFSETS)
            .collect();
        let cases: Vec<Vec<(i64, i64)>> = vec![
            vec![(0, 0)],
            vec![(0, 0), (1, 0)],
            vec![(0, 0), (1, 0), (0, 1)],
            vec![(0, 0), (1, 0), (0, 1), (1, -1)],
            vec![(0, 0), (2, 0), (0, 2)],
            flower,
        ];
        for cells in &cases {
            let c = gen_hex_patch(cells).unwrap();
            let generated: BTreeSet<Vec<usize>> =
                c.atoms().map(|a| a.regions().to_vec()).collect();
            assert_eq!(generated, hex_atoms_oracle(cells), "cells {cells:?}");
        }
    }

    #[test]
    fn glued_tetrahedra_cases() {
        let case1 = gen_glued_tetrahedra(&TetraGluing::standard_case(1).unwrap()).unwrap();
        assert_eq!(case1.region_count(), 7);
        assert_eq!(case1.atom_count(), 29);
        assert!(case1.is_generic());
        assert_eq!(case1.nerve().maximal_count(), 2);

        let case3 = gen_glued_tetrahedra(&TetraGluing::standard_case(3).unwrap()).unwrap();
        assert_eq!(case3.region_count(), 9);
        assert_eq!(case3.nerve().maximal_count(), 3);

        let case4 = gen_glued_tetrahedra(&TetraGluing::standard_case(4).unwrap()).unwrap();
        assert_eq!(case4.region_count(), 8);

        let bad = TetraGluing::new(vec![[
            "a".to_string(),
            "a".to_string(),
            "b".to_string(),
            "c".to_string(),
        ]]);
        assert_eq!(
            gen_glued_tetrahedra(&bad).unwrap_err(),
            ConfigError::InvalidGluing { index: 1 }
        );
    }

    #[test]
    fn generator_outputs_are_irredundant() {
        let configs = vec![
            gen_square_lattice(&[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap(),
            gen_hex_patch(&[(0, 0), (1, 0), (0, 1)]).unwrap(),
            gen_cycle(6).unwrap(),
            gen_glued_tetrahedra(&TetraGluing::standard_case(5).unwrap()).unwrap(),
        ];
        for c in &configs {
            assert!(c.is_irredundant(), "{:?}", c.tag());
            assert!(c.is_covering());
        }
    }

    #[test]
    fn measurement_vector_checks() {
        let m = MeasurementVector::from_integers(&[2, 5, 3]).unwrap();
        assert!(m.is_integral());
        assert_eq!(m.total(), crate::rat(10));
        assert_eq!(m.as_integers(), Some(vec![2, 5, 3]));

        let frac = MeasurementVector::new(vec![crate::ratio(1, 2)]).unwrap();
        assert!(!frac.is_integral());
        assert_eq!(frac.as_integers(), None);

        assert_eq!(
            MeasurementVector::new(vec![crate::rat(-1)]).unwrap_err(),
            ConfigError::NegativeMeasurement { index: 1 }
        );
    }

    #[test]
    fn config_json_round_trip() {
        let c = gen_square_lattice(&[(0, 0), (1, 0)]).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: SensorConfiguration = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.tag(), Some("square-lattice"));
        assert_eq!(back.layout(), c.layout());

        let plain = r#"{"regions":2,"atoms":[[1],[2],[1,2]]}"#;
        let cfg: SensorConfiguration = serde_json::from_str(plain).unwrap();
        assert_eq!(cfg.atom_count(), 3);
        assert!(serde_json::from_str::<SensorConfiguration>(
            r#"{"regions":2,"atoms":[[1]]}"#
        )
        .is_err());
    }
}
