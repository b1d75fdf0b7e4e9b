//! Exact linear programming over configurations: the minimum and maximum
//! fused totals compatible with a measurement vector, the dual evaluation
//! over extreme points, the exhaustive integer oracle, inclusion-exclusion,
//! and the skeleton/completion sandwich chain.
//!
//! The LP solver is a dense two-phase simplex over arbitrary-precision
//! rationals with Bland's rule, so it never cycles and every reported value
//! is exact. At the problem sizes here (tens of rows, a few hundred
//! columns), determinism is worth far more than speed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::config::{gen_generic_from_complex, MeasurementVector, SensorConfiguration};
use crate::polytope::{enumerate, fusion_polytope, PolytopeError, VRepresentation};
use crate::{rational_to_string, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("measurement vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("no assignment fits the measurements")]
    Infeasible {
        /// A separating vector y with `incidence^T y <= 0` and `n . y > 0`,
        /// when one exists (integer-only infeasibility has none).
        certificate: Option<Vec<Rational>>,
    },
    #[error("a recession direction has positive measurement value, so the dual is unbounded")]
    UnboundedDual { ray: Vec<Rational> },
    #[error("integer enumeration would visit about {estimate} assignments, over the cap {cap}")]
    TooLarge { estimate: u128, cap: u128 },
    #[error("operation requires a generic configuration")]
    NotGeneric,
    #[error("operation requires an integral measurement vector")]
    NotIntegral,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Per-atom non-negative values, in canonical atom order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AtomAssignment {
    values: Vec<Rational>,
}

impl AtomAssignment {
    pub fn new(values: Vec<Rational>) -> Self {
        assert!(
            values.iter().all(|v| !v.is_negative()),
            "assignments are non-negative"
        );
        AtomAssignment { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn total(&self) -> Rational {
        self.values.iter().sum()
    }
}

impl Serialize for AtomAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.values.iter().map(|v| rational_to_string(v)))
    }
}

enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

/// Two-phase tableau simplex for `min c.x : A x = b, x >= 0`, Bland's rule
/// throughout (entering column of lowest index with negative reduced cost,
/// leaving row breaking ratio ties by lowest basic index). Artificial
/// columns stay in the tableau after phase one, banned from entering, so
/// phase-one reduced costs give a Farkas certificate on infeasibility.
fn simplex_min(a_in: &[Vec<Rational>], b_in: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a_in.len();
    let nv = c.len();
    let cols = nv + m;
    let mut flipped = vec![false; m];

    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut lhs: Vec<Rational> = a_in[i].clone();
        let mut rhs = b_in[i].clone();
        if rhs.is_negative() {
            flipped[i] = true;
            for x in lhs.iter_mut() {
                *x = -&*x;
            }
            rhs = -rhs;
        }
        let mut row = lhs;
        for j in 0..m {
            row.push(if i == j {
                Rational::one()
            } else {
                Rational::zero()
            });
        }
        row.push(rhs);
        tab.push(row);
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    let pivot = |tab: &mut Vec<Vec<Rational>>,
                 cost: &mut Vec<Rational>,
                 basis: &mut Vec<usize>,
                 r: usize,
                 j: usize| {
        let p = tab[r][j].clone();
        for x in tab[r].iter_mut() {
            *x = &*x / &p;
        }
        for i in 0..tab.len() {
            if i != r && !tab[i][j].is_zero() {
                let f = tab[i][j].clone();
                for k in 0..=cols {
                    let d = &f * &tab[r][k];
                    tab[i][k] -= d;
                }
            }
        }
        if !cost[j].is_zero() {
            let f = cost[j].clone();
            for k in 0..=cols {
                let d = &f * &tab[r][k];
                cost[k] -= d;
            }
        }
        basis[r] = j;
    };

    let bland = |tab: &mut Vec<Vec<Rational>>,
                 cost: &mut Vec<Rational>,
                 basis: &mut Vec<usize>,
                 banned_from: usize|
     -> bool {
        loop {
            let enter = (0..banned_from).find(|&j| cost[j].is_negative());
            let Some(j) = enter else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..tab.len() {
                if tab[i][j].is_positive() {
                    let ratio = &tab[i][cols] / &tab[i][j];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            pivot(tab, cost, basis, r, j);
        }
    };

    // Phase one: minimize the sum of the artificial variables.
    let mut cost: Vec<Rational> = vec![Rational::zero(); cols + 1];
    for j in nv..cols {
        cost[j] = Rational::one();
    }
    for i in 0..m {
        for k in 0..=cols {
            let d = tab[i][k].clone();
            cost[k] -= d;
        }
    }
    let finished = bland(&mut tab, &mut cost, &mut basis, cols);
    debug_assert!(finished, "phase one is bounded below by zero");
    let phase1 = -cost[cols].clone();
    if phase1.is_positive() {
        // Reduced cost of artificial i is 1 - y_i; undo the row flips.
        let farkas: Vec<Rational> = (0..m)
            .map(|i| {
                let y = Rational::one() - &cost[nv + i];
                if flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        return LpOutcome::Infeasible { farkas };
    }

    // Pivot out any artificial still basic at level zero; a row with no
    // usable original column is redundant and dropped.
    let mut i = 0;
    while i < tab.len() {
        if basis[i] >= nv {
            if let Some(j) = (0..nv).find(|&j| !tab[i][j].is_zero()) {
                pivot(&mut tab, &mut cost, &mut basis, i, j);
                i += 1;
            } else {
                tab.remove(i);
                basis.remove(i);
            }
        } else {
            i += 1;
        }
    }

    // Phase two over the real objective; artificials may not re-enter.
    let mut cost: Vec<Rational> = vec![Rational::zero(); cols + 1];
    cost[..nv].clone_from_slice(c);
    for (i, &bj) in basis.iter().enumerate() {
        if !cost[bj].is_zero() {
            let f = cost[bj].clone();
            for k in 0..=cols {
                let d = &f * &tab[i][k];
                cost[k] -= d;
            }
        }
    }
    if !bland(&mut tab, &mut cost, &mut basis, nv) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); nv];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < nv {
            x[bj] = tab[i][cols].clone();
        }
    }
    LpOutcome::Optimal {
        value: -cost[cols].clone(),
        x,
    }
}

fn incidence_rational(c: &SensorConfiguration) -> Vec<Vec<Rational>> {
    c.incidence_matrix()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    if x == 1 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn check_length(c: &SensorConfiguration, n: &MeasurementVector) -> Result<(), BoundsError> {
    if n.len() != c.region_count() {
        return Err(BoundsError::LengthMismatch {
            expected: c.region_count(),
            got: n.len(),
        });
    }
    Ok(())
}

/// Minimum total `sum m_a` over non-negative assignments reproducing the
/// measurements exactly, with an optimal assignment.
pub fn primal_min(
    c: &SensorConfiguration,
    n: &MeasurementVector,
) -> Result<(Rational, AtomAssignment), BoundsError> {
    check_length(c, n)?;
    let a = incidence_rational(c);
    let cost = vec![Rational::one(); c.atom_count()];
    match simplex_min(&a, n.values(), &cost) {
        LpOutcome::Optimal { value, x } => Ok((value, AtomAssignment::new(x))),
        LpOutcome::Infeasible { farkas } => Err(BoundsError::Infeasible {
            certificate: Some(farkas),
        }),
        LpOutcome::Unbounded => unreachable!("totals are bounded below by zero"),
    }
}

/// Maximum total, solved as an LP so non-irredundant inputs still work; for
/// irredundant configurations it equals the plain sum of the measurements.
pub fn primal_max(c: &SensorConfiguration, n: &MeasurementVector) -> Result<Rational, BoundsError> {
    primal_max_assignment(c, n).map(|(v, _)| v)
}

pub fn primal_max_assignment(
    c: &SensorConfiguration,
    n: &MeasurementVector,
) -> Result<(Rational, AtomAssignment), BoundsError> {
    check_length(c, n)?;
    let a = incidence_rational(c);
    let cost = vec![-Rational::one(); c.atom_count()];
    match simplex_min(&a, n.values(), &cost) {
        LpOutcome::Optimal { value, x } => Ok((-value, AtomAssignment::new(x))),
        LpOutcome::Infeasible { farkas } => Err(BoundsError::Infeasible {
            certificate: Some(farkas),
        }),
        LpOutcome::Unbounded => {
            unreachable!("every atom meets a region, so totals are bounded by the measurements")
        }
    }
}

/// The same minimum read off the extreme points: `max{n.e : e vertex}`,
/// valid once every recession direction is certified non-improving.
pub fn dual_min(
    c: &SensorConfiguration,
    n: &MeasurementVector,
    v: &VRepresentation,
) -> Result<Rational, BoundsError> {
    check_length(c, n)?;
    let value = |p: &[Rational]| -> Rational {
        n.values().iter().zip(p).map(|(a, b)| a * b).sum()
    };
    for ray in v.rays() {
        if value(ray).is_positive() {
            return Err(BoundsError::UnboundedDual { ray: ray.clone() });
        }
    }
    v.vertices()
        .iter()
        .map(|p| value(p))
        .max()
        .ok_or(BoundsError::Infeasible { certificate: None })
}

/// Exact set of integer totals achievable by integral assignments, by
/// exhaustive search. This is the trusted reference the LP results are
/// judged against, so it stays brute force on purpose.
pub fn integer_range(
    c: &SensorConfiguration,
    n: &MeasurementVector,
    cap: u128,
) -> Result<BTreeSet<i64>, BoundsError> {
    check_length(c, n)?;
    let Some(targets) = n.as_integers() else {
        return Err(BoundsError::NotIntegral);
    };

    let atoms: Vec<Vec<usize>> = {
        let mut v: Vec<Vec<usize>> = c.atoms().map(|a| a.regions().to_vec()).collect();
        v.sort_by_key(|a| (a[0], a.len(), a.clone()));
        v
    };
    let mut estimate: u128 = 1;
    for a in &atoms {
        let lo = a.iter().map(|&r| targets[r - 1]).min().unwrap().max(0) as u128;
        estimate = estimate.saturating_mul(lo + 1);
    }
    if estimate > cap {
        return Err(BoundsError::TooLarge { estimate, cap });
    }

    // After the last atom whose smallest region is r, no later atom can
    // touch any region <= r, so those remainders must already be zero.
    let final_region_of: Vec<usize> = (0..atoms.len())
        .map(|i| {
            if i + 1 < atoms.len() {
                atoms[i + 1][0] - 1
            } else {
                c.region_count()
            }
        })
        .collect();

    let mut totals: BTreeSet<i64> = BTreeSet::new();
    let mut rem = targets.clone();
    fn dfs(
        atoms: &[Vec<usize>],
        final_region_of: &[usize],
        idx: usize,
        rem: &mut Vec<i64>,
        running: i64,
        totals: &mut BTreeSet<i64>,
    ) {
        if idx == atoms.len() {
            if rem.iter().all(|&x| x == 0) {
                totals.insert(running);
            }
            return;
        }
        let atom = &atoms[idx];
        let hi = atom.iter().map(|&r| rem[r - 1]).min().unwrap();
        for v in 0..=hi {
            for &r in atom {
                rem[r - 1] -= v;
            }
            let closing = (0..final_region_of[idx]).all(|r| rem[r] == 0);
            if closing {
                dfs(atoms, final_region_of, idx + 1, rem, running + v, totals);
            }
            for &r in atom {
                rem[r - 1] += v;
            }
        }
    }
    dfs(&atoms, &final_region_of, 0, &mut rem, 0, &mut totals);

    if totals.is_empty() {
        let certificate = match primal_min(c, n) {
            Err(BoundsError::Infeasible { certificate }) => certificate,
            _ => None,
        };
        return Err(BoundsError::Infeasible { certificate });
    }
    Ok(totals)
}

/// Alternating inclusion-exclusion sum over intersection counts keyed by
/// non-empty region subsets; missing subsets count as zero.
pub fn inclusion_exclusion(counts: &BTreeMap<BTreeSet<usize>, Rational>) -> Rational {
    let mut total = Rational::zero();
    for (subset, count) in counts {
        assert!(!subset.is_empty(), "keys are non-empty region subsets");
        if subset.len() % 2 == 1 {
            total += count;
        } else {
            total -= count;
        }
    }
    total
}

/// The five-term sandwich for a generic configuration: minima over the
/// completion at face size 1 (everything merged), the completion at face
/// size `k`, the nerve itself, the faces of size at most `k`, and the
/// vertices alone. The outer values are `max n` and `sum n`, and the chain
/// is non-decreasing left to right.
pub fn skeleton_chain(
    c: &SensorConfiguration,
    n: &MeasurementVector,
    k: usize,
) -> Result<[Rational; 5], BoundsError> {
    if !c.is_generic() {
        return Err(BoundsError::NotGeneric);
    }
    check_length(c, n)?;
    assert!(k >= 1, "face size must be at least 1");
    let nerve = c.nerve();
    let complexes = [
        nerve.completed_by_face_size(1),
        nerve.completed_by_face_size(k),
        nerve.clone(),
        nerve.skeleton(k as isize - 1),
        nerve.skeleton(0),
    ];
    let mut out: Vec<Rational> = Vec::with_capacity(5);
    for cx in &complexes {
        let cfg = gen_generic_from_complex(cx);
        out.push(primal_min(&cfg, n)?.0);
    }
    Ok(out.try_into().expect("five complexes produce five values"))
}

/// A closed-form minimum: the dominant extreme points, to be maximized
/// against any non-negative measurement vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinFormula {
    terms: Vec<Vec<Rational>>,
}

impl MinFormula {
    pub fn terms(&self) -> &[Vec<Rational>] {
        &self.terms
    }

    pub fn evaluate(&self, n: &MeasurementVector) -> Rational {
        self.terms
            .iter()
            .map(|e| n.values().iter().zip(e).map(|(a, b)| a * b).sum())
            .max()
            .expect("a formula has at least one term")
    }
}

fn term_string(e: &[Rational]) -> String {
    let mut scale = num_bigint::BigInt::one();
    for x in e {
        scale = num_integer::Integer::lcm(&scale, x.denom());
    }
    let scale_r = Rational::from_integer(scale.clone());
    let mut parts = String::new();
    for (r, x) in e.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let coeff = (x * &scale_r).to_integer();
        let sign_negative = coeff.is_negative();
        let mag = coeff.magnitude();
        if parts.is_empty() {
            if sign_negative {
                parts.push('-');
            }
        } else {
            parts.push_str(if sign_negative { " - " } else { " + " });
        }
        if !mag.is_one() {
            parts.push_str(&format!("{mag} "));
        }
        parts.push_str(&format!("n{}", r + 1));
    }
    if parts.is_empty() {
        parts.push('0');
    }
    if scale.is_one() {
        parts
    } else {
        format!("({parts})/{scale}")
    }
}

impl fmt::Display for MinFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Plain terms first, fractional ones after, each group in
        // descending coordinate order, so unit vectors read n1, n2, ...
        let mut ordered: Vec<&Vec<Rational>> = self.terms.iter().collect();
        ordered.sort_by(|a, b| {
            let depth = |e: &[Rational]| {
                e.iter()
                    .fold(num_bigint::BigInt::one(), |acc, x| {
                        num_integer::Integer::lcm(&acc, x.denom())
                    })
            };
            depth(a).cmp(&depth(b)).then_with(|| b.cmp(a))
        });
        let rendered: Vec<String> = ordered.iter().map(|e| term_string(e)).collect();
        write!(f, "max({})", rendered.join(", "))
    }
}

impl Serialize for MinFormula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MinFormula", 2)?;
        let terms: Vec<Vec<String>> = self
            .terms
            .iter()
            .map(|e| e.iter().map(rational_to_string).collect())
            .collect();
        st.serialize_field("terms", &terms)?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

/// The dominant extreme points of the dual feasible set, packaged as a
/// symbolic formula. Valid for every `n >= 0` once all recession directions
/// are certified non-positive.
pub fn min_formula(c: &SensorConfiguration) -> Result<MinFormula, BoundsError> {
    let v = enumerate(&fusion_polytope(c))?;
    for ray in v.rays() {
        if ray.iter().any(|x| x.is_positive()) {
            return Err(BoundsError::UnboundedDual { ray: ray.clone() });
        }
    }
    let dom = crate::polytope::dominant(&v);
    Ok(MinFormula {
        terms: dom.vertices().to_vec(),
    })
}

/// Everything about one (configuration, measurement) instance.
#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub minimum: Rational,
    pub maximum: Rational,
    pub min_assignment: AtomAssignment,
    pub max_assignment: AtomAssignment,
    pub integer_values: Option<BTreeSet<i64>>,
    pub formula: Option<MinFormula>,
}

impl Serialize for BoundsReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundsReport", 6)?;
        st.serialize_field("minimum", &rational_to_string(&self.minimum))?;
        st.serialize_field("maximum", &rational_to_string(&self.maximum))?;
        st.serialize_field("min_assignment", &self.min_assignment)?;
        st.serialize_field("max_assignment", &self.max_assignment)?;
        st.serialize_field(
            "integer_values",
            &self.integer_values.as_ref().map(|s| s.iter().collect::<Vec<_>>()),
        )?;
        st.serialize_field("formula", &self.formula)?;
        st.end()
    }
}

/// Min and max with assignments; the minimum is cross-checked against the
/// dual evaluation whenever the enumeration guard allows it. Optional
/// extras: the exact integer-achievable set and the symbolic formula.
pub fn bounds_report(
    c: &SensorConfiguration,
    n: &MeasurementVector,
    integer_cap: Option<u128>,
    with_formula: bool,
) -> Result<BoundsReport, BoundsError> {
    let (minimum, min_assignment) = primal_min(c, n)?;
    let (maximum, max_assignment) = primal_max_assignment(c, n)?;
    match enumerate(&fusion_polytope(c)) {
        Ok(v) => {
            let dual = dual_min(c, n, &v)?;
            assert_eq!(dual, minimum, "strong duality is exact");
        }
        Err(PolytopeError::TooLarge { .. }) => {}
        Err(e) if matches!(e, PolytopeError::NonPointed) => {}
        Err(e) => return Err(e.into()),
    }
    let integer_values = match integer_cap {
        None => None,
        Some(cap) => match integer_range(c, n, cap) {
            Ok(set) => Some(set),
            Err(BoundsError::Infeasible { .. }) | Err(BoundsError::TooLarge { .. }) => None,
            Err(e) => return Err(e),
        },
    };
    let formula = if with_formula {
        match min_formula(c) {
            Ok(f) => Some(f),
            Err(BoundsError::Polytope(PolytopeError::TooLarge { .. })) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(BoundsReport {
        minimum,
        maximum,
        min_assignment,
        max_assignment,
        integer_values,
        formula,
    })
}
