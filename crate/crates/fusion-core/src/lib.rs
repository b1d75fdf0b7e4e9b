//! Exact polyhedral machinery for sensor-fusion count bounds.
//!
//! A configuration of overlapping sensor regions is described combinatorially
//! by its atoms: the minimal non-empty cells of the Boolean algebra the
//! regions generate, each identified by the set of regions containing it.
//! Given per-region measurements, the range of total counts consistent with
//! the data is an exact rational interval. Its upper end is the plain sum of
//! the measurements (when no region is redundant); its lower end is computed
//! by maximizing the measurement vector over the extreme points of the dual
//! feasible set `{y : A^T y <= 1}`, where `A` is the region/atom incidence
//! matrix. Everything here is exact: `BigRational` coordinates, integer
//! double description, simplex with Bland's rule.
//!
//! Modules:
//! - [`complex`]: abstract simplicial complexes (nerves, skeletons, completions).
//! - [`config`]: sensor configurations, validity checks, generators.
//! - [`polytope`]: H/V representations and vertex enumeration.
//! - [`bounds`]: the LP layer and the fused-count interval.
//! - [`graphs`]: stable-set polytopes and the graph-side classifications.
//! - [`io`]: cdd-style `.ine`/`.ext` text formats and JSON mirrors.
//! - [`render`]: SVG pictures of extreme points on planar patches.
//! - [`fixtures`]: pinned example configurations used across the test suite.
//! - [`verify`]: the self-check suite run by `fusion verify`.

pub mod bounds;
pub mod complex;
pub mod config;
pub mod fixtures;
pub mod graphs;
pub mod io;
pub mod polytope;
pub mod render;
pub mod verify;

use num_bigint::BigInt;

/// Exact rational scalar used everywhere. Always stored reduced with a
/// positive denominator, which `num_rational` maintains on construction.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `num/den`. Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `p` or `p/q`, matching the text file formats.
pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` with arbitrary-precision integers.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let mk_int = |t: &str| -> Result<BigInt, String> {
        t.parse::<BigInt>()
            .map_err(|_| format!("invalid integer `{t}`"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(mk_int(s)?)),
        Some((p, q)) => {
            let num = mk_int(p)?;
            let den = mk_int(q)?;
            if den == BigInt::from(0) {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(Rational::new(num, den))
        }
    }
}
