//! Text and JSON serialization of polyhedron descriptions.
//!
//! The text formats follow the classic polyhedral file convention:
//!
//! ```text
//! begin
//!   ROWS DIM+1 rational
//!   ...
//! end
//! ```
//!
//! An H file (`.ine`) stores each inequality `a . y <= b` as the row
//! `b -a1 ... -aR` (meaning `b - a . y >= 0`). A V file (`.ext`) stores
//! vertices as `1 v1 ... vR` and rays as `0 r1 ... rR`. Numbers are exact
//! rationals, written `p/q` with integers written plainly.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polytope::{HPolyhedron, HRow, PolytopeError, VRepresentation};
use crate::{parse_rational, rational_to_string, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

pub fn write_ine(h: &HPolyhedron) -> String {
    let mut out = String::from("begin\n");
    out.push_str(&format!("{} {} rational\n", h.row_count(), h.dim() + 1));
    for row in h.rows() {
        let mut fields = vec![rational_to_string(&row.rhs)];
        fields.extend(row.coeffs.iter().map(|c| rational_to_string(&(-c))));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

pub fn write_ext(v: &VRepresentation) -> String {
    let mut out = String::from("begin\n");
    out.push_str(&format!(
        "{} {} rational\n",
        v.vertex_count() + v.ray_count(),
        v.dim() + 1
    ));
    for vertex in v.vertices() {
        let mut fields = vec!["1".to_string()];
        fields.extend(vertex.iter().map(rational_to_string));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    for ray in v.rays() {
        let mut fields = vec!["0".to_string()];
        fields.extend(ray.iter().map(rational_to_string));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

/// The body rows between `begin` and `end`, with the sizes from the header.
/// Lines before `begin` are ignored so files may carry a comment banner.
fn parse_body(text: &str) -> Result<(usize, usize, Vec<(usize, Vec<Rational>)>), IoError> {
    let mut lines = text.lines().enumerate();
    let begin_line = loop {
        match lines.next() {
            Some((i, l)) if l.trim() == "begin" => break i + 1,
            Some(_) => continue,
            None => return Err(parse_err(0, "missing 'begin' line")),
        }
    };
    let (hdr_idx, header) = lines
        .next()
        .ok_or_else(|| parse_err(begin_line, "missing size header after 'begin'"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[2] != "rational" {
        return Err(parse_err(
            hdr_idx + 1,
            "size header must be 'ROWS COLS rational'",
        ));
    }
    let rows: usize = parts[0]
        .parse()
        .map_err(|_| parse_err(hdr_idx + 1, "bad row count"))?;
    let cols: usize = parts[1]
        .parse()
        .map_err(|_| parse_err(hdr_idx + 1, "bad column count"))?;
    if cols < 2 {
        return Err(parse_err(hdr_idx + 1, "need at least 2 columns"));
    }

    let mut body: Vec<(usize, Vec<Rational>)> = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (i, line) = lines
            .next()
            .ok_or_else(|| parse_err(hdr_idx + 1, format!("expected {rows} data rows")))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != cols {
            return Err(parse_err(
                i + 1,
                format!("expected {cols} fields, found {}", fields.len()),
            ));
        }
        let mut nums = Vec::with_capacity(cols);
        for f in fields {
            nums.push(parse_rational(f).map_err(|e| parse_err(i + 1, e))?);
        }
        body.push((i + 1, nums));
    }
    match lines.next() {
        Some((_, l)) if l.trim() == "end" => {}
        Some((i, _)) => return Err(parse_err(i + 1, "expected 'end'")),
        None => return Err(parse_err(0, "missing 'end' line")),
    }
    Ok((rows, cols, body))
}

pub fn parse_ine(text: &str) -> Result<HPolyhedron, IoError> {
    let (_, cols, body) = parse_body(text)?;
    let dim = cols - 1;
    let rows: Vec<HRow> = body
        .into_iter()
        .map(|(_, nums)| {
            let rhs = nums[0].clone();
            let coeffs = nums[1..].iter().map(|c| -c).collect();
            HRow::new(coeffs, rhs)
        })
        .collect();
    Ok(HPolyhedron::new(dim, rows)?)
}

pub fn parse_ext(text: &str) -> Result<VRepresentation, IoError> {
    let (_, cols, body) = parse_body(text)?;
    let dim = cols - 1;
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for (line, nums) in body {
        let marker = &nums[0];
        let coords: Vec<Rational> = nums[1..].to_vec();
        if marker.is_one() {
            vertices.push(coords);
        } else if marker.is_zero() {
            rays.push(coords);
        } else {
            return Err(parse_err(line, "row marker must be 0 (ray) or 1 (vertex)"));
        }
    }
    Ok(VRepresentation::new(dim, vertices, rays)?)
}

/// JSON mirror of an H description; rationals are carried as strings so the
/// encoding stays exact.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct HRepJson {
    pub dim: usize,
    pub rows: Vec<HRowJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct HRowJson {
    pub coeffs: Vec<String>,
    pub rhs: String,
}

impl From<&HPolyhedron> for HRepJson {
    fn from(h: &HPolyhedron) -> Self {
        HRepJson {
            dim: h.dim(),
            rows: h
                .rows()
                .iter()
                .map(|r| HRowJson {
                    coeffs: r.coeffs.iter().map(rational_to_string).collect(),
                    rhs: rational_to_string(&r.rhs),
                })
                .collect(),
        }
    }
}

impl TryFrom<&HRepJson> for HPolyhedron {
    type Error = IoError;

    fn try_from(j: &HRepJson) -> Result<Self, IoError> {
        let mut rows = Vec::with_capacity(j.rows.len());
        for r in &j.rows {
            let coeffs = r
                .coeffs
                .iter()
                .map(|c| parse_rational(c))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse_err(0, e))?;
            let rhs = parse_rational(&r.rhs).map_err(|e| parse_err(0, e))?;
            rows.push(HRow::new(coeffs, rhs));
        }
        Ok(HPolyhedron::new(j.dim, rows)?)
    }
}

/// JSON mirror of a V description.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct VRepJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
}

impl From<&VRepresentation> for VRepJson {
    fn from(v: &VRepresentation) -> Self {
        let encode = |w: &[Vec<Rational>]| -> Vec<Vec<String>> {
            w.iter()
                .map(|p| p.iter().map(rational_to_string).collect())
                .collect()
        };
        VRepJson {
            dim: v.dim(),
            vertices: encode(v.vertices()),
            rays: encode(v.rays()),
        }
    }
}

impl TryFrom<&VRepJson> for VRepresentation {
    type Error = IoError;

    fn try_from(j: &VRepJson) -> Result<Self, IoError> {
        let decode = |w: &[Vec<String>]| -> Result<Vec<Vec<Rational>>, IoError> {
            w.iter()
                .map(|p| {
                    p.iter()
                        .map(|c| parse_rational(c).map_err(|e| parse_err(0, e)))
                        .collect()
                })
                .collect()
        };
        Ok(VRepresentation::new(
            j.dim,
            decode(&j.vertices)?,
            decode(&j.rays)?,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Atom, SensorConfiguration};
    use crate::polytope::{enumerate, fusion_polytope};

    fn config(r: usize, atoms: &[&[usize]]) -> SensorConfiguration {
        SensorConfiguration::new(
            r,
            atoms.iter().map(|a| Atom::new(a.iter().copied()).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn ine_golden_output() {
        let h = fusion_polytope(&config(3, &[&[1], &[2], &[3], &[1, 2, 3]]));
        assert_eq!(
            write_ine(&h),
            "begin\n\
             4 4 rational\n\
             1 -1 0 0\n\
             1 0 -1 0\n\
             1 0 0 -1\n\
             1 -1 -1 -1\n\
             end\n"
        );
    }

    #[test]
    fn ext_contains_plain_integer_vertices() {
        let c = config(3, &[&[1], &[2], &[3], &[1, 3], &[2, 3], &[1, 2, 3]]);
        let v = enumerate(&fusion_polytope(&c)).unwrap();
        let text = write_ext(&v);
        assert!(text.lines().any(|l| l == "1 1 1 -1"), "{text}");
        assert!(text.lines().any(|l| l == "0 -1 0 0"), "{text}");
        assert!(!text.contains("/1"));
    }

    #[test]
    fn ext_writes_exact_fractions() {
        let tetra = crate::complex::SimplicialComplex::from_simplices(
            4,
            [
                crate::complex::Simplex::new([1, 2, 3]),
                crate::complex::Simplex::new([1, 2, 4]),
                crate::complex::Simplex::new([1, 3, 4]),
                crate::complex::Simplex::new([2, 3, 4]),
            ],
        )
        .unwrap();
        let c = crate::config::gen_generic_from_complex(&tetra);
        let v = enumerate(&fusion_polytope(&c)).unwrap();
        let text = write_ext(&v);
        assert!(
            text.lines().any(|l| l == "1 1/3 1/3 1/3 1/3"),
            "{text}"
        );
    }

    #[test]
    fn text_round_trips() {
        let configs = vec![
            config(3, &[&[1], &[2], &[3], &[1, 2, 3]]),
            config(3, &[&[1], &[2], &[3], &[1, 3], &[2, 3], &[1, 2, 3]]),
        ];
        for c in configs {
            let h = fusion_polytope(&c);
            assert_eq!(parse_ine(&write_ine(&h)).unwrap(), h);
            let v = enumerate(&h).unwrap();
            assert_eq!(parse_ext(&write_ext(&v)).unwrap(), v);
        }
    }

    #[test]
    fn parser_reports_line_numbers() {
        assert!(matches!(
            parse_ine("nothing here").unwrap_err(),
            IoError::Parse { line: 0, .. }
        ));
        let bad_header = "begin\n2 3 float\nend\n";
        assert!(matches!(
            parse_ine(bad_header).unwrap_err(),
            IoError::Parse { line: 2, .. }
        ));
        let bad_row = "begin\n1 3 rational\n1 2\nend\n";
        assert!(matches!(
            parse_ine(bad_row).unwrap_err(),
            IoError::Parse { line: 3, .. }
        ));
        let bad_num = "begin\n1 3 rational\n1 x 0\nend\n";
        assert!(matches!(
            parse_ine(bad_num).unwrap_err(),
            IoError::Parse { line: 3, .. }
        ));
        let bad_marker = "begin\n1 3 rational\n2 1 0\nend\n";
        assert!(matches!(
            parse_ext(bad_marker).unwrap_err(),
            IoError::Parse { line: 3, .. }
        ));
        let no_end = "begin\n1 3 rational\n1 1 0\n";
        assert!(parse_ine(no_end).is_err());
    }

    #[test]
    fn parser_ignores_banner_lines() {
        let text = "* produced by tests\nbegin\n1 2 rational\n1 -1\nend\n";
        let h = parse_ine(text).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.row_count(), 1);
    }

    #[test]
    fn json_round_trips() {
        let c = config(3, &[&[1], &[2], &[3], &[1, 2, 3]]);
        let h = fusion_polytope(&c);
        let hj = HRepJson::from(&h);
        let encoded = serde_json::to_string(&hj).unwrap();
        let decoded: HRepJson = serde_json::from_str(&encoded).unwrap();
        assert_eq!(HPolyhedron::try_from(&decoded).unwrap(), h);

        let v = enumerate(&h).unwrap();
        let vj = VRepJson::from(&v);
        let encoded = serde_json::to_string(&vj).unwrap();
        assert!(encoded.contains("\"-1\""));
        let decoded: VRepJson = serde_json::from_str(&encoded).unwrap();
        assert_eq!(VRepresentation::try_from(&decoded).unwrap(), v);
    }
}
