//! End-to-end decomposition of an integral body into
//! `t + k_x·I_x + k_y·I_y + Σ k_T·T`.
//!
//! Polygons go through a unimodular triangulation and its partition relation;
//! every dividing segment is then replaced by its segment decomposition and
//! every cell by its translated unit triangle. The result is checked against
//! the input before it is returned.

use serde::Serialize;

use crate::descent::SegmentDecomposer;
use crate::error::{Error, Result};
use crate::geometry::{is_prime_segment, BodyKind, Direction, LatticeBody};
use crate::partition::{unimodular_triangulation, Partition};
use crate::signed::{normalize_term, NormalForm};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Exact Minkowski-sum equality of both sides.
    #[default]
    Full,
    /// Signed support sums on sixteen fixed directions.
    Support,
}

impl std::str::FromStr for VerifyMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(VerifyMode::Full),
            "support" => Ok(VerifyMode::Support),
            other => Err(format!("unknown verification mode '{other}' (expected support|full)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionStats {
    pub max_abs_coefficient: i64,
    pub distinct_triangles: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub input: LatticeBody,
    pub normal_form: NormalForm,
    pub cells: usize,
    pub dividing: usize,
    pub verified: bool,
    pub verify_mode: VerifyMode,
    pub stats: DecompositionStats,
    #[serde(skip)]
    pub triangulation: Option<Partition>,
}

pub fn decompose(body: &LatticeBody) -> Result<DecompositionReport> {
    decompose_with(body, VerifyMode::Full, &mut SegmentDecomposer::new())
}

pub fn decompose_with(
    body: &LatticeBody,
    mode: VerifyMode,
    segments: &mut SegmentDecomposer,
) -> Result<DecompositionReport> {
    let (normal_form, triangulation) = match body.kind() {
        BodyKind::Point => (NormalForm::translation(body.lex_min()), None),
        BodyKind::Segment => {
            let [a, b] = [body.vertices()[0], body.vertices()[1]];
            (segments.decompose_segment(a, b)?, None)
        }
        BodyKind::Polygon => {
            let part = unimodular_triangulation(body)?;
            (polygon_form(&part, segments)?, Some(part))
        }
    };

    let verified = match mode {
        VerifyMode::Full => normal_form.verify(body),
        VerifyMode::Support => normal_form.support_check(body, &Direction::standard16()),
    };
    if !verified {
        return Err(Error::InvariantViolated(format!("normal form does not reproduce {body}")));
    }

    let stats = DecompositionStats {
        max_abs_coefficient: normal_form.max_abs_coefficient(),
        distinct_triangles: normal_form.distinct_triangles(),
    };
    Ok(DecompositionReport {
        input: body.clone(),
        cells: triangulation.as_ref().map_or(0, |p| p.cells().len()),
        dividing: triangulation.as_ref().map_or(0, |p| p.dividing_segments().len()),
        normal_form,
        verified,
        verify_mode: mode,
        stats,
        triangulation,
    })
}

fn polygon_form(part: &Partition, segments: &mut SegmentDecomposer) -> Result<NormalForm> {
    let mut nf = NormalForm::zero();
    for i in 0..part.cells().len() {
        let (atom, shift) = normalize_term(&part.cell_body(i))
            .map_err(|_| Error::InvariantViolated(format!("cell {i} is not a minimum triangle")))?;
        nf.add_scaled(&NormalForm::atom(atom, shift, 1), 1);
    }
    let points = part.points();
    for &(i, j) in part.dividing_segments() {
        let (a, b) = (points[i], points[j]);
        if !is_prime_segment(a, b)? {
            return Err(Error::InvariantViolated(format!("dividing segment {a}-{b} is not prime")));
        }
        nf.add_scaled(&segments.decompose_segment(a, b)?, -1);
    }
    for &i in part.interior() {
        nf.add_scaled(&NormalForm::translation(points[i]), 1);
    }
    Ok(nf)
}
