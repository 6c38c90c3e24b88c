//! Cutting relations, partitions of a polygon over a point set, and the
//! partition relation
//!
//! ```text
//! conv(P) = Σ conv(P_i) − Σ_{d(Π)} seg + Σ_{int(P)} p
//! ```
//!
//! Partitions use boundary segments `e(P_i)` rather than geometric edges, so a
//! cell may meet a neighbour along a piece of one of its edges as long as the
//! cell's own point set splits that edge there.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    convex_hull, lattice_points, on_closed_segment, orientation, twice_area, BodyKind, LatticeBody, LatticePoint,
};
use crate::signed::SignedExpression;

/// `seg(p1,p2) = seg(p1,p3) + seg(p3,p2) − p3` for `p3` strictly inside.
pub fn cut_segment(p1: LatticePoint, p2: LatticePoint, p3: LatticePoint) -> Result<SignedExpression> {
    if p3 == p1 || p3 == p2 || !on_closed_segment(p1, p2, p3) {
        return Err(Error::NotOnSegment);
    }
    Ok(SignedExpression::new()
        .plus(LatticeBody::segment(p1, p3))
        .plus(LatticeBody::segment(p3, p2))
        .minus(LatticeBody::point(p3)))
}

/// Splits a polygon along the lattice chord `l1 l2` into `P1 + P2 − seg`.
pub fn cut_polygon(poly: &LatticeBody, l1: LatticePoint, l2: LatticePoint) -> Result<SignedExpression> {
    expect_kind(poly, BodyKind::Polygon)?;
    if l1 == l2 || !poly.on_boundary(l1) || !poly.on_boundary(l2) {
        return Err(Error::NotSeparatingChord);
    }
    let mut left = vec![l1, l2];
    let mut right = vec![l1, l2];
    for &v in poly.vertices() {
        match orientation(l1, l2, v) {
            1 => left.push(v),
            -1 => right.push(v),
            _ => {}
        }
    }
    if left.len() == 2 || right.len() == 2 {
        return Err(Error::NotSeparatingChord);
    }
    Ok(SignedExpression::new()
        .plus(convex_hull(&left)?)
        .plus(convex_hull(&right)?)
        .minus(LatticeBody::segment(l1, l2)))
}

/// Star subdivision of a triangle from a strictly interior point.
pub fn star_subdivide_triangle(t: &LatticeBody, p4: LatticePoint) -> Result<SignedExpression> {
    expect_kind(t, BodyKind::Polygon)?;
    if t.vertices().len() != 3 {
        return Err(Error::WrongKind { expected: "triangle", found: "polygon" });
    }
    if !t.contains(p4) {
        return Err(Error::Outside);
    }
    if !t.contains_strictly(p4) {
        return Err(Error::OnBoundary);
    }
    let [p1, p2, p3] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
    let tri = |a, b| convex_hull(&[a, b, p4]).expect("nondegenerate");
    Ok(SignedExpression::new()
        .plus(tri(p1, p2))
        .plus(tri(p2, p3))
        .plus(tri(p1, p3))
        .minus(LatticeBody::segment(p1, p4))
        .minus(LatticeBody::segment(p2, p4))
        .minus(LatticeBody::segment(p3, p4))
        .plus(LatticeBody::point(p4)))
}

fn expect_kind(body: &LatticeBody, kind: BodyKind) -> Result<()> {
    if body.kind() == kind {
        Ok(())
    } else {
        Err(Error::WrongKind { expected: kind.name(), found: body.kind().name() })
    }
}

/// Splits the lattice points of a body into boundary points (counter-clockwise
/// from the lexicographically smallest vertex) and interior points
/// (lexicographic).
pub fn classify_points(poly: &LatticeBody) -> (Vec<LatticePoint>, Vec<LatticePoint>) {
    let all = lattice_points(poly);
    if poly.kind() != BodyKind::Polygon {
        return (all, Vec::new());
    }
    let (boundary, interior): (Vec<_>, Vec<_>) = all.into_iter().partition(|&p| poly.on_boundary(p));
    (boundary_walk(poly, &boundary), interior)
}

/// Orders boundary points of a polygon counter-clockwise, starting at its first
/// canonical vertex.
fn boundary_walk(hull: &LatticeBody, on_boundary: &[LatticePoint]) -> Vec<LatticePoint> {
    let vs = hull.vertices();
    let n = vs.len();
    let mut out = Vec::with_capacity(on_boundary.len());
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        let mut edge: Vec<LatticePoint> =
            on_boundary.iter().copied().filter(|&p| p != b && on_closed_segment(a, b, p)).collect();
        edge.sort_by_key(|&p| (p - a).dot(b - a));
        out.extend(edge);
    }
    out
}

/// A partition `Π` of `conv(P)` by the point set `P`.
///
/// Segments are index pairs `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    points: Vec<LatticePoint>,
    cells: Vec<Vec<usize>>,
    boundary: Vec<usize>,
    interior: Vec<usize>,
    boundary_segments: Vec<(usize, usize)>,
    dividing: Vec<(usize, usize)>,
}

struct CellInfo {
    hull: LatticeBody,
    boundary: Vec<LatticePoint>,
    segments: BTreeSet<(LatticePoint, LatticePoint)>,
}

impl CellInfo {
    fn new(points: &[LatticePoint]) -> Self {
        let hull = convex_hull(points).expect("nonempty");
        let on_boundary: Vec<LatticePoint> = points.iter().copied().filter(|&p| hull.on_boundary(p)).collect();
        let boundary = if hull.kind() == BodyKind::Polygon { boundary_walk(&hull, &on_boundary) } else { on_boundary };
        let segments = cyclic_pairs(&boundary).map(|(a, b)| ordered(a, b)).collect();
        Self { hull, boundary, segments }
    }
}

fn cyclic_pairs<T: Copy>(items: &[T]) -> impl Iterator<Item = (T, T)> + '_ {
    let n = items.len();
    (0..n).map(move |i| (items[i], items[(i + 1) % n]))
}

fn ordered<T: Ord>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Partition {
    /// Validates the four partition conditions and derives `b(P)`, `int(P)`,
    /// `e(P)` and `d(Π)`.
    pub fn new(points: Vec<LatticePoint>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let invalid = |condition: u8, detail: String| Error::InvalidPartition { condition, detail };

        let index: HashMap<LatticePoint, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        if index.len() != points.len() {
            return Err(invalid(0, "duplicate points".into()));
        }
        let whole = CellInfo::new(&points);
        if whole.hull.kind() != BodyKind::Polygon {
            return Err(invalid(0, "point set is not two-dimensional".into()));
        }

        let mut infos = Vec::with_capacity(cells.len());
        for (ci, cell) in cells.iter().enumerate() {
            if let Some(&bad) = cell.iter().find(|&&i| i >= points.len()) {
                return Err(invalid(0, format!("cell {ci} references point {bad}")));
            }
            let pts: Vec<LatticePoint> = cell.iter().map(|&i| points[i]).collect();
            if pts.is_empty() {
                return Err(invalid(2, format!("cell {ci} is empty")));
            }
            let info = CellInfo::new(&pts);
            if info.hull.vertices().len() < 3 {
                return Err(invalid(2, format!("cell {ci} has fewer than 3 vertices")));
            }
            infos.push(info);
        }

        let covered: BTreeSet<LatticePoint> = infos.iter().flat_map(|c| c.boundary.iter().copied()).collect();
        if let Some(p) = points.iter().find(|p| !covered.contains(p)) {
            return Err(invalid(1, format!("point {p} is on no cell boundary")));
        }

        let cell_area: i64 = infos.iter().map(|c| twice_area(&c.hull)).sum();
        if cell_area != twice_area(&whole.hull) {
            return Err(invalid(3, format!("cells cover area {cell_area}/2, hull has {}/2", twice_area(&whole.hull))));
        }

        let boxes: Vec<_> = infos.iter().map(|c| c.hull.bounding_box()).collect();
        for i in 0..infos.len() {
            for j in i + 1..infos.len() {
                let ((alo, ahi), (blo, bhi)) = (boxes[i], boxes[j]);
                if ahi.x < blo.x || bhi.x < alo.x || ahi.y < blo.y || bhi.y < alo.y {
                    continue;
                }
                check_face_intersection(&infos[i], &infos[j])
                    .map_err(|detail| invalid(4, format!("cells {i} and {j}: {detail}")))?;
            }
        }

        let idx = |p: &LatticePoint| index[p];
        let boundary: Vec<usize> = whole.boundary.iter().map(idx).collect();
        let on_boundary: BTreeSet<usize> = boundary.iter().copied().collect();
        let mut interior: Vec<usize> = (0..points.len()).filter(|i| !on_boundary.contains(i)).collect();
        interior.sort_by_key(|&i| points[i]);

        let pair = |(a, b): &(LatticePoint, LatticePoint)| ordered(idx(a), idx(b));
        let boundary_segments: Vec<(usize, usize)> = cyclic_pairs(&whole.boundary).map(|(a, b)| pair(&(a, b))).collect();
        let outer: BTreeSet<(usize, usize)> = boundary_segments.iter().copied().collect();
        let dividing: Vec<(usize, usize)> = infos
            .iter()
            .flat_map(|c| c.segments.iter().map(pair))
            .filter(|s| !outer.contains(s))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        Ok(Self { points, cells, boundary, interior, boundary_segments, dividing })
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Indices of `b(P)`, counter-clockwise.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Indices of `int(P)`, lexicographic by coordinates.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary_segments(&self) -> &[(usize, usize)] {
        &self.boundary_segments
    }

    pub fn dividing_segments(&self) -> &[(usize, usize)] {
        &self.dividing
    }

    pub fn hull(&self) -> LatticeBody {
        convex_hull(&self.points).expect("validated")
    }

    pub fn cell_body(&self, i: usize) -> LatticeBody {
        let pts: Vec<LatticePoint> = self.cells[i].iter().map(|&k| self.points[k]).collect();
        convex_hull(&pts).expect("validated")
    }

    pub fn segment_body(&self, (i, j): (usize, usize)) -> LatticeBody {
        LatticeBody::segment(self.points[i], self.points[j])
    }

    pub fn to_json(&self) -> PartitionJson {
        PartitionJson {
            points: self.points.clone(),
            cells: self.cells.clone(),
            dividing: self.dividing.iter().map(|&(i, j)| [i, j]).collect(),
            interior: self.interior.clone(),
        }
    }

    pub fn from_json(raw: PartitionJson) -> Result<Self> {
        Self::new(raw.points, raw.cells)
    }
}

/// Wire form of a partition. `dividing` and `interior` are derived; on load
/// they are recomputed from `points` and `cells`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub points: Vec<LatticePoint>,
    pub cells: Vec<Vec<usize>>,
    #[serde(default)]
    pub dividing: Vec<[usize; 2]>,
    #[serde(default)]
    pub interior: Vec<usize>,
}

/// Two cells must have disjoint interiors, and where they touch the contact
/// must be a shared boundary point or a shared boundary segment of both.
fn check_face_intersection(a: &CellInfo, b: &CellInfo) -> std::result::Result<(), String> {
    let separated = separating_edge(&a.hull, &b.hull).or_else(|| separating_edge(&b.hull, &a.hull));
    let Some((u, v)) = separated else {
        return Err("interiors overlap".into());
    };
    let dir = v - u;
    let on_line = |h: &LatticeBody| -> Vec<i64> {
        h.vertices().iter().filter(|&&p| orientation(u, v, p) == 0).map(|&p| (p - u).dot(dir)).collect()
    };
    let (sa, sb) = (on_line(&a.hull), on_line(&b.hull));
    if sa.is_empty() || sb.is_empty() {
        return Ok(());
    }
    let lo = *sa.iter().min().unwrap().max(sb.iter().min().unwrap());
    let hi = *sa.iter().max().unwrap().min(sb.iter().max().unwrap());
    if lo > hi {
        return Ok(());
    }
    // Endpoints of the contact are hull vertices, hence lattice points.
    let point_at = |s: i64| {
        a.hull
            .vertices()
            .iter()
            .chain(b.hull.vertices())
            .copied()
            .find(|&p| orientation(u, v, p) == 0 && (p - u).dot(dir) == s)
            .expect("contact endpoint is a vertex")
    };
    if lo == hi {
        let q = point_at(lo);
        if a.boundary.contains(&q) && b.boundary.contains(&q) {
            Ok(())
        } else {
            Err(format!("contact point {q} is not a boundary point of both"))
        }
    } else {
        let seg = ordered(point_at(lo), point_at(hi));
        if a.segments.contains(&seg) && b.segments.contains(&seg) {
            Ok(())
        } else {
            Err(format!("contact {}-{} is not a boundary segment of both", seg.0, seg.1))
        }
    }
}

/// An edge `(u, v)` of `a` such that `b` lies entirely on its outer side.
fn separating_edge(a: &LatticeBody, b: &LatticeBody) -> Option<(LatticePoint, LatticePoint)> {
    cyclic_pairs(a.vertices()).find(|&(u, v)| b.vertices().iter().all(|&p| orientation(u, v, p) <= 0))
}

/// `+Σ cells − Σ dividing segments + Σ interior points`.
pub fn partition_relation(part: &Partition) -> SignedExpression {
    let mut expr = SignedExpression::new();
    for i in 0..part.cells.len() {
        expr = expr.plus(part.cell_body(i));
    }
    for &s in &part.dividing {
        expr = expr.minus(part.segment_body(s));
    }
    for &i in &part.interior {
        expr = expr.plus(LatticeBody::point(part.points[i]));
    }
    expr
}

/// Placing triangulation over all lattice points.
///
/// Points are inserted in lexicographic order; each new point lies strictly
/// outside the current hull and is joined to every hull edge it sees. The hull
/// keeps its collinear boundary points, so every triangle is lattice-point
/// free and therefore unimodular.
pub fn unimodular_triangulation(poly: &LatticeBody) -> Result<Partition> {
    expect_kind(poly, BodyKind::Polygon)?;
    let points = lattice_points(poly);
    let n = points.len();

    // leading collinear run
    let mut run = 2;
    while run < n && orientation(points[0], points[1], points[run]) == 0 {
        run += 1;
    }
    debug_assert!(run < n, "a polygon has a non-collinear triple");

    let apex = run;
    let mut cells: Vec<Vec<usize>> = (0..run - 1).map(|i| vec![i, i + 1, apex]).collect();
    // hull as a CCW cycle of point indices, including collinear boundary points
    let mut hull: Vec<usize> = if orientation(points[0], points[run - 1], points[apex]) > 0 {
        (0..run).chain([apex]).collect()
    } else {
        [apex].into_iter().chain((0..run).rev()).collect()
    };

    for k in run + 1..n {
        let p = points[k];
        let m = hull.len();
        let visible: Vec<bool> =
            (0..m).map(|i| orientation(points[hull[i]], points[hull[(i + 1) % m]], p) < 0).collect();
        // first visible edge whose predecessor is not visible
        let start = (0..m).find(|&i| visible[i] && !visible[(i + m - 1) % m]).expect("new point sees the hull");
        let mut end = start;
        while visible[end % m] {
            let (a, b) = (hull[end % m], hull[(end + 1) % m]);
            cells.push(vec![a, b, k]);
            end += 1;
        }
        // hull[start] .. hull[end] stay; the vertices strictly between go
        let mut next = Vec::with_capacity(m + 1);
        for off in 0..m {
            let i = (end + off) % m;
            next.push(hull[i]);
            if i == start % m {
                break;
            }
        }
        next.push(k);
        hull = next;
    }

    Partition::new(points, cells)
}
