//! Exact integer primitives on the lattice `Z²`.
//!
//! Every body is stored in canonical form: the vertex list of its convex hull,
//! strictly convex, counter-clockwise, starting at the lexicographically
//! smallest vertex. Two bodies are equal as sets iff their vertex lists are
//! equal, so `==` on [`LatticeBody`] is set equality.
//!
//! Arithmetic is plain `i64`. The workspace builds with `overflow-checks`
//! enabled in every profile, so an overflow aborts with a panic rather than
//! wrapping.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn cross(self, other: Self) -> i64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn dot(self, other: Self) -> i64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm2(self) -> i64 {
        self.dot(self)
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([x, y]: [i64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        Self { x, y }
    }
}

impl Add for LatticePoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticePoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticePoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<LatticePoint> for i64 {
    type Output = LatticePoint;
    fn mul(self, p: LatticePoint) -> LatticePoint {
        LatticePoint::new(self * p.x, self * p.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Sign of `cross(b - a, c - a)`: `+1` for a left turn, `-1` for a right
/// turn, `0` when collinear.
pub fn orientation(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i32 {
    (b - a).cross(c - a).signum() as i32
}

/// A primitive integer direction (`gcd(|dx|, |dy|) = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    dx: i64,
    dy: i64,
}

impl Direction {
    /// Canonicalizes by dividing out the gcd.
    pub fn new(dx: i64, dy: i64) -> Result<Self> {
        if dx == 0 && dy == 0 {
            return Err(Error::ZeroDirection);
        }
        let g = dx.gcd(&dy);
        Ok(Self { dx: dx / g, dy: dy / g })
    }

    pub fn dx(self) -> i64 {
        self.dx
    }

    pub fn dy(self) -> i64 {
        self.dy
    }

    pub fn as_point(self) -> LatticePoint {
        LatticePoint::new(self.dx, self.dy)
    }

    /// The four axis directions followed by the four diagonals.
    pub fn axes_and_diagonals() -> Vec<Direction> {
        [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)]
            .into_iter()
            .map(|(dx, dy)| Direction { dx, dy })
            .collect()
    }

    /// Sixteen directions: axes, diagonals, and the eight knight moves.
    pub fn standard16() -> Vec<Direction> {
        let mut dirs = Self::axes_and_diagonals();
        dirs.extend(
            [(2, 1), (1, 2), (-1, 2), (-2, 1), (-2, -1), (-1, -2), (1, -2), (2, -1)]
                .into_iter()
                .map(|(dx, dy)| Direction { dx, dy }),
        );
        dirs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BodyKind {
    Point,
    Segment,
    Polygon,
}

impl BodyKind {
    pub fn name(self) -> &'static str {
        match self {
            BodyKind::Point => "point",
            BodyKind::Segment => "segment",
            BodyKind::Polygon => "polygon",
        }
    }
}

/// A canonical integral convex body: a point, a segment or a polygon.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BodyJson", into = "BodyJson")]
pub struct LatticeBody {
    vertices: Vec<LatticePoint>,
}

impl LatticeBody {
    pub fn point(p: LatticePoint) -> Self {
        Self { vertices: vec![p] }
    }

    /// Segment between two points; collapses to a point when `a == b`.
    pub fn segment(a: LatticePoint, b: LatticePoint) -> Self {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => Self::point(a),
            std::cmp::Ordering::Less => Self { vertices: vec![a, b] },
            std::cmp::Ordering::Greater => Self { vertices: vec![b, a] },
        }
    }

    /// Builds a body from an explicit vertex cycle. The cycle may be given in
    /// either orientation and from any starting vertex, but every listed point
    /// must be a vertex of the hull.
    pub fn from_vertices(vertices: &[LatticePoint]) -> Result<Self> {
        let hull = convex_hull(vertices)?;
        if vertices.len() != hull.vertices.len() {
            return Err(Error::NonConvex(format!(
                "{} points listed but the hull has {} vertices",
                vertices.len(),
                hull.vertices.len()
            )));
        }
        let n = vertices.len();
        if n <= 2 {
            return Ok(hull);
        }
        let start = vertices.iter().position(|v| *v == hull.vertices[0]).unwrap();
        let forward = (0..n).all(|i| vertices[(start + i) % n] == hull.vertices[i]);
        let backward = (0..n).all(|i| vertices[(start + n - i) % n] == hull.vertices[i]);
        if forward || backward {
            Ok(hull)
        } else {
            Err(Error::NonConvex("vertices are not listed in cyclic order".into()))
        }
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn kind(&self) -> BodyKind {
        match self.vertices.len() {
            1 => BodyKind::Point,
            2 => BodyKind::Segment,
            _ => BodyKind::Polygon,
        }
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Lexicographically smallest vertex.
    pub fn lex_min(&self) -> LatticePoint {
        self.vertices[0]
    }

    pub fn translate(&self, v: LatticePoint) -> Self {
        // translation preserves canonical order
        Self { vertices: self.vertices.iter().map(|&p| p + v).collect() }
    }

    /// `k`-fold dilation about the origin, `k > 0`. For convex bodies this is
    /// the Minkowski sum of `k` copies.
    pub fn dilate(&self, k: i64) -> Self {
        assert!(k > 0, "dilation factor must be positive");
        Self { vertices: self.vertices.iter().map(|&p| k * p).collect() }
    }

    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let (mut lo, mut hi) = (self.vertices[0], self.vertices[0]);
        for p in &self.vertices {
            lo = LatticePoint::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = LatticePoint::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Closed membership test.
    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.vertices.as_slice() {
            [a] => *a == p,
            [a, b] => on_closed_segment(*a, *b, p),
            vs => edges(vs).all(|(a, b)| orientation(a, b, p) >= 0),
        }
    }

    /// Whether `p` lies on the relative boundary. For points and segments the
    /// whole body is boundary.
    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        match self.kind() {
            BodyKind::Polygon => {
                self.contains(p) && edges(&self.vertices).any(|(a, b)| orientation(a, b, p) == 0)
            }
            _ => self.contains(p),
        }
    }

    /// Strict interior membership for polygons.
    pub fn contains_strictly(&self, p: LatticePoint) -> bool {
        self.kind() == BodyKind::Polygon && edges(&self.vertices).all(|(a, b)| orientation(a, b, p) > 0)
    }

    /// Edge vectors of the closed CCW boundary walk. A segment yields its two
    /// opposite edges and a point yields none.
    pub fn edge_vectors(&self) -> Vec<LatticePoint> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        edges(&self.vertices).map(|(a, b)| b - a).collect()
    }
}

impl fmt::Display for LatticeBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        match self.kind() {
            BodyKind::Point => write!(f, "{}", parts[0]),
            BodyKind::Segment => write!(f, "seg[{}]", parts.join(", ")),
            BodyKind::Polygon => write!(f, "conv{{{}}}", parts.join(", ")),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BodyJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    vertices: Option<Vec<LatticePoint>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    points: Option<Vec<LatticePoint>>,
}

impl TryFrom<BodyJson> for LatticeBody {
    type Error = Error;

    fn try_from(raw: BodyJson) -> Result<Self> {
        match (raw.vertices, raw.points) {
            (Some(v), None) => LatticeBody::from_vertices(&v),
            (None, Some(p)) => convex_hull(&p),
            (Some(_), Some(_)) => Err(Error::Json("give either \"vertices\" or \"points\", not both".into())),
            (None, None) => Err(Error::Json("missing \"vertices\" or \"points\"".into())),
        }
    }
}

impl From<LatticeBody> for BodyJson {
    fn from(b: LatticeBody) -> Self {
        BodyJson { vertices: Some(b.vertices), points: None }
    }
}

fn edges(vs: &[LatticePoint]) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
    let n = vs.len();
    (0..n).map(move |i| (vs[i], vs[(i + 1) % n]))
}

pub(crate) fn on_closed_segment(a: LatticePoint, b: LatticePoint, p: LatticePoint) -> bool {
    orientation(a, b, p) == 0 && (p - a).dot(b - a) >= 0 && (p - b).dot(a - b) >= 0
}

/// Convex hull by monotone chain; collinear boundary points are dropped.
pub fn convex_hull(points: &[LatticePoint]) -> Result<LatticeBody> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(LatticeBody { vertices: pts });
    }

    let mut hull: Vec<LatticePoint> = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && orientation(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && orientation(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    // all points collinear: the chain degenerates to [min, max]
    if hull.len() == 2 {
        return Ok(LatticeBody { vertices: vec![pts[0], pts[pts.len() - 1]] });
    }
    Ok(LatticeBody { vertices: hull })
}

/// Minkowski sum via all vertex pairs followed by a hull.
pub fn minkowski_sum(a: &LatticeBody, b: &LatticeBody) -> LatticeBody {
    if b.is_point() {
        return a.translate(b.vertices[0]);
    }
    if a.is_point() {
        return b.translate(a.vertices[0]);
    }
    let mut sums = Vec::with_capacity(a.vertices.len() * b.vertices.len());
    for &p in &a.vertices {
        for &q in &b.vertices {
            sums.push(p + q);
        }
    }
    convex_hull(&sums).expect("nonempty")
}

/// Minkowski sum of a sequence of bodies; the empty sum is the origin.
pub fn minkowski_sum_all<'a>(bodies: impl IntoIterator<Item = &'a LatticeBody>) -> LatticeBody {
    bodies
        .into_iter()
        .fold(LatticeBody::point(LatticePoint::ORIGIN), |acc, b| minkowski_sum(&acc, b))
}

/// The body `c` with `c + b = a`, if one exists.
///
/// Candidate construction: subtract `b`'s edge multiplicities from `a`'s per
/// primitive edge direction, walk the surviving edges from
/// `lex_min(a) - lex_min(b)`, then check `c + b = a` exactly.
pub fn minkowski_diff(a: &LatticeBody, b: &LatticeBody) -> Option<LatticeBody> {
    let mut multiplicity: Vec<(LatticePoint, i64)> = Vec::new();
    let mut bump = |v: LatticePoint, sign: i64| {
        let g = v.x.gcd(&v.y);
        let u = LatticePoint::new(v.x / g, v.y / g);
        match multiplicity.iter_mut().find(|(d, _)| *d == u) {
            Some((_, m)) => *m += sign * g,
            None => multiplicity.push((u, sign * g)),
        }
    };
    for e in a.edge_vectors() {
        bump(e, 1);
    }
    for e in b.edge_vectors() {
        bump(e, -1);
    }
    if multiplicity.iter().any(|&(_, m)| m < 0) {
        return None;
    }
    multiplicity.retain(|&(_, m)| m > 0);
    multiplicity.sort_by(|(u, _), (v, _)| angular_cmp(*u, *v));

    let mut cursor = a.lex_min() - b.lex_min();
    let mut walk = vec![cursor];
    for (u, m) in multiplicity {
        cursor = cursor + m * u;
        walk.push(cursor);
    }
    if walk.first() != walk.last() {
        return None;
    }
    let candidate = convex_hull(&walk).ok()?;
    (minkowski_sum(&candidate, b) == *a).then_some(candidate)
}

/// Orders directions by angle starting just past `-pi/2`, which is the order
/// in which edges leave the lexicographically smallest vertex.
fn angular_cmp(u: LatticePoint, v: LatticePoint) -> std::cmp::Ordering {
    let half = |d: LatticePoint| if d.x > 0 || (d.x == 0 && d.y > 0) { 0 } else { 1 };
    half(u).cmp(&half(v)).then_with(|| 0.cmp(&u.cross(v)))
}

pub fn support(a: &LatticeBody, d: Direction) -> i64 {
    support_vec(a, d.as_point())
}

/// Support function for an arbitrary (not necessarily primitive) vector.
pub fn support_vec(a: &LatticeBody, d: LatticePoint) -> i64 {
    a.vertices.iter().map(|p| p.dot(d)).max().expect("nonempty body")
}

/// Twice the enclosed area (shoelace); zero for points and segments.
pub fn twice_area(a: &LatticeBody) -> i64 {
    if a.vertices.len() < 3 {
        return 0;
    }
    edges(&a.vertices).map(|(p, q)| p.cross(q)).sum::<i64>().abs()
}

/// All lattice points of the body in lexicographic order.
pub fn lattice_points(a: &LatticeBody) -> Vec<LatticePoint> {
    match a.vertices.as_slice() {
        [p] => vec![*p],
        [p, q] => {
            let d = *q - *p;
            let g = d.x.gcd(&d.y);
            let step = LatticePoint::new(d.x / g, d.y / g);
            (0..=g).map(|i| *p + i * step).collect()
        }
        _ => {
            let (lo, hi) = a.bounding_box();
            let mut out = Vec::new();
            for x in lo.x..=hi.x {
                for y in lo.y..=hi.y {
                    let p = LatticePoint::new(x, y);
                    if a.contains(p) {
                        out.push(p);
                    }
                }
            }
            out
        }
    }
}

pub fn is_prime_segment(p: LatticePoint, q: LatticePoint) -> Result<bool> {
    if p == q {
        return Err(Error::DegenerateSegment);
    }
    let d = q - p;
    Ok(d.x.gcd(&d.y) == 1)
}
