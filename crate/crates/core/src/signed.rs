//! Signed Minkowski expressions, canonical atoms and the normal form
//! `t + k_x·I_x + k_y·I_y + Σ k_T·T`.
//!
//! An identity `A = B₁ + … − C₁ − …` is always checked as
//! `A + C₁ + … = B₁ + …`, so no set difference is ever formed.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    convex_hull, minkowski_sum, minkowski_sum_all, support, twice_area, BodyKind, Direction, LatticeBody,
    LatticePoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(k: i64) -> Sign {
        if k < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// An ordered list of signed bodies. Order is presentation only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedExpression {
    pub terms: Vec<(Sign, LatticeBody)>,
}

impl SignedExpression {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn plus(mut self, body: LatticeBody) -> Self {
        self.terms.push((Sign::Plus, body));
        self
    }

    pub fn minus(mut self, body: LatticeBody) -> Self {
        self.terms.push((Sign::Minus, body));
        self
    }

    pub fn push(&mut self, sign: Sign, body: LatticeBody) {
        self.terms.push((sign, body));
    }

    pub fn extend(&mut self, other: SignedExpression) {
        self.terms.extend(other.terms);
    }

    pub fn negated(&self) -> SignedExpression {
        SignedExpression { terms: self.terms.iter().map(|(s, b)| (s.flip(), b.clone())).collect() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn side(&self, sign: Sign) -> impl Iterator<Item = &LatticeBody> {
        self.terms.iter().filter(move |(s, _)| *s == sign).map(|(_, b)| b)
    }
}

impl fmt::Display for SignedExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, b)) in self.terms.iter().enumerate() {
            let op = match (i, s) {
                (0, Sign::Plus) => "",
                (0, Sign::Minus) => "-",
                (_, Sign::Plus) => " + ",
                (_, Sign::Minus) => " - ",
            };
            write!(f, "{op}{b}")?;
        }
        Ok(())
    }
}

/// A minimum triangle touching both coordinate axes from the nonnegative
/// quadrant. Vertices are stored sorted lexicographically; that order is the
/// canonical map key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitTriangle {
    vertices: [LatticePoint; 3],
}

impl UnitTriangle {
    pub fn new(vertices: [LatticePoint; 3]) -> Result<Self> {
        let mut v = vertices;
        v.sort_unstable();
        let body = convex_hull(&v)?;
        let min_x = v.iter().map(|p| p.x).min().unwrap();
        let min_y = v.iter().map(|p| p.y).min().unwrap();
        if twice_area(&body) != 1 || min_x != 0 || min_y != 0 {
            return Err(Error::NotAtomic);
        }
        Ok(Self { vertices: v })
    }

    pub fn vertices(&self) -> [LatticePoint; 3] {
        self.vertices
    }

    pub fn body(&self) -> LatticeBody {
        convex_hull(&self.vertices).expect("three points")
    }
}

impl fmt::Display for UnitTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.vertices;
        write!(f, "T{{{a},{b},{c}}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalAtom {
    Ix,
    Iy,
    Triangle(UnitTriangle),
}

impl CanonicalAtom {
    pub fn body(&self) -> LatticeBody {
        match self {
            CanonicalAtom::Ix => LatticeBody::segment(LatticePoint::ORIGIN, LatticePoint::new(1, 0)),
            CanonicalAtom::Iy => LatticeBody::segment(LatticePoint::ORIGIN, LatticePoint::new(0, 1)),
            CanonicalAtom::Triangle(t) => t.body(),
        }
    }
}

impl fmt::Display for CanonicalAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalAtom::Ix => f.write_str("I_x"),
            CanonicalAtom::Iy => f.write_str("I_y"),
            CanonicalAtom::Triangle(t) => t.fmt(f),
        }
    }
}

/// Splits a unit axis segment or minimum triangle into its canonical atom and
/// the translation `(min x, min y)`.
pub fn normalize_term(body: &LatticeBody) -> Result<(CanonicalAtom, LatticePoint)> {
    let (lo, _) = body.bounding_box();
    let local: Vec<LatticePoint> = body.vertices().iter().map(|&p| p - lo).collect();
    let atom = match body.kind() {
        BodyKind::Segment => match local[1] {
            LatticePoint { x: 1, y: 0 } => CanonicalAtom::Ix,
            LatticePoint { x: 0, y: 1 } => CanonicalAtom::Iy,
            _ => return Err(Error::NotAtomic),
        },
        BodyKind::Polygon if local.len() == 3 => {
            CanonicalAtom::Triangle(UnitTriangle::new([local[0], local[1], local[2]])?)
        }
        _ => return Err(Error::NotAtomic),
    };
    Ok((atom, lo))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NormalFormJson", into = "NormalFormJson")]
pub struct NormalForm {
    pub t: LatticePoint,
    pub kx: i64,
    pub ky: i64,
    tri: BTreeMap<UnitTriangle, i64>,
}

impl NormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn translation(t: LatticePoint) -> Self {
        Self { t, ..Self::default() }
    }

    /// `shift + k·atom`.
    pub fn atom(atom: CanonicalAtom, shift: LatticePoint, k: i64) -> Self {
        let mut nf = Self::translation(k * shift);
        nf.add_atom(atom, k);
        nf
    }

    pub fn add_atom(&mut self, atom: CanonicalAtom, k: i64) {
        match atom {
            CanonicalAtom::Ix => self.kx += k,
            CanonicalAtom::Iy => self.ky += k,
            CanonicalAtom::Triangle(t) => {
                let c = self.tri.entry(t).or_insert(0);
                *c += k;
                if *c == 0 {
                    self.tri.remove(&t);
                }
            }
        }
    }

    /// Adds `k·other` in place.
    pub fn add_scaled(&mut self, other: &NormalForm, k: i64) {
        self.t = self.t + k * other.t;
        self.kx += k * other.kx;
        self.ky += k * other.ky;
        for (&t, &c) in &other.tri {
            self.add_atom(CanonicalAtom::Triangle(t), k * c);
        }
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    pub fn negate(&self) -> NormalForm {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> NormalForm {
        let mut out = NormalForm::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn is_zero(&self) -> bool {
        *self == NormalForm::zero()
    }

    pub fn triangles(&self) -> impl Iterator<Item = (&UnitTriangle, i64)> {
        self.tri.iter().map(|(t, &k)| (t, k))
    }

    pub fn coefficient(&self, t: &UnitTriangle) -> i64 {
        self.tri.get(t).copied().unwrap_or(0)
    }

    pub fn distinct_triangles(&self) -> usize {
        self.tri.len()
    }

    pub fn max_abs_coefficient(&self) -> i64 {
        self.tri.values().chain([&self.kx, &self.ky]).map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Atoms with nonzero coefficients: `I_x`, `I_y`, then triangles in key
    /// order.
    pub fn atoms(&self) -> Vec<(CanonicalAtom, i64)> {
        let mut out = Vec::with_capacity(self.tri.len() + 2);
        if self.kx != 0 {
            out.push((CanonicalAtom::Ix, self.kx));
        }
        if self.ky != 0 {
            out.push((CanonicalAtom::Iy, self.ky));
        }
        out.extend(self.tri.iter().map(|(&t, &k)| (CanonicalAtom::Triangle(t), k)));
        out
    }

    /// Expands into signed terms; `k` copies of an atom become one
    /// `|k|`-dilation. The translation is always emitted as a `+` point.
    pub fn to_expression(&self) -> SignedExpression {
        let mut expr = SignedExpression::new().plus(LatticeBody::point(self.t));
        for (atom, k) in self.atoms() {
            expr.push(Sign::of(k), atom.body().dilate(k.abs()));
        }
        expr
    }

    /// Support function of the signed combination, in `i128` so that very
    /// large coefficients can be checked without dilating anything.
    pub fn support(&self, d: Direction) -> i128 {
        let (dx, dy) = (d.dx() as i128, d.dy() as i128);
        let mut h = self.t.x as i128 * dx + self.t.y as i128 * dy;
        h += self.kx as i128 * dx.max(0);
        h += self.ky as i128 * dy.max(0);
        for (t, &k) in &self.tri {
            let ht = t.vertices.iter().map(|p| p.x as i128 * dx + p.y as i128 * dy).max().unwrap();
            h += k as i128 * ht;
        }
        h
    }

    pub fn verify(&self, target: &LatticeBody) -> bool {
        verify_identity(target, &self.to_expression())
    }

    pub fn support_check(&self, target: &LatticeBody, dirs: &[Direction]) -> bool {
        dirs.iter().all(|&d| support(target, d) as i128 == self.support(d))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.t)?;
        for (atom, k) in self.atoms() {
            let sign = if k < 0 { '-' } else { '+' };
            if k.abs() == 1 {
                write!(f, " {sign} {atom}")?;
            } else {
                write!(f, " {sign} {}·{atom}", k.abs())?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TriangleJson {
    v: [LatticePoint; 3],
    k: i64,
}

#[derive(Serialize, Deserialize)]
struct NormalFormJson {
    t: LatticePoint,
    kx: i64,
    ky: i64,
    triangles: Vec<TriangleJson>,
}

impl From<NormalForm> for NormalFormJson {
    fn from(nf: NormalForm) -> Self {
        NormalFormJson {
            t: nf.t,
            kx: nf.kx,
            ky: nf.ky,
            triangles: nf.tri.iter().map(|(t, &k)| TriangleJson { v: t.vertices, k }).collect(),
        }
    }
}

impl TryFrom<NormalFormJson> for NormalForm {
    type Error = Error;

    fn try_from(raw: NormalFormJson) -> Result<Self> {
        let mut nf = NormalForm { t: raw.t, kx: raw.kx, ky: raw.ky, tri: BTreeMap::new() };
        for tj in raw.triangles {
            nf.add_atom(CanonicalAtom::Triangle(UnitTriangle::new(tj.v)?), tj.k);
        }
        Ok(nf)
    }
}

/// Checks `target = Σ₊ − Σ₋` by comparing `target + Σ₋` with `Σ₊` as
/// canonical bodies.
pub fn verify_identity(target: &LatticeBody, rhs: &SignedExpression) -> bool {
    if rhs.side(Sign::Plus).next().is_none() {
        return false;
    }
    let left = rhs.side(Sign::Minus).fold(target.clone(), |acc, b| minkowski_sum(&acc, b));
    let right = minkowski_sum_all(rhs.side(Sign::Plus));
    left == right
}

/// Necessary condition for an identity: the signed support sums agree in
/// every given direction.
pub fn support_check(target: &LatticeBody, rhs: &SignedExpression, dirs: &[Direction]) -> bool {
    dirs.iter().all(|&d| {
        let mut balance = support(target, d) as i128;
        for (s, b) in &rhs.terms {
            balance -= s.as_i64() as i128 * support(b, d) as i128;
        }
        balance == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn hull(points: &[(i64, i64)]) -> LatticeBody {
        convex_hull(&points.iter().map(|&p| p.into()).collect::<Vec<_>>()).unwrap()
    }

    fn tri(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> UnitTriangle {
        UnitTriangle::new([a.into(), b.into(), c.into()]).unwrap()
    }

    #[test]
    fn normalize_translated_unit_segment() {
        let (atom, shift) = normalize_term(&hull(&[(3, 2), (4, 2)])).unwrap();
        assert_eq!(atom, CanonicalAtom::Ix);
        assert_eq!(shift, pt(3, 2));
    }

    #[test]
    fn normalize_triangles() {
        let (atom, shift) = normalize_term(&hull(&[(2, 1), (3, 1), (3, 2)])).unwrap();
        assert_eq!(atom, CanonicalAtom::Triangle(tri((0, 0), (1, 0), (1, 1))));
        assert_eq!(shift, pt(2, 1));

        let (atom, shift) = normalize_term(&hull(&[(0, 0), (1, 2), (-1, -1)])).unwrap();
        assert_eq!(atom, CanonicalAtom::Triangle(tri((1, 1), (2, 3), (0, 0))));
        assert_eq!(shift, pt(-1, -1));
    }

    #[test]
    fn normalize_rejects_non_atoms() {
        assert_eq!(normalize_term(&hull(&[(0, 0), (2, 0)])), Err(Error::NotAtomic));
        assert_eq!(normalize_term(&hull(&[(0, 0), (1, 1)])), Err(Error::NotAtomic));
        assert_eq!(normalize_term(&hull(&[(0, 0), (2, 0), (2, 2)])), Err(Error::NotAtomic));
        assert_eq!(normalize_term(&hull(&[(0, 0), (1, 0), (1, 1), (0, 1)])), Err(Error::NotAtomic));
        assert_eq!(normalize_term(&LatticeBody::point(pt(1, 1))), Err(Error::NotAtomic));
    }

    #[test]
    fn unit_triangle_invariants_enforced() {
        assert!(UnitTriangle::new([pt(1, 1), pt(2, 1), pt(2, 2)]).is_err());
        assert!(UnitTriangle::new([pt(0, 0), pt(2, 0), pt(0, 1)]).is_err());
        assert!(UnitTriangle::new([pt(1, 0), pt(0, 1), pt(1, 1)]).is_ok());
    }

    #[test]
    fn nf_algebra() {
        let mut x = NormalForm::translation(pt(2, -1));
        x.kx = 1;
        x.add_atom(CanonicalAtom::Triangle(tri((0, 0), (1, 0), (1, 1))), 4);
        assert!(x.add(&x.negate()).is_zero());

        let mut kx1 = NormalForm::zero();
        kx1.kx = 1;
        let scaled = kx1.scale(3);
        assert_eq!(scaled.kx, 3);
        assert_eq!(scaled.distinct_triangles(), 0);
        assert!(kx1.scale(0).is_zero());
    }

    #[test]
    fn doubled_triangle_identity() {
        let target = hull(&[(0, 0), (2, 0), (2, 2)]);
        let t = tri((0, 0), (1, 0), (1, 1));
        let nf = NormalForm::atom(CanonicalAtom::Triangle(t), LatticePoint::ORIGIN, 2);
        assert!(nf.verify(&target));
        assert!(!nf.scale(1).add(&NormalForm::translation(pt(1, 0))).verify(&target));
    }

    #[test]
    fn merged_forms_verify_against_summed_bodies() {
        let t = CanonicalAtom::Triangle(tri((0, 0), (1, 0), (1, 1)));
        let a = NormalForm::atom(t, LatticePoint::ORIGIN, 2);
        let mut b = NormalForm::zero();
        b.kx = 1;
        b.add_atom(t, 1);
        b.add_atom(CanonicalAtom::Triangle(tri((1, 0), (0, 1), (2, 0))), 1);
        b.add_atom(CanonicalAtom::Triangle(tri((1, 0), (0, 1), (1, 1))), -1);
        let sum_body = minkowski_sum(&hull(&[(0, 0), (2, 0), (2, 2)]), &hull(&[(0, 0), (1, 1), (3, 0)]));
        let merged = a.add(&b);
        assert_eq!(merged.coefficient(&tri((0, 0), (1, 0), (1, 1))), 3);
        assert!(merged.verify(&sum_body));
    }

    #[test]
    fn empty_positive_side_is_false() {
        let target = LatticeBody::point(LatticePoint::ORIGIN);
        assert!(!verify_identity(&target, &SignedExpression::new()));
        let only_neg = SignedExpression::new().minus(LatticeBody::point(LatticePoint::ORIGIN));
        assert!(!verify_identity(&target, &only_neg));
    }

    #[test]
    fn support_check_single_direction_is_insufficient() {
        // the x-extent matches but the shape does not
        let target = hull(&[(0, 0), (1, 0)]);
        let wrong = SignedExpression::new().plus(hull(&[(0, 0), (1, 1)]));
        assert!(support_check(&target, &wrong, &[Direction::new(1, 0).unwrap()]));
        assert!(!verify_identity(&target, &wrong));
        assert!(!support_check(&target, &wrong, &Direction::axes_and_diagonals()));
    }

    #[test]
    fn normal_form_json_is_sorted_and_round_trips() {
        let mut nf = NormalForm::translation(pt(-1, -1));
        nf.ky = 1;
        nf.add_atom(CanonicalAtom::Triangle(tri((0, 0), (1, 1), (2, 1))), 1);
        nf.add_atom(CanonicalAtom::Triangle(tri((0, 0), (1, 0), (1, 1))), -1);
        let json = serde_json::to_string(&nf).unwrap();
        assert_eq!(
            json,
            r#"{"t":[-1,-1],"kx":0,"ky":1,"triangles":[{"v":[[0,0],[1,0],[1,1]],"k":-1},{"v":[[0,0],[1,1],[2,1]],"k":1}]}"#
        );
        let back: NormalForm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, nf);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn normal_form_json_rejects_non_unit_triangle() {
        let bad = r#"{"t":[0,0],"kx":0,"ky":0,"triangles":[{"v":[[0,0],[2,0],[2,2]],"k":1}]}"#;
        assert!(serde_json::from_str::<NormalForm>(bad).is_err());
    }
}
