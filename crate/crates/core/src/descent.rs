//! Decomposition of integral segments into unit segments and minimum
//! triangles.
//!
//! A prime vector `p` that is not a unit vector has a mate `q` with
//! `cross(p, q) = 1` and `r = p − q`, both strictly shorter than `p`. The
//! three segments satisfy
//!
//! ```text
//! seg(o,p) = △opq + △opr − seg(o,q) − seg(o,r)
//! ```
//!
//! and repeating the step on `q` and `r` terminates at the four unit vectors.
//!
//! The recursion tree shares subproblems heavily (its node set is the
//! Stern–Brocot ancestry of `p`), so it is evaluated as a DAG: mates are
//! memoized per vector and multiplicities are pushed from `p` down to the
//! leaves in order of decreasing length. Chains such as `(1, n)` are `n` steps
//! deep, so nothing here recurses on the call stack.

use std::collections::HashMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, minkowski_sum, LatticeBody, LatticePoint};
use crate::signed::{normalize_term, NormalForm};

/// A primitive nonzero integer vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeVector {
    a: i64,
    b: i64,
}

impl PrimeVector {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::DegenerateSegment);
        }
        if a.gcd(&b) != 1 {
            return Err(Error::NotPrime);
        }
        Ok(Self { a, b })
    }

    pub fn a(self) -> i64 {
        self.a
    }

    pub fn b(self) -> i64 {
        self.b
    }

    pub fn as_point(self) -> LatticePoint {
        LatticePoint::new(self.a, self.b)
    }

    pub fn is_unit(self) -> bool {
        self.a.abs() + self.b.abs() == 1
    }

    fn from_point_unchecked(p: LatticePoint) -> Self {
        Self { a: p.x, b: p.y }
    }
}

/// One descent step `p = q + r` with `cross(p, q) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DescentStep {
    pub p: PrimeVector,
    pub q: PrimeVector,
    pub r: PrimeVector,
}

/// Returns `(g, s, t)` with `a·s + b·t = g = gcd(a, b) ≥ 0`.
fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1, 0);
    let (mut old_t, mut t) = (0, 1);
    while r != 0 {
        let quotient = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
        (old_t, t) = (t, old_t - quotient * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Constructs the mate of `p`.
///
/// Every solution of `cross(p, q) = a·q_y − b·q_x = 1` is `q₀ + k·p`, and
/// shifting by `p` moves `q·p` by `|p|²`. Exactly one shift puts `q·p` in
/// `[1, |p|² − 1]` (`q·p ≡ 0` would force `|p|² = 1`), and in that window both
/// `|q|² = ((q·p)² + 1) / |p|²` and `|p − q|²` are below `|p|²`.
pub fn find_mate(p: PrimeVector) -> Result<DescentStep> {
    if p.is_unit() {
        return Err(Error::BaseCase);
    }
    let (a, b) = (p.a as i128, p.b as i128);
    let (g, s, t) = extended_gcd(a, b);
    if g != 1 {
        return Err(Error::NotPrime);
    }
    // a·s + b·t = 1  ⇒  q = (−t, s) has cross(p, q) = 1
    let (mut qx, mut qy) = (-t, s);
    let n = a * a + b * b;
    let dot = qx * a + qy * b;
    let window = dot.rem_euclid(n);
    assert_ne!(window, 0, "q·p = 0 is impossible for |p| > 1");
    let k = (window - dot) / n;
    qx += k * a;
    qy += k * b;

    let q = LatticePoint::new(qx as i64, qy as i64);
    let pp = p.as_point();
    let r = pp - q;
    debug_assert_eq!(pp.cross(q), 1);
    debug_assert!(q.norm2() < pp.norm2() && r.norm2() < pp.norm2());
    Ok(DescentStep { p, q: PrimeVector::from_point_unchecked(q), r: PrimeVector::from_point_unchecked(r) })
}

fn base_case(p: PrimeVector) -> NormalForm {
    let mut nf = NormalForm::zero();
    match (p.a, p.b) {
        (1, 0) => nf.kx = 1,
        (0, 1) => nf.ky = 1,
        (-1, 0) => {
            nf.t = LatticePoint::new(-1, 0);
            nf.kx = 1;
        }
        (0, -1) => {
            nf.t = LatticePoint::new(0, -1);
            nf.ky = 1;
        }
        _ => unreachable!("not a unit vector"),
    }
    nf
}

fn triangle_form(a: LatticePoint, b: LatticePoint) -> NormalForm {
    let tri = convex_hull(&[LatticePoint::ORIGIN, a, b]).expect("three points");
    let (atom, shift) = normalize_term(&tri).expect("descent triangles are minimum");
    NormalForm::atom(atom, shift, 1)
}

/// Segment decomposer with a per-instance memo of descent steps and of
/// finished prime-vector forms.
///
/// The memo is owned, so sharing across threads means one decomposer per
/// thread; results are independent of memo state.
#[derive(Debug, Default)]
pub struct SegmentDecomposer {
    steps: HashMap<PrimeVector, DescentStep>,
    forms: HashMap<PrimeVector, NormalForm>,
}

impl SegmentDecomposer {
    pub fn new() -> Self {
        Self::default()
    }

    fn step(&mut self, p: PrimeVector) -> DescentStep {
        *self.steps.entry(p).or_insert_with(|| find_mate(p).expect("non-unit prime vector"))
    }

    /// All vectors reachable from `p` by descent, longest first. Children are
    /// strictly shorter than parents, so this is a topological order.
    fn ancestry(&mut self, p: PrimeVector) -> Vec<PrimeVector> {
        let mut seen = HashMap::new();
        let mut stack = vec![p];
        seen.insert(p, ());
        while let Some(v) = stack.pop() {
            if v.is_unit() {
                continue;
            }
            let s = self.step(v);
            for c in [s.q, s.r] {
                if seen.insert(c, ()).is_none() {
                    stack.push(c);
                }
            }
        }
        let mut nodes: Vec<PrimeVector> = seen.into_keys().collect();
        nodes.sort_by_key(|v| (std::cmp::Reverse(v.as_point().norm2()), *v));
        nodes
    }

    pub fn decompose_prime(&mut self, p: PrimeVector) -> NormalForm {
        if let Some(nf) = self.forms.get(&p) {
            return nf.clone();
        }
        let nodes = self.ancestry(p);
        let mut multiplicity: HashMap<PrimeVector, i64> = HashMap::from([(p, 1)]);
        let mut nf = NormalForm::zero();
        for v in nodes {
            let m = multiplicity.get(&v).copied().unwrap_or(0);
            if m == 0 {
                continue;
            }
            if v.is_unit() {
                nf.add_scaled(&base_case(v), m);
                continue;
            }
            let s = self.step(v);
            let (pp, q, r) = (v.as_point(), s.q.as_point(), s.r.as_point());
            nf.add_scaled(&triangle_form(pp, q), m);
            nf.add_scaled(&triangle_form(pp, r), m);
            *multiplicity.entry(s.q).or_insert(0) -= m;
            *multiplicity.entry(s.r).or_insert(0) -= m;
        }
        self.forms.insert(p, nf.clone());
        nf
    }

    /// Longest descent chain from `p` down to a unit vector.
    pub fn depth(&mut self, p: PrimeVector) -> usize {
        let nodes = self.ancestry(p);
        let mut depth: HashMap<PrimeVector, usize> = HashMap::new();
        for v in nodes.into_iter().rev() {
            let d = if v.is_unit() {
                0
            } else {
                let s = self.step(v);
                1 + depth[&s.q].max(depth[&s.r])
            };
            depth.insert(v, d);
        }
        depth[&p]
    }

    /// `seg(p1, p2) = p1 + g·seg(o, u)` with `u` prime and `g` the lattice
    /// length.
    pub fn decompose_segment(&mut self, p1: LatticePoint, p2: LatticePoint) -> Result<NormalForm> {
        if p1 == p2 {
            return Err(Error::DegenerateSegment);
        }
        let d = p2 - p1;
        let g = d.x.gcd(&d.y);
        let u = PrimeVector::new(d.x / g, d.y / g)?;
        let mut nf = NormalForm::translation(p1);
        nf.add_scaled(&self.decompose_prime(u), g);
        Ok(nf)
    }

    pub fn memo_len(&self) -> usize {
        self.steps.len()
    }
}

pub fn decompose_prime(p: PrimeVector) -> NormalForm {
    SegmentDecomposer::new().decompose_prime(p)
}

pub fn decompose_segment(p1: LatticePoint, p2: LatticePoint) -> Result<NormalForm> {
    SegmentDecomposer::new().decompose_segment(p1, p2)
}

/// `seg(o,p) + seg(o,q) + seg(o,p−q)`, which equals both `△opq + △opr` and
/// `conv{o, q, p+q, 2p, p+r, r}`.
pub fn edges_to_hexagon(p: PrimeVector, q: PrimeVector) -> Result<LatticeBody> {
    let (pp, qq) = (p.as_point(), q.as_point());
    let r = pp - qq;
    if r.is_zero() {
        return Err(Error::DegenerateSegment);
    }
    let o = LatticePoint::ORIGIN;
    let sum = minkowski_sum(&LatticeBody::segment(o, pp), &LatticeBody::segment(o, qq));
    Ok(minkowski_sum(&sum, &LatticeBody::segment(o, r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::UnitTriangle;

    fn pv(a: i64, b: i64) -> PrimeVector {
        PrimeVector::new(a, b).unwrap()
    }

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn tri(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> UnitTriangle {
        UnitTriangle::new([a.into(), b.into(), c.into()]).unwrap()
    }

    #[test]
    fn mate_examples() {
        let s = find_mate(pv(2, 1)).unwrap();
        assert_eq!((s.q, s.r), (pv(1, 1), pv(1, 0)));
        let s = find_mate(pv(1, 1)).unwrap();
        assert_eq!((s.q, s.r), (pv(0, 1), pv(1, 0)));
        assert_eq!(find_mate(pv(1, 0)), Err(Error::BaseCase));
        assert_eq!(find_mate(pv(0, -1)), Err(Error::BaseCase));
    }

    #[test]
    fn prime_vector_rejects_non_prime() {
        assert_eq!(PrimeVector::new(2, 4), Err(Error::NotPrime));
        assert_eq!(PrimeVector::new(0, 0), Err(Error::DegenerateSegment));
        assert_eq!(PrimeVector::new(0, 3), Err(Error::NotPrime));
    }

    #[test]
    fn mates_in_every_quadrant() {
        for p in [pv(-2, 1), pv(-3, -5), pv(4, -7), pv(-1, -1), pv(1, -1)] {
            let s = find_mate(p).unwrap();
            assert_eq!(p.as_point().cross(s.q.as_point()), 1);
            assert_eq!(s.q.as_point() + s.r.as_point(), p.as_point());
            assert!(s.q.as_point().norm2() < p.as_point().norm2());
            assert!(s.r.as_point().norm2() < p.as_point().norm2());
        }
    }

    #[test]
    fn base_cases() {
        let nf = decompose_prime(pv(1, 0));
        assert_eq!((nf.t, nf.kx, nf.ky, nf.distinct_triangles()), (pt(0, 0), 1, 0, 0));
        let nf = decompose_prime(pv(-1, 0));
        assert_eq!((nf.t, nf.kx), (pt(-1, 0), 1));
        let nf = decompose_prime(pv(0, -1));
        assert_eq!((nf.t, nf.ky), (pt(0, -1), 1));
    }

    #[test]
    fn two_one_descent() {
        let nf = decompose_prime(pv(2, 1));
        assert_eq!((nf.t, nf.kx, nf.ky), (pt(0, 0), 0, 1));
        let expected = [
            (tri((0, 0), (1, 1), (2, 1)), 1),
            (tri((0, 0), (1, 0), (2, 1)), 1),
            (tri((0, 0), (0, 1), (1, 1)), -1),
            (tri((0, 0), (1, 0), (1, 1)), -1),
        ];
        assert_eq!(nf.distinct_triangles(), expected.len());
        for (t, k) in expected {
            assert_eq!(nf.coefficient(&t), k, "{t}");
        }
    }

    #[test]
    fn three_two_descends_through_one_one_and_two_one() {
        let s = find_mate(pv(3, 2)).unwrap();
        assert_eq!((s.q, s.r), (pv(1, 1), pv(2, 1)));
        let nf = decompose_prime(pv(3, 2));
        assert!(nf.verify(&LatticeBody::segment(LatticePoint::ORIGIN, pt(3, 2))));
    }

    #[test]
    fn segment_examples() {
        let nf = decompose_segment(pt(0, 0), pt(3, 0)).unwrap();
        assert_eq!((nf.t, nf.kx, nf.ky, nf.distinct_triangles()), (pt(0, 0), 3, 0, 0));

        let nf = decompose_segment(pt(-1, -1), pt(1, 0)).unwrap();
        assert_eq!(nf, NormalForm::translation(pt(-1, -1)).add(&decompose_prime(pv(2, 1))));

        let nf = decompose_segment(pt(0, 0), pt(4, 6)).unwrap();
        assert_eq!(nf, decompose_prime(pv(2, 3)).scale(2));
        assert!(nf.verify(&LatticeBody::segment(pt(0, 0), pt(4, 6))));

        assert_eq!(decompose_segment(pt(1, 1), pt(1, 1)), Err(Error::DegenerateSegment));
    }

    #[test]
    fn hexagon_examples() {
        let h = edges_to_hexagon(pv(2, 1), pv(1, 0)).unwrap();
        assert_eq!(h.vertices(), &[pt(0, 0), pt(1, 0), pt(3, 1), pt(4, 2), pt(3, 2), pt(1, 1)]);

        let h = edges_to_hexagon(pv(1, 1), pv(1, 0)).unwrap();
        assert_eq!(h.vertices(), &[pt(0, 0), pt(1, 0), pt(2, 1), pt(2, 2), pt(1, 2), pt(0, 1)]);

        // q = -p: all three segments are parallel and the sum collapses
        let h = edges_to_hexagon(pv(1, 1), pv(-1, -1)).unwrap();
        assert_eq!(h, LatticeBody::segment(pt(-1, -1), pt(3, 3)));

        let (p, q) = (pv(3, 2), pv(1, 1));
        let h = edges_to_hexagon(p, q).unwrap();
        let r = p.as_point() - q.as_point();
        let o = LatticePoint::ORIGIN;
        let tris = minkowski_sum(
            &convex_hull(&[o, p.as_point(), q.as_point()]).unwrap(),
            &convex_hull(&[o, p.as_point(), r]).unwrap(),
        );
        assert_eq!(h, tris);
        let pp = p.as_point();
        let six = convex_hull(&[o, q.as_point(), pp + q.as_point(), pp + pp, pp + r, r]).unwrap();
        assert_eq!(h, six);

        assert_eq!(edges_to_hexagon(pv(1, 0), pv(1, 0)), Err(Error::DegenerateSegment));
    }

    #[test]
    fn depth_of_chains() {
        let mut d = SegmentDecomposer::new();
        assert_eq!(d.depth(pv(1, 0)), 0);
        assert_eq!(d.depth(pv(1, 1)), 1);
        assert_eq!(d.depth(pv(1, 7)), 7);
    }

    #[test]
    fn long_chain_does_not_recurse() {
        let mut d = SegmentDecomposer::new();
        let p = pv(1, 20_000);
        let nf = d.decompose_prime(p);
        assert_eq!(d.depth(p), 20_000);
        assert!(nf.support_check(
            &LatticeBody::segment(LatticePoint::ORIGIN, p.as_point()),
            &crate::geometry::Direction::standard16()
        ));
    }
}
