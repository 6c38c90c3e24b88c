use proptest::prelude::*;

use tropfactor::descent::{find_mate, PrimeVector, SegmentDecomposer};
use tropfactor::geometry::{
    convex_hull, lattice_points, minkowski_diff, minkowski_sum, support, twice_area, BodyKind, Direction, LatticeBody,
    LatticePoint,
};
use tropfactor::maxplus::{factorize, flatten, MaxPlusExpr, MaxPlusFunction};
use tropfactor::parser::parse_expression;
use tropfactor::partition::{classify_points, unimodular_triangulation, Partition};
use tropfactor::pipeline::decompose;
use tropfactor::signed::{normalize_term, NormalForm};

fn point(r: i64) -> impl Strategy<Value = LatticePoint> {
    (-r..=r, -r..=r).prop_map(|(x, y)| LatticePoint::new(x, y))
}

fn body(r: i64) -> impl Strategy<Value = LatticeBody> {
    prop::collection::vec(point(r), 1..8).prop_map(|pts| convex_hull(&pts).unwrap())
}

fn polygon(r: i64) -> impl Strategy<Value = LatticeBody> {
    body(r).prop_filter("two-dimensional", |b| b.kind() == BodyKind::Polygon)
}

fn direction() -> impl Strategy<Value = Direction> {
    point(20).prop_filter("nonzero", |p| !p.is_zero()).prop_map(|p| Direction::new(p.x, p.y).unwrap())
}

fn prime(r: i64) -> impl Strategy<Value = PrimeVector> {
    (-r..=r, -r..=r).prop_filter_map("prime", |(a, b)| PrimeVector::new(a, b).ok())
}

fn function(r: i64) -> impl Strategy<Value = MaxPlusFunction> {
    prop::collection::vec(point(r), 1..8).prop_map(|pts| MaxPlusFunction::new(pts).unwrap())
}

fn expr() -> impl Strategy<Value = MaxPlusExpr> {
    let leaf = (-4i64..=4, -4i64..=4).prop_map(|(a, b)| MaxPlusExpr::Linear(a, b));
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(MaxPlusExpr::Max),
            prop::collection::vec(inner.clone(), 1..3).prop_map(MaxPlusExpr::Sum),
            inner.clone().prop_map(|e| MaxPlusExpr::Negate(Box::new(e))),
            (1i64..=3, inner).prop_map(|(k, e)| MaxPlusExpr::Scale(k, Box::new(e))),
        ]
    })
}

/// Sum of the partial quotients of |a|/|b|, the length of the Stern–Brocot
/// path to the vector.
fn stern_brocot_length(p: PrimeVector) -> usize {
    let (mut a, mut b) = (p.a().unsigned_abs(), p.b().unsigned_abs());
    let mut len = 0;
    while a != 0 && b != 0 {
        if a >= b {
            len += a / b;
            a %= b;
        } else {
            len += b / a;
            b %= a;
        }
    }
    len as usize
}

/// Descent written as plain recursion with no memo, used as a reference.
fn naive_prime(p: PrimeVector) -> NormalForm {
    if p.is_unit() {
        return SegmentDecomposer::new().decompose_prime(p);
    }
    let s = find_mate(p).unwrap();
    let o = LatticePoint::ORIGIN;
    let mut nf = NormalForm::zero();
    for other in [s.q, s.r] {
        let tri = convex_hull(&[o, p.as_point(), other.as_point()]).unwrap();
        let (atom, shift) = normalize_term(&tri).unwrap();
        nf.add_scaled(&NormalForm::atom(atom, shift, 1), 1);
        nf.add_scaled(&naive_prime(other), -1);
    }
    nf
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hull_is_idempotent(b in body(10)) {
        prop_assert_eq!(convex_hull(b.vertices()).unwrap(), b.clone());
        let mut rev = b.vertices().to_vec();
        rev.reverse();
        prop_assert_eq!(convex_hull(&rev).unwrap(), b);
    }

    #[test]
    fn hull_distributes_over_sum(p1 in prop::collection::vec(point(6), 1..6), p2 in prop::collection::vec(point(6), 1..6)) {
        let pairwise: Vec<_> = p1.iter().flat_map(|&a| p2.iter().map(move |&b| a + b)).collect();
        let lhs = convex_hull(&pairwise).unwrap();
        let rhs = minkowski_sum(&convex_hull(&p1).unwrap(), &convex_hull(&p2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sum_is_commutative_and_associative(a in body(6), b in body(6), c in body(6)) {
        prop_assert_eq!(minkowski_sum(&a, &b), minkowski_sum(&b, &a));
        prop_assert_eq!(minkowski_sum(&minkowski_sum(&a, &b), &c), minkowski_sum(&a, &minkowski_sum(&b, &c)));
    }

    #[test]
    fn difference_undoes_sum(a in body(6), b in body(6), c in body(6)) {
        let ab = minkowski_sum(&a, &b);
        prop_assert_eq!(minkowski_diff(&ab, &b), Some(a.clone()));
        // (A+B+C) − (B+C) = ((A+B+C) − B) − C
        let abc = minkowski_sum(&ab, &c);
        let stepwise = minkowski_diff(&abc, &b).and_then(|r| minkowski_diff(&r, &c));
        prop_assert_eq!(minkowski_diff(&abc, &minkowski_sum(&b, &c)), stepwise);
    }

    #[test]
    fn support_is_additive(a in body(8), b in body(8), d in direction()) {
        prop_assert_eq!(support(&minkowski_sum(&a, &b), d), support(&a, d) + support(&b, d));
    }

    #[test]
    fn pick_holds(poly in polygon(8)) {
        let (bnd, int) = classify_points(&poly);
        prop_assert_eq!(twice_area(&poly), 2 * int.len() as i64 + bnd.len() as i64 - 2);
        prop_assert_eq!(lattice_points(&poly).len(), bnd.len() + int.len());
    }

    #[test]
    fn dilation_scales_area(poly in polygon(6), k in 1i64..5) {
        prop_assert_eq!(twice_area(&poly.dilate(k)), k * k * twice_area(&poly));
    }

    #[test]
    fn triangulation_is_unimodular(poly in polygon(6)) {
        let part = unimodular_triangulation(&poly).unwrap();
        prop_assert_eq!(part.cells().len() as i64, twice_area(&poly));
        for i in 0..part.cells().len() {
            prop_assert_eq!(twice_area(&part.cell_body(i)), 1);
        }
        let again = Partition::from_json(serde_json::from_str(&serde_json::to_string(&part.to_json()).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(again.dividing_segments(), part.dividing_segments());
    }

    #[test]
    fn pipeline_verifies_and_commutes_with_translation(poly in polygon(5), v in point(30)) {
        let a = decompose(&poly).unwrap();
        prop_assert!(a.verified);
        let b = decompose(&poly.translate(v)).unwrap();
        prop_assert_eq!(b.normal_form, a.normal_form.add(&NormalForm::translation(v)));
    }

    #[test]
    fn normal_form_json_round_trip(poly in polygon(5)) {
        let nf = decompose(&poly).unwrap().normal_form;
        let text = serde_json::to_string(&nf).unwrap();
        let back: NormalForm = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        prop_assert_eq!(back, nf);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn prime_descent_passes_full_oracle(p in prime(50)) {
        let nf = SegmentDecomposer::new().decompose_prime(p);
        prop_assert!(nf.verify(&LatticeBody::segment(LatticePoint::ORIGIN, p.as_point())));
    }

    #[test]
    fn mate_is_a_basis_with_shorter_parts(p in prime(1000).prop_filter("not unit", |p| !p.is_unit())) {
        let s = find_mate(p).unwrap();
        prop_assert_eq!(p.as_point().cross(s.q.as_point()), 1);
        prop_assert_eq!(s.q.as_point() + s.r.as_point(), p.as_point());
        prop_assert!(s.q.as_point().norm2() < p.as_point().norm2());
        prop_assert!(s.r.as_point().norm2() < p.as_point().norm2());
    }

    #[test]
    fn depth_follows_continued_fraction(p in prime(1000)) {
        let depth = SegmentDecomposer::new().depth(p);
        prop_assert!(depth <= stern_brocot_length(p), "depth {} for {:?}", depth, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn large_primes_pass_support_check(p in prime(1_000_000)) {
        let nf = SegmentDecomposer::new().decompose_prime(p);
        prop_assert!(nf.support_check(&LatticeBody::segment(LatticePoint::ORIGIN, p.as_point()), &Direction::standard16()));
    }

    #[test]
    fn memo_is_transparent(ps in prop::collection::vec(prime(40), 1..6)) {
        let mut shared = SegmentDecomposer::new();
        for &p in &ps {
            let memo = shared.decompose_prime(p);
            prop_assert_eq!(&memo, &SegmentDecomposer::new().decompose_prime(p));
            prop_assert_eq!(memo, naive_prime(p));
        }
    }

    #[test]
    fn evaluation_is_support(f in function(8), d in direction()) {
        prop_assert_eq!(f.evaluate(d.dx(), d.dy()), support(&f.hull(), d));
    }

    #[test]
    fn simplify_and_combine_are_pointwise(f in function(8), g in function(8), probes in prop::collection::vec(point(200), 50)) {
        let s = f.simplify();
        prop_assert!(f.equivalent(&s));
        let (mx, sm) = (f.combine_max(&g), f.combine_sum(&g));
        for q in probes {
            prop_assert_eq!(s.evaluate(q.x, q.y), f.evaluate(q.x, q.y));
            prop_assert_eq!(mx.evaluate(q.x, q.y), f.evaluate(q.x, q.y).max(g.evaluate(q.x, q.y)));
            prop_assert_eq!(sm.evaluate(q.x, q.y), f.evaluate(q.x, q.y) + g.evaluate(q.x, q.y));
        }
    }

    #[test]
    fn flatten_is_pointwise(e in expr(), probes in prop::collection::vec(point(100), 50)) {
        let (plus, minus) = flatten(&e).unwrap();
        for q in probes {
            prop_assert_eq!(plus.evaluate(q.x, q.y) - minus.evaluate(q.x, q.y), e.evaluate(q.x, q.y));
        }
    }

    #[test]
    fn factorization_round_trips_through_text(f in function(5), probes in prop::collection::vec(point(100), 50)) {
        let fact = factorize(&f).unwrap();
        let text = fact.to_expression_string();
        let parsed = parse_expression(&text).unwrap();
        for q in probes {
            prop_assert_eq!(fact.evaluate(q.x, q.y), f.evaluate(q.x, q.y));
            prop_assert_eq!(parsed.evaluate(q.x, q.y), f.evaluate(q.x, q.y), "{}", text);
        }
    }

    #[test]
    fn function_json_round_trip(f in function(10)) {
        let text = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<MaxPlusFunction>(&text).unwrap(), f);
    }
}
