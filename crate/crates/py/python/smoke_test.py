"""Smoke test for the tropfactor extension module. Run after
`maturin develop` (or `pip install crates/py`)."""

import json
import random

import tropfactor as tf


def main():
    tri = tf.LatticeBody.hull([(0, 0), (2, 0), (2, 2), (1, 0)])
    assert tri.vertices == [(0, 0), (2, 0), (2, 2)]
    assert tri.twice_area() == 4

    report = tf.decompose(tri)
    assert report.verified and report.cells == 4
    nf = report.normal_form
    assert nf.triangles == [([(0, 0), (1, 0), (1, 1)], 2)]
    assert nf.verify(tri)
    assert tf.NormalForm.from_json(nf.to_json()) == nf
    assert "<svg" in report.svg()

    seg = tf.decompose_segment((-1, -1), (1, 0))
    assert seg.t == (-1, -1) and seg.ky == 1
    assert seg.support_check(tf.LatticeBody([(-1, -1), (1, 0)]))

    part = json.loads(tf.triangulate(tf.LatticeBody.hull([(1, 0), (0, 1), (1, 3), (4, 1)])))
    assert len(part["cells"]) == 12

    f = tf.MaxPlusFunction([(0, 0), (2, 0), (0, 1)])
    assert f(1, 3) == 3
    assert f.equivalent(tf.MaxPlusFunction([(0, 0), (1, 0), (2, 0), (0, 1)]))

    fact = tf.factorize(f)
    rng = random.Random(0)
    for _ in range(100):
        x, y = rng.randint(-100, 100), rng.randint(-100, 100)
        assert fact(x, y) == f(x, y)
    text = fact.to_expression_string()
    back = tf.parse_expression(text)
    assert all(back(x, y) == f(x, y) for x in range(-5, 6) for y in range(-5, 6))

    e = tf.parse_expression("max(0,x) + max(0,y) - max(0,x,y)")
    plus, minus = e.flatten()
    assert all(plus(x, y) - minus(x, y) == e(x, y) for x in range(-5, 6) for y in range(-5, 6))
    diff = tf.factorize_difference(plus, minus)
    assert all(diff(x, y) == e(x, y) for x in range(-5, 6) for y in range(-5, 6))

    try:
        tf.parse_expression("max(0, x+1)")
    except ValueError as err:
        assert "nonzero tropical coefficient unsupported" in str(err)
    else:
        raise AssertionError("tropical constant accepted")

    print("smoke test ok:", text)


if __name__ == "__main__":
    main()
