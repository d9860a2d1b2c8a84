"""Segment crossing and batch occlusion.

The scalar predicate is checked against an exact integer-arithmetic oracle
(on lattice coordinates the deadband never matters), and the vectorized
occlusion path must agree with the scalar predicate point for point.
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from luxplan.geometry import (
    Point2,
    WallSegment,
    point_on_segment,
    segments_as_array,
    segments_cross,
    sightlines_blocked,
)


def exact_proper_cross(p1, p2, q1, q2) -> bool:
    """Strict proper-crossing predicate in exact integer arithmetic."""
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 0) - (v < 0)

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0


def test_proper_crossing():
    assert segments_cross(Point2(0, 0), Point2(2, 2), Point2(0, 2), Point2(2, 0))


def test_parallel_segments_do_not_cross():
    assert not segments_cross(Point2(0, 0), Point2(2, 0), Point2(0, 1), Point2(2, 1))


def test_collinear_overlap_is_not_a_proper_crossing():
    assert not segments_cross(Point2(0, 0), Point2(2, 0), Point2(1, 0), Point2(3, 0))


def test_endpoint_touch_does_not_count():
    # sight line through a doorway endpoint must remain unobstructed
    assert not segments_cross(Point2(0, 0), Point2(2, 2), Point2(1, 1), Point2(3, 0))
    assert not segments_cross(Point2(0, 0), Point2(1, 1), Point2(1, 1), Point2(2, 0))


def test_shared_endpoint_between_segments():
    assert not segments_cross(Point2(0, 0), Point2(1, 0), Point2(1, 0), Point2(1, 1))


coord = st.integers(min_value=-8, max_value=8)
lattice_point = st.tuples(coord, coord)


@given(lattice_point, lattice_point, lattice_point, lattice_point)
@settings(max_examples=300, deadline=None)
def test_crossing_matches_exact_oracle(a, b, c, d):
    got = segments_cross(Point2(*a), Point2(*b), Point2(*c), Point2(*d))
    assert got == exact_proper_cross(a, b, c, d)


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_batch_occlusion_equals_scalar_loop(data):
    fc = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, width=32)
    n_segs = data.draw(st.integers(min_value=0, max_value=6))
    segs = []
    for _ in range(n_segs):
        ax, ay, bx, by = (data.draw(fc) for _ in range(4))
        if (ax, ay) == (bx, by):
            bx += 1.0
        segs.append(WallSegment(Point2(ax, ay), Point2(bx, by)))
    origin = (data.draw(fc), data.draw(fc))
    n_pts = data.draw(st.integers(min_value=1, max_value=12))
    pts = [(data.draw(fc), data.draw(fc)) for _ in range(n_pts)]

    batch = sightlines_blocked(np.array(origin), np.array(pts), segments_as_array(segs))
    o = Point2(*origin)
    for k, (px, py) in enumerate(pts):
        scalar = any(segments_cross(o, Point2(px, py), s.a, s.b) for s in segs)
        assert bool(batch[k]) == scalar


def test_batch_occlusion_empty_inputs():
    out = sightlines_blocked(np.array([0.0, 0.0]), np.zeros((0, 2)), np.zeros((0, 4)))
    assert out.shape == (0,)
    out = sightlines_blocked(np.array([0.0, 0.0]), np.array([[1.0, 1.0]]), np.zeros((0, 4)))
    assert not out[0]


def test_point_on_segment():
    seg = WallSegment(Point2(0, 0), Point2(4, 0))
    assert point_on_segment(Point2(2, 0), seg)
    assert point_on_segment(Point2(0, 0), seg)
    assert not point_on_segment(Point2(2, 0.1), seg)
    assert not point_on_segment(Point2(5, 0), seg)


def test_wall_segment_length():
    assert WallSegment(Point2(0, 0), Point2(3, 4)).length == pytest.approx(5.0)
