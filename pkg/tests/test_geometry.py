import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roadgen.errors import ValidationError
from roadgen.geometry import (
    CubicBezier,
    Footprint,
    Point2,
    Pose,
    advance_pose,
    bezier_eval,
    bezier_polyline,
    footprints_overlap,
    normalize_heading,
    offset_polyline,
    polyline_length,
)

# The spec-fixture curve: a shallow arch over the unit interval.
ARCH = CubicBezier(Point2(0, 0), Point2(0, 1), Point2(1, 1), Point2(1, 0))

finite = st.floats(min_value=-1e4, max_value=1e4, allow_nan=False)


def square(x0: float, y0: float, side: float = 1.0) -> Footprint:
    return Footprint(
        (
            Point2(x0, y0),
            Point2(x0 + side, y0),
            Point2(x0 + side, y0 + side),
            Point2(x0, y0 + side),
        )
    )


# --------------------------------------------------------------------------
# bezier_eval
# --------------------------------------------------------------------------


def test_bezier_endpoints_are_control_endpoints():
    rng = np.random.default_rng(1)
    for _ in range(50):
        pts = [Point2(*xy) for xy in rng.uniform(-100, 100, size=(4, 2))]
        curve = CubicBezier(*pts)
        start, end = bezier_eval(curve, 0.0), bezier_eval(curve, 1.0)
        assert abs(start.x - curve.p0.x) <= 1e-12
        assert abs(start.y - curve.p0.y) <= 1e-12
        assert abs(end.x - curve.p3.x) <= 1e-12
        assert abs(end.y - curve.p3.y) <= 1e-12


def test_bezier_midpoint_hand_expansion():
    # (P0 + 3 P1 + 3 P2 + P3) / 8 for the arch curve, expanded by hand.
    mid = bezier_eval(ARCH, 0.5)
    assert mid.x == pytest.approx(0.5, abs=1e-12)
    assert mid.y == pytest.approx(0.75, abs=1e-12)


@pytest.mark.parametrize("t", [-0.1, 1.0000001, 2.0])
def test_bezier_eval_rejects_out_of_range(t):
    with pytest.raises(ValueError):
        bezier_eval(ARCH, t)


def test_bezier_rejects_coincident_endpoints():
    with pytest.raises(ValidationError):
        CubicBezier(Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 0))


def test_bezier_convex_hull_property_sampled():
    rng = np.random.default_rng(7)
    for _ in range(200):
        pts = rng.uniform(-50, 50, size=(4, 2))
        curve = CubicBezier(*(Point2(*p) for p in pts))
        for t in np.linspace(0.0, 1.0, 9):
            p = bezier_eval(curve, float(t))
            assert _in_convex_hull(np.array([p.x, p.y]), pts, tol=1e-9)


def _in_convex_hull(p: np.ndarray, pts: np.ndarray, tol: float) -> bool:
    # Union of all four 3-point triangles equals the hull of four points.
    for skip in range(4):
        tri = np.delete(pts, skip, axis=0)
        if _in_triangle(p, tri, tol):
            return True
    return False


def _in_triangle(p: np.ndarray, tri: np.ndarray, tol: float) -> bool:
    signs = []
    for i in range(3):
        a, b = tri[i], tri[(i + 1) % 3]
        edge = b - a
        norm = np.hypot(*edge)
        if norm < 1e-15:
            continue
        to_p = p - a
        signs.append(float(edge[0] * to_p[1] - edge[1] * to_p[0]) / norm)
    if not signs:
        return False
    return all(s >= -tol for s in signs) or all(s <= tol for s in signs)


# --------------------------------------------------------------------------
# bezier_polyline
# --------------------------------------------------------------------------


def test_polyline_two_samples_is_parameter_split():
    pts = bezier_polyline(ARCH, 2)
    assert pts == (bezier_eval(ARCH, 0.0), bezier_eval(ARCH, 0.5), bezier_eval(ARCH, 1.0))


def test_polyline_of_collinear_controls_is_straight():
    curve = CubicBezier(Point2(0, 0), Point2(1, 1), Point2(2, 2), Point2(3, 3))
    pts = bezier_polyline(curve, 4)
    assert len(pts) == 5
    for a, b, c in zip(pts, pts[1:], pts[2:]):
        cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
        assert abs(cross) < 1e-9


def test_polyline_rejects_too_few_samples():
    with pytest.raises(ValueError):
        bezier_polyline(ARCH, 1)


def test_polyline_chord_length_against_dense_oracle():
    coarse = polyline_length(bezier_polyline(ARCH, 64))
    dense = polyline_length(bezier_polyline(ARCH, 4096))
    assert abs(coarse - dense) / dense < 1e-3


# --------------------------------------------------------------------------
# poses
# --------------------------------------------------------------------------


def test_advance_pose_east():
    pose = advance_pose(Pose(Point2(0, 0), 0.0), 50.0)
    assert (pose.position.x, pose.position.y) == (50.0, 0.0)
    assert pose.heading == 0.0


def test_advance_pose_north():
    pose = advance_pose(Pose(Point2(0, 0), math.pi / 2), 50.0)
    assert pose.position.x == pytest.approx(0.0, abs=1e-9)
    assert pose.position.y == pytest.approx(50.0, abs=1e-9)


def test_advance_pose_west():
    pose = advance_pose(Pose(Point2(3, 4), math.pi), 10.0)
    assert pose.position.x == pytest.approx(-7.0, abs=1e-9)
    assert pose.position.y == pytest.approx(4.0, abs=1e-9)
    assert pose.heading == pytest.approx(math.pi)


def test_advance_pose_rejects_negative_distance():
    with pytest.raises(ValueError):
        advance_pose(Pose(Point2(0, 0), 0.0), -1.0)


@given(
    x=finite, y=finite,
    heading=st.floats(min_value=-10, max_value=10, allow_nan=False),
    d1=st.floats(min_value=0, max_value=1e3),
    d2=st.floats(min_value=0, max_value=1e3),
)
@settings(max_examples=200, deadline=None)
def test_advance_pose_is_additive(x, y, heading, d1, d2):
    pose = Pose(Point2(x, y), heading)
    once = advance_pose(pose, d1 + d2)
    twice = advance_pose(advance_pose(pose, d1), d2)
    assert twice.position.x == pytest.approx(once.position.x, abs=1e-9)
    assert twice.position.y == pytest.approx(once.position.y, abs=1e-9)
    assert twice.heading == once.heading


@given(heading=st.floats(min_value=-100, max_value=100, allow_nan=False))
@settings(max_examples=200, deadline=None)
def test_heading_normalization(heading):
    assert 0.0 <= normalize_heading(heading) < 2.0 * math.pi
    assert 0.0 <= Pose(Point2(0, 0), heading).heading < 2.0 * math.pi


def test_pose_rejects_non_finite():
    with pytest.raises(ValidationError):
        Point2(float("nan"), 0.0)
    with pytest.raises(ValidationError):
        Pose(Point2(0, 0), float("inf"))


# --------------------------------------------------------------------------
# footprints
# --------------------------------------------------------------------------


def test_disjoint_squares_do_not_overlap():
    assert footprints_overlap(square(0, 0), square(10, 10), 0.01) is False


def test_intersecting_squares_overlap():
    assert footprints_overlap(square(0, 0), square(0.5, 0.5), 0.01) is True


def test_shared_edge_is_contact_not_overlap():
    assert footprints_overlap(square(0, 0), square(1.0, 0), 0.01) is False


def test_overlap_rejects_negative_tolerance():
    with pytest.raises(ValueError):
        footprints_overlap(square(0, 0), square(0, 0), -0.1)


@given(
    ax=st.floats(-5, 5), ay=st.floats(-5, 5),
    bx=st.floats(-5, 5), by=st.floats(-5, 5),
    side=st.floats(0.5, 3.0),
    tol=st.floats(0.0, 0.2),
)
@settings(max_examples=150, deadline=None)
def test_overlap_is_symmetric(ax, ay, bx, by, side, tol):
    a, b = square(ax, ay, side), square(bx, by, side)
    assert footprints_overlap(a, b, tol) == footprints_overlap(b, a, tol)


def test_footprint_needs_three_vertices():
    with pytest.raises(ValidationError) as exc:
        Footprint((Point2(0, 0), Point2(1, 0)))
    assert exc.value.invariant == "vertex-count"


def test_footprint_rejects_clockwise_winding():
    with pytest.raises(ValidationError) as exc:
        Footprint((Point2(0, 0), Point2(0, 1), Point2(1, 1), Point2(1, 0)))
    assert exc.value.invariant == "winding"


def test_footprint_rejects_self_intersection():
    with pytest.raises(ValidationError) as exc:
        Footprint((Point2(0, 0), Point2(2, 2), Point2(2, 0), Point2(0, 2)))
    assert exc.value.invariant in ("simple-polygon", "winding")


def test_footprint_contains_point():
    fp = square(0, 0, 2.0)
    assert fp.contains_point(Point2(1, 1))
    assert fp.contains_point(Point2(0, 0))  # boundary counts
    assert not fp.contains_point(Point2(3, 3))


def test_offset_polyline_straight_line():
    line = (Point2(0, 0), Point2(10, 0))
    left = offset_polyline(line, 2.0)
    assert left[0].y == pytest.approx(2.0)
    assert left[1].y == pytest.approx(2.0)
    right = offset_polyline(line, -2.0)
    assert right[0].y == pytest.approx(-2.0)
