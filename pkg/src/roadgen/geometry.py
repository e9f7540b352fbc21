"""2-D geometric primitives for road construction.

Points, poses, cubic Bezier curves, circular-arc segments, polyline
offsetting, polygonal footprints and the footprint overlap test used to
reject colliding placements during scenario assembly.

Angles are radians everywhere; headings are measured counterclockwise
from the +x axis and normalized to [0, 2*pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import Point as _ShapelyPoint
from shapely.geometry import Polygon as _ShapelyPolygon

from .errors import ValidationError

TWO_PI = 2.0 * math.pi

# Quarter-circle/ellipse cubic Bezier control-point ratio.
KAPPA = 0.5522847498307936


def normalize_heading(heading: float) -> float:
    """Wrap an angle into [0, 2*pi)."""
    h = math.fmod(heading, TWO_PI)
    if h < 0.0:
        h += TWO_PI
    if h >= TWO_PI:  # fmod rounding can land exactly on 2*pi
        h = 0.0
    return h


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValidationError("finite-values", f"{name} contains {v!r}")


@dataclass(frozen=True)
class Point2:
    """A point in the plane, in meters."""

    x: float
    y: float

    def __post_init__(self):
        _require_finite("Point2", self.x, self.y)

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scaled(self, factor: float) -> "Point2":
        return Point2(self.x * factor, self.y * factor)

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


def heading_vector(heading: float) -> Point2:
    """Unit vector pointing along ``heading``."""
    return Point2(math.cos(heading), math.sin(heading))


def left_normal(heading: float) -> Point2:
    """Unit vector 90 degrees counterclockwise from ``heading``."""
    return Point2(-math.sin(heading), math.cos(heading))


@dataclass(frozen=True)
class Pose:
    """Position plus travel direction. Heading is normalized on construction."""

    position: Point2
    heading: float

    def __post_init__(self):
        _require_finite("Pose.heading", self.heading)
        object.__setattr__(self, "heading", normalize_heading(self.heading))

    def local_to_world(self, p: Point2) -> Point2:
        """Map a point from this pose's frame (origin here, +x = heading)."""
        c, s = math.cos(self.heading), math.sin(self.heading)
        return Point2(
            self.position.x + c * p.x - s * p.y,
            self.position.y + s * p.x + c * p.y,
        )

    def local_pose(self, p: Point2, heading: float) -> "Pose":
        return Pose(self.local_to_world(p), self.heading + heading)


def advance_pose(start: Pose, distance: float) -> Pose:
    """Translate a pose by ``distance`` meters along its heading."""
    if distance < 0.0:
        raise ValueError(f"distance must be >= 0, got {distance}")
    d = heading_vector(start.heading)
    return Pose(start.position + d.scaled(distance), start.heading)


@dataclass(frozen=True)
class CubicBezier:
    """Cubic Bezier curve defined by four control points."""

    p0: Point2
    p1: Point2
    p2: Point2
    p3: Point2

    def __post_init__(self):
        if self.p0 == self.p3:
            raise ValidationError("distinct-endpoints", "p0 equals p3")

    @property
    def control_points(self) -> tuple[Point2, Point2, Point2, Point2]:
        return (self.p0, self.p1, self.p2, self.p3)

    def end_tangent_heading(self) -> float:
        """Heading of the curve's tangent at t=1 (analytic, with degenerate fallback)."""
        for anchor in (self.p2, self.p1, self.p0):
            d = self.p3 - anchor
            if d.x != 0.0 or d.y != 0.0:
                return normalize_heading(math.atan2(d.y, d.x))
        raise ValidationError("distinct-endpoints", "all control points coincide")

    def start_tangent_heading(self) -> float:
        for anchor in (self.p1, self.p2, self.p3):
            d = anchor - self.p0
            if d.x != 0.0 or d.y != 0.0:
                return normalize_heading(math.atan2(d.y, d.x))
        raise ValidationError("distinct-endpoints", "all control points coincide")


def bezier_eval(curve: CubicBezier, t: float) -> Point2:
    """Evaluate the cubic Bernstein polynomial at parameter ``t`` in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must be within [0, 1], got {t}")
    mt = 1.0 - t
    a = mt * mt * mt
    b = 3.0 * mt * mt * t
    c = 3.0 * mt * t * t
    d = t * t * t
    p0, p1, p2, p3 = curve.control_points
    return Point2(
        a * p0.x + b * p1.x + c * p2.x + d * p3.x,
        a * p0.y + b * p1.y + c * p2.y + d * p3.y,
    )


def bezier_polyline(curve: CubicBezier, samples: int) -> tuple[Point2, ...]:
    """Sample the curve at ``samples``+1 uniformly spaced parameter values.

    The first point is exactly p0 and the last exactly p3.
    """
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    return tuple(bezier_eval(curve, i / samples) for i in range(samples + 1))


def polyline_length(points: tuple[Point2, ...] | list[Point2]) -> float:
    return sum(points[i].distance_to(points[i + 1]) for i in range(len(points) - 1))


def offset_polyline_xy(xy: np.ndarray, offset: float, closed: bool = False) -> np.ndarray:
    """Offset an (N, 2) polyline laterally; positive offsets go to the left
    of travel.

    Uses averaged segment normals with a clamped miter correction, which is
    well behaved for the smooth, gently curving polylines produced here.
    For ``closed`` polylines the first and last points must coincide (ring).
    """
    n = xy.shape[0]
    if n < 2:
        raise ValueError("polyline needs at least 2 points")
    deltas = np.diff(xy, axis=0)
    lengths = np.hypot(deltas[:, 0], deltas[:, 1])
    lengths[lengths == 0.0] = 1.0
    dirs = deltas / lengths[:, None]
    if closed:
        d_prev = np.roll(dirs, 1, axis=0)
        d_next = dirs
        d_prev_full = np.vstack([d_prev, d_prev[:1]])
        d_next_full = np.vstack([d_next, d_next[:1]])
    else:
        d_prev_full = np.vstack([dirs[:1], dirs])
        d_next_full = np.vstack([dirs, dirs[-1:]])
    m = d_prev_full + d_next_full
    m_len = np.hypot(m[:, 0], m[:, 1])
    degenerate = m_len < 1e-12  # 180-degree reversal; fall back to prev normal
    m_len[degenerate] = 1.0
    normals = np.column_stack([-m[:, 1], m[:, 0]]) / m_len[:, None]
    normals[degenerate] = np.column_stack(
        [-d_prev_full[degenerate, 1], d_prev_full[degenerate, 0]]
    )
    dot = np.sum(d_prev_full * d_next_full, axis=1)
    cos_half = np.sqrt(np.clip((1.0 + dot) / 2.0, 0.0, 1.0))
    scale = offset / np.maximum(cos_half, 0.25)
    scale[degenerate] = offset
    return xy + normals * scale[:, None]


def offset_polyline(
    points: tuple[Point2, ...] | list[Point2],
    offset: float,
    closed: bool = False,
) -> tuple[Point2, ...]:
    """Point2 wrapper around :func:`offset_polyline_xy`."""
    xy = np.array([(p.x, p.y) for p in points], dtype=float)
    return tuple(Point2(float(x), float(y)) for x, y in offset_polyline_xy(xy, offset, closed))


def _shoelace_area(coords: np.ndarray) -> float:
    x, y = coords[:, 0], coords[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


@dataclass(frozen=True)
class Footprint:
    """Simple counterclockwise polygon describing the area a component covers."""

    polygon: tuple[Point2, ...]
    _shapely: _ShapelyPolygon = field(init=False, repr=False, compare=False)
    _shrunk: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        pts = tuple(self.polygon)
        object.__setattr__(self, "polygon", pts)
        if len(pts) < 3:
            raise ValidationError("vertex-count", f"{len(pts)} < 3 vertices")
        coords = np.array([(p.x, p.y) for p in pts])
        area = _shoelace_area(coords)
        if area <= 0.0:
            raise ValidationError(
                "winding", f"signed area {area}; polygon must be counterclockwise with area > 0"
            )
        poly = _ShapelyPolygon(coords)
        if not poly.is_valid:
            raise ValidationError("simple-polygon", "polygon self-intersects or is degenerate")
        object.__setattr__(self, "_shapely", poly)

    @property
    def area(self) -> float:
        return self._shapely.area

    def as_shapely(self) -> _ShapelyPolygon:
        return self._shapely

    def shrunk(self, tolerance: float):
        """Polygon eroded inward by ``tolerance``; cached per tolerance."""
        cached = self._shrunk.get(tolerance)
        if cached is None:
            cached = self._shapely.buffer(-tolerance)
            self._shrunk[tolerance] = cached
        return cached

    def contains_point(self, point: Point2, tolerance: float = 1e-9) -> bool:
        """True if the point lies inside or within ``tolerance`` of the boundary."""
        p = _ShapelyPoint(point.x, point.y)
        return bool(self._shapely.covers(p)) or self._shapely.distance(p) <= tolerance

    def bounds(self) -> tuple[float, float, float, float]:
        return self._shapely.bounds


def footprints_overlap(a: Footprint, b: Footprint, tolerance: float = 0.05) -> bool:
    """True if the interiors, each shrunk inward by ``tolerance``, intersect.

    Boundary contact within the tolerance is not overlap: connected
    components legitimately share their joint cross-section.
    """
    if tolerance < 0.0:
        raise ValueError(f"tolerance must be >= 0, got {tolerance}")
    if tolerance > 0.0:
        pa, pb = a.shrunk(tolerance), b.shrunk(tolerance)
        if pa.is_empty or pb.is_empty:
            return False
    else:
        pa, pb = a.as_shapely(), b.as_shapely()
    ba, bb = pa.bounds, pb.bounds
    if ba[0] > bb[2] or bb[0] > ba[2] or ba[1] > bb[3] or bb[1] > ba[3]:
        return False
    # Interior-interior intersection test; plain intersects() would also
    # flag pure boundary contact.
    return bool(pa.relate_pattern(pb, "T********"))


@dataclass(frozen=True)
class StraightSegment:
    """Straight centerline piece starting at ``start``."""

    start: Pose
    length: float

    def end_pose(self) -> Pose:
        return advance_pose(self.start, self.length)

    def sample_xy(self, samples: int) -> np.ndarray:
        t = np.linspace(0.0, self.length, samples + 1)
        d = heading_vector(self.start.heading)
        return np.column_stack(
            [self.start.position.x + d.x * t, self.start.position.y + d.y * t]
        )

    def sample(self, samples: int) -> tuple[Point2, ...]:
        return _as_points(self.sample_xy(samples))

    # A straight strip is exact with just its two end cross-sections.
    footprint_samples = 1


@dataclass(frozen=True)
class ArcSegment:
    """Circular-arc centerline piece; positive curvature turns left."""

    start: Pose
    length: float
    curvature: float

    def pose_at(self, s: float) -> Pose:
        h0 = self.start.heading
        h = h0 + self.curvature * s
        k = self.curvature
        x = self.start.position.x + (math.sin(h) - math.sin(h0)) / k
        y = self.start.position.y - (math.cos(h) - math.cos(h0)) / k
        return Pose(Point2(x, y), h)

    def end_pose(self) -> Pose:
        return self.pose_at(self.length)

    def sample_xy(self, samples: int) -> np.ndarray:
        h0 = self.start.heading
        k = self.curvature
        h = h0 + k * np.linspace(0.0, self.length, samples + 1)
        return np.column_stack(
            [
                self.start.position.x + (np.sin(h) - math.sin(h0)) / k,
                self.start.position.y - (np.cos(h) - math.cos(h0)) / k,
            ]
        )

    def sample(self, samples: int) -> tuple[Point2, ...]:
        return _as_points(self.sample_xy(samples))

    footprint_samples = 32


@dataclass(frozen=True)
class BezierSegment:
    """Cubic-Bezier centerline piece."""

    curve: CubicBezier

    @property
    def length(self) -> float:
        return self.arc_length()

    def end_pose(self) -> Pose:
        return Pose(self.curve.p3, self.curve.end_tangent_heading())

    def sample_xy(self, samples: int) -> np.ndarray:
        t = np.linspace(0.0, 1.0, samples + 1)
        mt = 1.0 - t
        a, b, c, d = mt**3, 3.0 * mt**2 * t, 3.0 * mt * t**2, t**3
        p0, p1, p2, p3 = self.curve.control_points
        return np.column_stack(
            [
                a * p0.x + b * p1.x + c * p2.x + d * p3.x,
                a * p0.y + b * p1.y + c * p2.y + d * p3.y,
            ]
        )

    def sample(self, samples: int) -> tuple[Point2, ...]:
        return bezier_polyline(self.curve, samples)

    def arc_length(self, samples: int = 128) -> float:
        xy = self.sample_xy(samples)
        return float(np.sum(np.hypot(*np.diff(xy, axis=0).T)))

    footprint_samples = 32


def _as_points(xy: np.ndarray) -> tuple[Point2, ...]:
    return tuple(Point2(float(x), float(y)) for x, y in xy)


Segment = StraightSegment | ArcSegment | BezierSegment
