"""Convex polygons, difference bodies and the built-in subdivisions."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

COLLINEAR_TOL = 1e-12
OVERLAP_TOL = 1e-10
COVERING_TOL = 1e-10
MAX_SUBDIVISION_LEVEL = 8

SQRT3 = math.sqrt(3.0)


class GeometryError(ValueError):
    pass


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _shoelace(pts):
    n = len(pts)
    terms = [pts[i][0] * pts[(i + 1) % n][1] - pts[(i + 1) % n][0] * pts[i][1] for i in range(n)]
    return 0.5 * math.fsum(terms)


def _canonicalize(points):
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise GeometryError(f"a polygon needs at least 3 vertices, got {len(pts)}")
    if not all(math.isfinite(c) for pt in pts for c in pt):
        raise GeometryError("polygon vertices must be finite")
    if _shoelace(pts) < 0.0:
        pts.reverse()
    scale = max(math.dist(a, b) for a, b in combinations(pts, 2))
    if scale == 0.0:
        raise GeometryError("degenerate polygon: all vertices coincide")
    # collinearity is judged on unit-scale coordinates
    tol = COLLINEAR_TOL * scale * scale
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        n = len(pts)
        for i in range(n):
            prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % n]
            if math.dist(prev, cur) <= COLLINEAR_TOL * scale:
                del pts[i]
                changed = True
                break
            c = _cross(prev, cur, nxt)
            if abs(c) <= tol:
                # keep reflex spikes (c ~ 0 but doubling back) so they fail below
                d = (cur[0] - prev[0]) * (nxt[0] - cur[0]) + (cur[1] - prev[1]) * (nxt[1] - cur[1])
                if d >= 0.0:
                    del pts[i]
                    changed = True
                    break
    if len(pts) < 3:
        raise GeometryError("degenerate polygon: vertices are collinear")
    n = len(pts)
    turning = 0.0
    for i in range(n):
        prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % n]
        if _cross(prev, cur, nxt) <= 0.0:
            raise GeometryError("polygon is not strictly convex")
        a1 = math.atan2(cur[1] - prev[1], cur[0] - prev[0])
        a2 = math.atan2(nxt[1] - cur[1], nxt[0] - cur[0])
        turning += (a2 - a1) % (2.0 * math.pi)
    if abs(turning - 2.0 * math.pi) > 1e-9:
        raise GeometryError("polygon boundary winds more than once")
    return tuple(pts)


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices.

    The constructor accepts either orientation and drops repeated or
    collinear vertices; anything that is still not strictly convex raises
    :class:`GeometryError`.
    """

    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", _canonicalize(self.vertices))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def as_array(self):
        return np.asarray(self.vertices, dtype=float)

    def translated(self, dx, dy):
        return ConvexPolygon([(x + dx, y + dy) for x, y in self.vertices])

    def rotated(self, angle, center=(0.0, 0.0)):
        c, s = math.cos(angle), math.sin(angle)
        cx, cy = center
        return ConvexPolygon(
            [(cx + c * (x - cx) - s * (y - cy), cy + s * (x - cx) + c * (y - cy)) for x, y in self.vertices]
        )

    def scaled(self, factor):
        return ConvexPolygon([(factor * x, factor * y) for x, y in self.vertices])

    def to_dict(self):
        return {"vertices": [[x, y] for x, y in self.vertices]}

    @classmethod
    def from_dict(cls, doc):
        try:
            verts = doc["vertices"]
            pts = [(float(v[0]), float(v[1])) for v in verts if len(v) == 2]
            if len(pts) != len(verts):
                raise GeometryError("each vertex must be an [x, y] pair")
        except (KeyError, TypeError, IndexError) as exc:
            raise GeometryError(f"malformed polygon document: {exc}") from exc
        return cls(pts)


def area(P):
    return _shoelace(P.vertices)


def diameter(P):
    return max(math.dist(a, b) for a, b in combinations(P.vertices, 2))


def _lowest_index(pts):
    return min(range(len(pts)), key=lambda i: (pts[i][1], pts[i][0]))


def _edge_angle(e):
    a = math.atan2(e[1], e[0])
    return a + 2.0 * math.pi if a < 0.0 else a


def minkowski_sum(P, Q):
    """Minkowski sum of two convex polygons by merging edge vectors in angle order."""
    ps, qs = P.vertices, Q.vertices
    i0, j0 = _lowest_index(ps), _lowest_index(qs)
    ps = ps[i0:] + ps[:i0]
    qs = qs[j0:] + qs[:j0]
    pe = [(ps[(k + 1) % len(ps)][0] - ps[k][0], ps[(k + 1) % len(ps)][1] - ps[k][1]) for k in range(len(ps))]
    qe = [(qs[(k + 1) % len(qs)][0] - qs[k][0], qs[(k + 1) % len(qs)][1] - qs[k][1]) for k in range(len(qs))]
    out = [(ps[0][0] + qs[0][0], ps[0][1] + qs[0][1])]
    i = j = 0
    while i < len(pe) or j < len(qe):
        if j == len(qe) or (i < len(pe) and _edge_angle(pe[i]) <= _edge_angle(qe[j])):
            e = pe[i]
            i += 1
        else:
            e = qe[j]
            j += 1
        x, y = out[-1]
        out.append((x + e[0], y + e[1]))
    out.pop()
    return ConvexPolygon(out)


def difference_body(P):
    """The set P - P = {x - y : x, y in P}, centrally symmetric about the origin."""
    return minkowski_sum(P, ConvexPolygon([(-x, -y) for x, y in P.vertices]))


def clip_convex(subject, clip):
    """Sutherland-Hodgman intersection of two convex vertex lists (ccw).

    Returns a possibly empty or degenerate vertex list.
    """
    out = list(subject)
    m = len(clip)
    for k in range(m):
        a, b = clip[k], clip[(k + 1) % m]
        inp, out = out, []
        if not inp:
            break
        for idx, cur in enumerate(inp):
            prev = inp[idx - 1]
            cur_in = _cross(a, b, cur) >= 0.0
            prev_in = _cross(a, b, prev) >= 0.0
            if cur_in:
                if not prev_in:
                    out.append(_line_hit(prev, cur, a, b))
                out.append(cur)
            elif prev_in:
                out.append(_line_hit(prev, cur, a, b))
    return out


def _line_hit(p, q, a, b):
    dp_ = _cross(a, b, p)
    dq = _cross(a, b, q)
    t = dp_ / (dp_ - dq)
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def intersection_area(P, Q):
    pts = clip_convex(P.vertices, Q.vertices)
    return max(_shoelace(pts), 0.0) if len(pts) >= 3 else 0.0


@dataclass(frozen=True)
class Decomposition:
    pieces: tuple
    parent: ConvexPolygon | None = None

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def __len__(self):
        return len(self.pieces)

    def to_dict(self):
        doc = {"pieces": [p.to_dict() for p in self.pieces]}
        if self.parent is not None:
            doc["parent"] = self.parent.to_dict()
        return doc

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise GeometryError("decomposition document must be an object")
        if "pieces" in doc:
            if not isinstance(doc["pieces"], list) or not doc["pieces"]:
                raise GeometryError("'pieces' must be a non-empty list")
            pieces = [ConvexPolygon.from_dict(d) for d in doc["pieces"]]
            parent = ConvexPolygon.from_dict(doc["parent"]) if doc.get("parent") else None
            return cls(pieces, parent)
        poly = ConvexPolygon.from_dict(doc)
        return cls([poly], poly)


def load_document(path):
    """Read a polygon or decomposition document; a single polygon becomes a one-piece decomposition."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise GeometryError(f"cannot read polygon file {path}: {exc}") from exc
    return Decomposition.from_dict(doc)


def unit_square():
    return ConvexPolygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


def unit_triangle():
    return ConvexPolygon([(0.0, 0.0), (1.0, 0.0), (0.5, SQRT3 / 2.0)])


def _check_level(k):
    if not isinstance(k, int) or k < 0:
        raise ValueError(f"subdivision level must be a nonnegative integer, got {k!r}")
    if k > MAX_SUBDIVISION_LEVEL:
        raise ValueError(f"subdivision level {k} exceeds the cap {MAX_SUBDIVISION_LEVEL}")


def subdivide_unit_square(k):
    """Tile (0,1)^2 by 4**k axis-aligned squares of side 2**-k."""
    _check_level(k)
    m = 2**k
    h = 1.0 / m
    pieces = [
        ConvexPolygon([(i * h, j * h), ((i + 1) * h, j * h), ((i + 1) * h, (j + 1) * h), (i * h, (j + 1) * h)])
        for j in range(m)
        for i in range(m)
    ]
    return Decomposition(pieces, unit_square())


def subdivide_equilateral_triangle(k):
    """Split the unit equilateral triangle into 4**k equilateral triangles by repeated midpoint refinement."""
    _check_level(k)
    tris = [unit_triangle().vertices]
    for _ in range(k):
        nxt = []
        for a, b, c in tris:
            ab = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
            bc = ((b[0] + c[0]) / 2.0, (b[1] + c[1]) / 2.0)
            ca = ((c[0] + a[0]) / 2.0, (c[1] + a[1]) / 2.0)
            nxt += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        tris = nxt
    return Decomposition([ConvexPolygon(t) for t in tris], unit_triangle())


@dataclass
class DecompositionReport:
    passed: bool
    covering_defect: float | None
    max_overlap: float
    overlapping_pair: tuple | None
    containment_defect: float | None


def validate_decomposition(D):
    """Check that the pieces are interior-disjoint and, if a parent is known, cover it.

    The covering defect is relative to the parent area; overlaps are
    measured by convex clipping and compared with the smallest piece area.
    """
    pieces = D.pieces
    areas = [area(p) for p in pieces]
    min_area = min(areas)
    boxes = np.array([[*np.min(p.as_array(), axis=0), *np.max(p.as_array(), axis=0)] for p in pieces])
    max_overlap = 0.0
    worst = None
    for i in range(len(pieces)):
        bx = boxes[i]
        ox = np.minimum(bx[2], boxes[i + 1 :, 2]) - np.maximum(bx[0], boxes[i + 1 :, 0])
        oy = np.minimum(bx[3], boxes[i + 1 :, 3]) - np.maximum(bx[1], boxes[i + 1 :, 1])
        for off in np.nonzero((ox > 0.0) & (oy > 0.0))[0]:
            j = i + 1 + int(off)
            a = intersection_area(pieces[i], pieces[j])
            if a > max_overlap:
                max_overlap, worst = a, (i, j)
    passed = max_overlap <= OVERLAP_TOL * min_area
    covering = containment = None
    if D.parent is not None:
        parent_area = area(D.parent)
        covering = abs(math.fsum(areas) - parent_area) / parent_area
        containment = max(a - intersection_area(p, D.parent) for p, a in zip(pieces, areas)) / min_area
        containment = max(containment, 0.0)
        passed = passed and covering <= COVERING_TOL and containment <= OVERLAP_TOL
    return DecompositionReport(passed, covering, max_overlap, worst if max_overlap > 0.0 else None, containment)
