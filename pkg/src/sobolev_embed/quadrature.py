"""Integrals of |x|^alpha over convex polygons containing the origin.

Each edge of the polygon together with the origin spans a triangle.  In polar
coordinates around the origin the radial integral is elementary, which leaves

    int_tri |x|^alpha dx = h^(alpha+2)/(alpha+2) * int sec(t)^(alpha+2) dt

with ``h`` the distance from the origin to the edge line and ``t`` measured
from the foot of the perpendicular.  Only this smooth angular factor is
integrated numerically, by adaptive Gauss-Legendre panels.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .geometry import ConvexPolygon

ORIGIN_MARGIN = 1e-12
SEC_GUARD = 1e-9


class QuadratureError(RuntimeError):
    """Adaptive refinement hit its depth limit; carries the best value found."""

    def __init__(self, message, value=math.nan, error=math.nan):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-12
    max_subdivisions: int = 60
    nodes_per_panel: int = 15

    def __post_init__(self):
        if not 1e-15 <= self.rel_tol <= 1e-3:
            raise ValueError(f"rel_tol must lie in [1e-15, 1e-3], got {self.rel_tol!r}")
        if self.max_subdivisions < 1 or self.nodes_per_panel < 2:
            raise ValueError("max_subdivisions >= 1 and nodes_per_panel >= 2 required")


DEFAULT_SETTINGS = QuadratureSettings()

_rules = {}


def _gauss_legendre(n):
    if n not in _rules:
        _rules[n] = np.polynomial.legendre.leggauss(n)
    return _rules[n]


MAX_PANELS = 20000
# discrepancies this close to the panel's own rounding level count as converged
_ROUNDOFF = 64.0 * 2.220446049250313e-16


def _panel(f, a, b, nodes, weights):
    """Return the rule's value and its value on |f| over [a, b]."""
    half = 0.5 * (b - a)
    vals = f(0.5 * (a + b) + half * nodes)
    return half * float(np.dot(weights, vals)), half * float(np.dot(weights, np.abs(vals)))


def _refine(f, a, b, coarse, nodes, weights, depth):
    mid = 0.5 * (a + b)
    left, labs = _panel(f, a, mid, nodes, weights)
    right, rabs = _panel(f, mid, b, nodes, weights)
    value = left + right
    diff = abs(value - coarse)
    if diff <= _ROUNDOFF * (labs + rabs):
        diff = 0.0
    return (-diff, a, b, depth, value, left, right, labs + rabs)


def adaptive_gauss_legendre(f, a, b, settings=DEFAULT_SETTINGS):
    """Integrate a smooth vectorized ``f`` over [a, b].

    Globally adaptive: the panel whose one-panel and two-panel estimates
    disagree most is bisected until the summed discrepancies fall below
    ``rel_tol`` times the integral of |f|.  Returns the value and that sum.
    """
    if a == b:
        return 0.0, 0.0
    nodes, weights = _gauss_legendre(settings.nodes_per_panel)
    whole, _ = _panel(f, a, b, nodes, weights)
    heap = [_refine(f, a, b, whole, nodes, weights, 0)]
    err_sum, abs_sum = -heap[0][0], heap[0][7]
    while True:
        if err_sum <= settings.rel_tol * abs_sum:
            # confirm the running sums exactly before stopping
            err_sum = math.fsum(-h[0] for h in heap)
            abs_sum = math.fsum(h[7] for h in heap)
            if err_sum <= settings.rel_tol * abs_sum:
                break
        worst = heap[0]
        if worst[3] + 1 >= settings.max_subdivisions or len(heap) >= MAX_PANELS:
            raise QuadratureError(
                f"adaptive quadrature did not converge on [{a}, {b}] "
                f"(depth {worst[3] + 1}, {len(heap)} panels)",
                math.fsum(h[4] for h in heap),
                math.fsum(-h[0] for h in heap),
            )
        heapq.heappop(heap)
        _, pa, pb, depth, _, left, right, pabs = worst
        mid = 0.5 * (pa + pb)
        kids = (
            _refine(f, pa, mid, left, nodes, weights, depth + 1),
            _refine(f, mid, pb, right, nodes, weights, depth + 1),
        )
        for kid in kids:
            heapq.heappush(heap, kid)
        err_sum += worst[0] - kids[0][0] - kids[1][0]
        abs_sum += kids[0][7] + kids[1][7] - pabs
    return math.fsum(h[4] for h in heap), err_sum


def _check_origin_inside(V):
    verts = V.vertices
    n = len(verts)
    for i in range(n):
        (x1, y1), (x2, y2) = verts[i], verts[(i + 1) % n]
        length = math.hypot(x2 - x1, y2 - y1)
        # signed distance of the origin to the left of the edge
        h = (x1 * y2 - x2 * y1) / length
        if h < ORIGIN_MARGIN:
            raise ValueError("the origin must lie strictly inside the polygon")


def _edge_terms(V):
    """Yield (h, t_lo, t_hi) per edge, angles measured from the foot of the perpendicular."""
    verts = V.vertices
    n = len(verts)
    for i in range(n):
        (x1, y1), (x2, y2) = verts[i], verts[(i + 1) % n]
        ex, ey = x2 - x1, y2 - y1
        length = math.hypot(ex, ey)
        # outward normal of a counterclockwise edge
        nx, ny = ey / length, -ex / length
        h = x1 * nx + y1 * ny
        phi = math.atan2(ny, nx)
        t1 = _wrap(math.atan2(y1, x1) - phi)
        t2 = _wrap(math.atan2(y2, x2) - phi)
        yield h, t1, t2


def _wrap(t):
    return (t + math.pi) % (2.0 * math.pi) - math.pi


def power_integral(V, alpha, settings=DEFAULT_SETTINGS):
    """Return ``(I, err)`` with I = int_V |x|^alpha dx for alpha > -2.

    ``V`` must contain the origin strictly inside.  ``err`` is the sum of the
    adaptive panel discrepancies, scaled like the integral.
    """
    if not isinstance(V, ConvexPolygon):
        raise TypeError("V must be a ConvexPolygon")
    if not alpha > -2.0:
        raise ValueError(f"|x|^alpha is not integrable at the origin for alpha={alpha!r} <= -2")
    _check_origin_inside(V)
    beta = alpha + 2.0

    def sec_power(t):
        return np.cos(t) ** (-beta)

    values, errors = [], []
    for h, t1, t2 in _edge_terms(V):
        if max(abs(t1), abs(t2)) >= math.pi / 2.0 - SEC_GUARD:
            raise ValueError("edge subtends an angle too close to pi/2 from its foot point")
        # split at the foot so each panel sees a monotone sec
        pieces = [(t1, 0.0), (0.0, t2)] if t1 < 0.0 < t2 else [(t1, t2)]
        factor = h**beta / beta
        for lo, hi in pieces:
            try:
                val, err = adaptive_gauss_legendre(sec_power, lo, hi, settings)
            except QuadratureError as exc:
                raise QuadratureError(str(exc), math.nan, factor * exc.error) from exc
            values.append(factor * val)
            errors.append(factor * err)
    return math.fsum(sorted(values)), math.fsum(sorted(errors))


def kernel_norm(V, r, N=2, settings=DEFAULT_SETTINGS):
    """Return ``(norm, err)`` for the L^r(V) norm of |x|^(1-N).

    For ``N == 2`` the region is a polygon.  For ``N == 1`` the kernel is
    identically one and ``V`` is an interval ``(lo, hi)``.
    """
    if not r >= 1.0:
        raise ValueError(f"need r >= 1, got {r!r}")
    if N == 1:
        lo, hi = V
        if not hi > lo:
            raise ValueError("interval must have positive length")
        return (hi - lo) ** (1.0 / r), 0.0
    if N != 2:
        raise ValueError(f"kernel_norm supports N in {{1, 2}} for polygonal regions, got N={N}")
    if math.isinf(r):
        raise ValueError("kernel |x|^-1 is unbounded near the origin; r = inf is not allowed")
    I, err = power_integral(V, r * (1.0 - N), settings)
    norm = I ** (1.0 / r)
    return norm, norm * err / (r * I)
