"""Numerical falsification checks for computed constants.

Smooth trial functions are integrated on each piece with a degree-5
triangle rule over a uniformly refined fan triangulation, and the
Sobolev-Poincare and embedding inequalities are tested against the
constants.  Passing proves nothing; a failure means a constant is wrong.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import ConvexPolygon, Decomposition
from .special import inv

SLACK = 1e-3
MIN_GRADIENT = 1e-8
DEFAULT_SEED = 20170801

# Dunavant degree-5 rule: barycentric points and weights (weights sum to 1)
_A1, _B1 = 0.059715871789770, 0.470142064105115
_A2, _B2 = 0.797426985353087, 0.101286507323456
_BARY = np.array(
    [
        [1 / 3, 1 / 3, 1 / 3],
        [_A1, _B1, _B1],
        [_B1, _A1, _B1],
        [_B1, _B1, _A1],
        [_A2, _B2, _B2],
        [_B2, _A2, _B2],
        [_B2, _B2, _A2],
    ]
)
_W = np.array([0.225] + [0.132394152788506] * 3 + [0.125939180544827] * 3)


@dataclass(frozen=True)
class TrialFunction:
    """u(x, y) = sin(a pi x + phi1) cos(b pi y + phi2) + c (x^2 - y)."""

    a: int = 1
    b: int = 1
    phi1: float = 0.0
    phi2: float = 0.0
    c: float = 0.0

    @classmethod
    def random(cls, rng):
        return cls(
            int(rng.integers(1, 4)),
            int(rng.integers(1, 4)),
            float(rng.uniform(0.0, 2.0 * math.pi)),
            float(rng.uniform(0.0, 2.0 * math.pi)),
            float(rng.uniform(-1.0, 1.0)),
        )

    def value(self, x, y):
        ax = self.a * math.pi * x + self.phi1
        by = self.b * math.pi * y + self.phi2
        return np.sin(ax) * np.cos(by) + self.c * (x * x - y)

    def gradient(self, x, y):
        ax = self.a * math.pi * x + self.phi1
        by = self.b * math.pi * y + self.phi2
        ux = self.a * math.pi * np.cos(ax) * np.cos(by) + 2.0 * self.c * x
        uy = -self.b * math.pi * np.sin(ax) * np.sin(by) - self.c
        return ux, uy


class _Callable:
    """Adapter for arbitrary callables ``value(x, y)`` / ``gradient(x, y)``."""

    def __init__(self, value, gradient):
        self.value = value
        self.gradient = gradient


def constant_function(v):
    return _Callable(lambda x, y: np.full_like(x, v), lambda x, y: (np.zeros_like(x), np.zeros_like(x)))


@dataclass
class QuadratureMesh:
    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    level: int

    @property
    def measure(self):
        return float(self.w.sum())


def _refine(tris):
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
    return np.concatenate(
        [np.stack(t, axis=1) for t in ((a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca))]
    )


def quadrature_mesh(P, level):
    """Fan triangulation of ``P`` refined ``level`` times, with degree-5 nodes."""
    if not 0 <= level <= 10:
        raise ValueError(f"level must lie in [0, 10], got {level}")
    V = P.as_array()
    tris = np.stack([np.stack([V[0], V[i], V[i + 1]]) for i in range(1, len(V) - 1)])
    for _ in range(level):
        tris = _refine(tris)
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    areas = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    pts = np.einsum("kj,tjd->tkd", _BARY, tris)
    w = areas[:, None] * _W[None, :]
    return QuadratureMesh(pts[..., 0].ravel(), pts[..., 1].ravel(), w.ravel(), level)


def _lp(values, w, p):
    a = np.abs(values)
    if math.isinf(p):
        return float(a.max())
    return float(np.dot(w, a**p)) ** (1.0 / p)


@dataclass
class DiscreteNorms:
    lp_deviation: float
    lq_gradient: float
    lq_full: float
    resolution: int
    mean: float = 0.0


def discrete_norms(P, u, e, level=6, mesh=None):
    """L^p norm of u - mean(u), L^q norm of |grad u| and the W^{1,q} norm of u on ``P``."""
    if mesh is None:
        mesh = quadrature_mesh(P, level)
    vals = u.value(mesh.x, mesh.y)
    gx, gy = u.gradient(mesh.x, mesh.y)
    grad = np.hypot(gx, gy)
    mean = float(np.dot(mesh.w, vals)) / mesh.measure
    dev = _lp(vals - mean, mesh.w, e.p)
    lq_grad = _lp(grad, mesh.w, e.q)
    lq_u = _lp(vals, mesh.w, e.q)
    full = lq_u + lq_grad if math.isinf(e.q) else (lq_u**e.q + lq_grad**e.q) ** (1.0 / e.q)
    return DiscreteNorms(dev, lq_grad, full, mesh.level, mean)


@dataclass
class CheckReport:
    passed: bool
    max_ratio: float
    trials: int
    skipped: int = 0
    violations: list = field(default_factory=list)


def poincare_check(P, dp, e, trials=100, seed=DEFAULT_SEED, level=6, functions=None):
    """Test ||u - u_P||_p <= dp * ||grad u||_q on random trial functions.

    Functions with ||grad u||_q below 1e-8 are skipped (the ratio is 0/0).
    """
    rng = np.random.default_rng(seed)
    mesh = quadrature_mesh(P, level)
    funcs = functions if functions is not None else [TrialFunction.random(rng) for _ in range(trials)]
    worst, skipped, bad = 0.0, 0, []
    for u in funcs:
        nrm = discrete_norms(P, u, e, mesh=mesh)
        if nrm.lq_gradient < MIN_GRADIENT:
            skipped += 1
            continue
        ratio = nrm.lp_deviation / (dp * nrm.lq_gradient)
        worst = max(worst, ratio)
        if ratio > 1.0 + SLACK:
            bad.append((u, ratio))
    return CheckReport(not bad, worst, len(funcs), skipped, bad)


def embedding_check(D, cp, e, trials=100, seed=DEFAULT_SEED, level=None, functions=None):
    """Test ||u||_p <= cp * ||u||_{W^{1,q}} over the whole decomposition.

    Norms are assembled from per-piece quadrature.  By default each piece
    is refined so cells are about 1/64 of the parent's size.
    """
    pieces = D.pieces if isinstance(D, Decomposition) else tuple(D)
    if level is None:
        k = round(math.log(len(pieces), 4)) if len(pieces) > 1 else 0
        level = max(2, 6 - k)
    meshes = [quadrature_mesh(P, level) for P in pieces]
    x = np.concatenate([m.x for m in meshes])
    y = np.concatenate([m.y for m in meshes])
    w = np.concatenate([m.w for m in meshes])
    rng = np.random.default_rng(seed)
    funcs = functions if functions is not None else [TrialFunction.random(rng) for _ in range(trials)]
    worst, bad = 0.0, []
    for u in funcs:
        vals = u.value(x, y)
        gx, gy = u.gradient(x, y)
        grad = np.hypot(gx, gy)
        lhs = _lp(vals, w, e.p)
        lu, lg = _lp(vals, w, e.q), _lp(grad, w, e.q)
        sob = lu + lg if math.isinf(e.q) else (lu**e.q + lg**e.q) ** inv(e.q)
        ratio = lhs / (cp * sob)
        worst = max(worst, ratio)
        if ratio > 1.0 + SLACK:
            bad.append((u, ratio))
    return CheckReport(not bad, worst, len(funcs), 0, bad)
