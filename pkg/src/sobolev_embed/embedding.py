"""Sobolev-Poincare constants D_p for convex pieces and the combined
embedding constant C_p for a domain split into such pieces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from . import geometry
from .geometry import ConvexPolygon, Decomposition
from .quadrature import DEFAULT_SETTINGS, kernel_norm
from .special import conjugate, gamma, inv, young_factor

TIE_RTOL = 1e-14


class Method(str, Enum):
    HLS1 = "hls1"
    HLS2 = "hls2"
    YOUNG = "young"
    YOUNG_INF = "young_inf"
    AUTO = "auto"


# AUTO prefers earlier entries when two methods tie
_TIE_ORDER = (Method.YOUNG, Method.YOUNG_INF, Method.HLS2, Method.HLS1)


class NoApplicableMethod(ValueError):
    pass


@dataclass(frozen=True)
class ExponentPair:
    """Target exponent ``p``, source exponent ``q`` and dimension ``N``."""

    p: float
    q: float
    N: int = 2

    def __post_init__(self):
        for name in ("p", "q"):
            v = float(getattr(self, name))
            if math.isnan(v) or v < 1.0:
                raise ValueError(f"{name} must be >= 1 or inf, got {v!r}")
            object.__setattr__(self, name, v)
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")

    @property
    def p_conj(self):
        return conjugate(self.p)

    @property
    def q_conj(self):
        return conjugate(self.q)

    @property
    def r(self):
        """Young exponent with 1/p = 1/r + 1/q - 1 (r = q' when p = inf)."""
        s = 1.0 + inv(self.p) - inv(self.q)
        return math.inf if s == 0.0 else 1.0 / s


@dataclass(frozen=True)
class PieceMetrics:
    diameter: float
    measure: float
    difference_body: object = None

    def __post_init__(self):
        if not (self.diameter > 0.0 and self.measure > 0.0):
            raise ValueError("diameter and measure must be positive")

    @classmethod
    def from_polygon(cls, P):
        return _polygon_metrics(P)

    @classmethod
    def from_interval(cls, a, b):
        L = b - a
        return cls(L, L, (-L, L))


@lru_cache(maxsize=4096)
def _polygon_metrics(P):
    return PieceMetrics(geometry.diameter(P), geometry.area(P), geometry.difference_body(P))


def applicable_methods(e):
    """Methods whose hypotheses hold for ``e``, in the order HLS1, HLS2, YOUNG, YOUNG_INF."""
    p, q, N = e.p, e.q, e.N
    out = []
    finite_p = not math.isinf(p)
    if finite_p and p > 2.0:
        upper_ok = p < math.inf if N == 1 else p <= 2.0 * N / (N - 1)
        if upper_ok and q >= p / (p - 1.0):
            out.append(Method.HLS1)
    if finite_p and q == 2.0 and N >= 2 and p > 2.0:
        if N == 2 or p < 2.0 * N / (N - 2):
            out.append(Method.HLS2)
    if finite_p and q >= 1.0 and N >= q and p >= q:
        if N == q or p < q * N / (N - q):
            out.append(Method.YOUNG)
    if math.isinf(p) and N < q:
        out.append(Method.YOUNG_INF)
    return out


def _require(method, e):
    if method not in applicable_methods(e):
        raise NoApplicableMethod(f"{method.value} does not apply to p={e.p}, q={e.q}, N={e.N}")


def dp_hls1(e, m, holder_exponent="derived"):
    """D_p from the Hardy-Littlewood-Sobolev bound with lambda = 2N/p.

    The default ``holder_exponent="derived"`` divides by |Omega|^(1/p + 1/q),
    which is what the Hoelder step L^q -> L^{p'} produces and what keeps D
    homogeneous of degree 1 + N/p - N/q.  ``"stated"`` divides by
    |Omega|^(p/(q(p-1))) instead; the two agree only when q = p'.
    """
    _require(Method.HLS1, e)
    p, q, N = e.p, e.q, e.N
    d, vol = m.diameter, m.measure
    if holder_exponent == "stated":
        mexp = p / (q * (p - 1.0)) if not math.isinf(q) else 0.0
    elif holder_exponent == "derived":
        mexp = 1.0 / p + inv(q)
    else:
        raise ValueError(f"holder_exponent must be 'stated' or 'derived', got {holder_exponent!r}")
    return (
        d ** (1.0 + 2.0 * N / p)
        * math.pi ** (N / p)
        / (N * vol**mexp)
        * gamma((p - 2.0) * N / (2.0 * p))
        / gamma((p - 1.0) * N / p)
        * (gamma(N) / gamma(N / 2.0)) ** ((p - 2.0) / p)
    )


def dp_hls2(e, m):
    """D_p for q = 2 from the L^2 Riesz-potential bound with lambda = (p+2)N/(2p)."""
    _require(Method.HLS2, e)
    p, N = e.p, e.N
    d, vol = m.diameter, m.measure
    lam = (p + 2.0) * N / (2.0 * p)
    return (
        d ** (1.0 + lam)
        * math.pi ** (lam / 2.0)
        / (N * vol)
        * gamma((p - 2.0) * N / (4.0 * p))
        / gamma((p + 2.0) * N / (4.0 * p))
        * math.sqrt(gamma(N / p) / gamma((p - 1.0) * N / p))
        * (gamma(N) / gamma(N / 2.0)) ** ((p - 2.0) / p)
    )


def young_prefactor(e, m):
    return m.diameter**e.N / (e.N * m.measure)


def dp_young(e, m, knorm):
    """D_p from the sharp Young inequality; ``knorm`` is the L^r norm of |x|^(1-N) on the difference body."""
    _require(Method.YOUNG, e)
    A = young_factor(e.r) * young_factor(e.q) * young_factor(e.p_conj)
    return young_prefactor(e, m) * A**e.N * knorm


def dp_young_inf(e, m, knorm):
    """D_inf for q > N; ``knorm`` is the L^{q'} norm of |x|^(1-N) on the difference body."""
    _require(Method.YOUNG_INF, e)
    return young_prefactor(e, m) * knorm


@lru_cache(maxsize=4096)
def _cached_knorm(V, r, N, settings):
    return kernel_norm(V, r, N, settings)


def piece_dp(method, e, m, settings=DEFAULT_SETTINGS, holder_exponent="derived"):
    """Evaluate one fixed method on a piece; returns ``(D, abs_err)``."""
    if method is Method.HLS1:
        return dp_hls1(e, m, holder_exponent), 0.0
    if method is Method.HLS2:
        return dp_hls2(e, m), 0.0
    if method in (Method.YOUNG, Method.YOUNG_INF):
        _require(method, e)
        if m.difference_body is None:
            raise ValueError("Young-type bounds need the difference body of the piece")
        r = e.r if method is Method.YOUNG else e.q_conj
        knorm, kerr = _cached_knorm(m.difference_body, r, e.N, settings)
        fn = dp_young if method is Method.YOUNG else dp_young_inf
        D = fn(e, m, knorm)
        return D, D * kerr / knorm
    raise ValueError(f"not a concrete method: {method!r}")


def resolve_methods(method, e):
    """Concrete candidates for ``method``; ``young`` at p = inf means the p = inf variant."""
    avail = applicable_methods(e)
    if method is Method.AUTO:
        cands = [m for m in _TIE_ORDER if m in avail]
    else:
        if method is Method.YOUNG and math.isinf(e.p):
            method = Method.YOUNG_INF
        cands = [method] if method in avail else []
    if not cands:
        raise NoApplicableMethod(
            f"no applicable method ({method.value}) for p={e.p:g}, q={e.q:g}, N={e.N}"
        )
    return cands


def best_piece_dp(method, e, m, settings=DEFAULT_SETTINGS, holder_exponent="derived"):
    """Smallest D over the candidate methods; returns ``(D, err, method)``."""
    best = None
    for cand in resolve_methods(method, e):
        D, err = piece_dp(cand, e, m, settings, holder_exponent)
        if best is None or D < best[0] * (1.0 - TIE_RTOL):
            best = (D, err, cand)
    return best


@dataclass
class PieceReport:
    diameter: float
    measure: float
    dp: float
    method: Method | None = None
    dp_error: float = 0.0


@dataclass
class EmbeddingResult:
    c_p: float
    n: int
    measure_term: float
    dp_term: float
    per_piece: list = field(default_factory=list, repr=False)
    quadrature_error: float = 0.0
    decomposition: Decomposition | None = field(default=None, repr=False)

    @property
    def methods(self):
        return {r.method for r in self.per_piece if r.method is not None}


def measure_term(measures, e):
    expo = inv(e.p) - inv(e.q)
    if expo == 0.0:
        return 1.0
    return max(v**expo for v in measures)


def combine_cp(pieces, e):
    """C_p = 2^(1-1/q) * max(max_i |Omega_i|^(1/p-1/q), max_i D_p(Omega_i)).

    ``pieces`` holds ``(metrics, D)`` or ``(metrics, D, method)`` tuples.
    """
    if not pieces:
        raise ValueError("combine_cp needs at least one piece")
    reports = []
    for item in pieces:
        m, D = item[0], item[1]
        method = item[2] if len(item) > 2 else None
        if not (D > 0.0 and math.isfinite(D)):
            raise ValueError(f"D_p values must be finite and positive, got {D!r}")
        reports.append(PieceReport(m.diameter, m.measure, D, method))
    mt = measure_term([r.measure for r in reports], e)
    dt = max(r.dp for r in reports)
    c = 2.0 ** (1.0 - inv(e.q)) * max(mt, dt)
    return EmbeddingResult(c, len(reports), mt, dt, reports)


def combine_cp_nested(cps, e, n=None):
    """C_p(Omega) = M * max_i C_p(Omega_i) with M = 1 (p >= q) or n^(1/p-1/q) (p < q)."""
    if not cps:
        raise ValueError("combine_cp_nested needs at least one constant")
    if n is None:
        n = len(cps)
    if n != len(cps):
        raise ValueError(f"n={n} does not match {len(cps)} constants")
    M = 1.0 if e.p >= e.q else n ** (inv(e.p) - inv(e.q))
    return M * max(cps)


def evaluate_decomposition(D, e, method=Method.AUTO, settings=DEFAULT_SETTINGS, holder_exponent="derived"):
    """Combined constant for a given decomposition, choosing per piece when ``method`` is AUTO."""
    pieces = D.pieces if isinstance(D, Decomposition) else tuple(D)
    if e.N != 2:
        raise ValueError("polygon decompositions are planar; use N = 2")
    rows, errs = [], []
    for P in pieces:
        m = PieceMetrics.from_polygon(P)
        val, err, used = best_piece_dp(method, e, m, settings, holder_exponent)
        rows.append((m, val, used))
        errs.append(err)
    res = combine_cp(rows, e)
    for rep, err in zip(res.per_piece, errs):
        rep.dp_error = err
    res.quadrature_error = max(errs)
    res.decomposition = D if isinstance(D, Decomposition) else Decomposition(pieces)
    return res


@lru_cache(maxsize=32)
def builtin_decomposition(domain, k):
    if domain == "square":
        return geometry.subdivide_unit_square(k)
    if domain == "triangle":
        return geometry.subdivide_equilateral_triangle(k)
    raise ValueError(f"unknown built-in domain {domain!r}")


def best_embedding(domain, e, method=Method.AUTO, k_max=5, settings=DEFAULT_SETTINGS, holder_exponent="derived"):
    """Smallest C_p over the uniform subdivisions n = 4**k, k = 0..k_max.

    ``domain`` is ``"square"``, ``"triangle"``, a :class:`Decomposition` or a
    single :class:`ConvexPolygon`; the latter two are evaluated as given.
    """
    method = Method(method)
    if isinstance(domain, ConvexPolygon):
        domain = Decomposition([domain], domain)
    if isinstance(domain, Decomposition):
        return evaluate_decomposition(domain, e, method, settings, holder_exponent)
    resolve_methods(method, e)
    best = None
    for k in range(k_max + 1):
        res = evaluate_decomposition(builtin_decomposition(domain, k), e, method, settings, holder_exponent)
        if best is None or res.c_p < best.c_p:
            best = res
    return best
