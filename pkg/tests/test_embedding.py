import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sobolev_embed import (
    ConvexPolygon,
    Decomposition,
    ExponentPair,
    Method,
    NoApplicableMethod,
    PieceMetrics,
    applicable_methods,
    best_embedding,
    combine_cp,
    combine_cp_nested,
    dp_hls1,
    dp_hls2,
    dp_young,
    dp_young_inf,
    kernel_norm,
    subdivide_equilateral_triangle,
    subdivide_unit_square,
)
from sobolev_embed.embedding import builtin_decomposition, piece_dp

INF = math.inf
SQRT3 = math.sqrt(3.0)


def square_piece(side):
    return ConvexPolygon([(0, 0), (side, 0), (side, side), (0, side)])


def metrics(P):
    return PieceMetrics.from_polygon(P)


# ---- applicability ---------------------------------------------------------


def test_applicable_examples():
    assert set(applicable_methods(ExponentPair(3, 2))) == {Method.HLS1, Method.HLS2, Method.YOUNG}
    assert set(applicable_methods(ExponentPair(5, 2))) == {Method.HLS2, Method.YOUNG}
    assert applicable_methods(ExponentPair(INF, 3)) == [Method.YOUNG_INF]


def test_table_gap_is_empty():
    assert applicable_methods(ExponentPair(5, 3)) == []
    with pytest.raises(NoApplicableMethod):
        best_embedding("square", ExponentPair(5, 3))


def test_explicit_method_must_apply():
    with pytest.raises(NoApplicableMethod):
        best_embedding("square", ExponentPair(5, 2), Method.HLS1)
    with pytest.raises(NoApplicableMethod):
        dp_hls1(ExponentPair(5, 2), metrics(square_piece(1)))


@pytest.mark.parametrize("p, q", [(0.5, 2), (2, 0.9), (math.nan, 2)])
def test_exponent_pair_rejects(p, q):
    with pytest.raises(ValueError):
        ExponentPair(p, q)


@given(st.floats(1.0, 1e4), st.floats(1.0, 1e4))
def test_exponent_identity(p, q):
    e = ExponentPair(max(p, q), min(p, q))
    if math.isinf(e.r):
        return
    assert abs(1 / e.r + 1 / e.q + 1 / e.p_conj - 2.0) <= 1e-14
    assert abs(1 / e.p - (1 / e.r + 1 / e.q - 1)) <= 1e-14


# ---- the four formulas -----------------------------------------------------


def test_hls1_direct_value():
    e = ExponentPair(3, 2)
    m = PieceMetrics(1.0, 1.0)
    mpmath.mp.dps = 30
    g = mpmath.gamma
    want = mpmath.pi ** (mpmath.mpf(2) / 3) / 2 * g(mpmath.mpf(1) / 3) / g(mpmath.mpf(4) / 3) * (g(2) / g(1)) ** (
        mpmath.mpf(1) / 3
    )
    assert dp_hls1(e, m) == pytest.approx(float(want), rel=1e-13)
    assert dp_hls1(e, m) == pytest.approx(3.2175440956665384, rel=1e-13)
    # both Hoelder exponents coincide on unit measure
    assert dp_hls1(e, m, "stated") == dp_hls1(e, m, "derived")


def test_hls1_holder_exponents_agree_when_q_is_conjugate():
    e = ExponentPair(3, 1.5)
    m = metrics(square_piece(0.3))
    assert dp_hls1(e, m, "stated") == pytest.approx(dp_hls1(e, m, "derived"), rel=1e-14)


@pytest.mark.parametrize("k, p", [(3, 3.0), (2, 4.0)])
def test_hls1_square_measure_dominated(k, p):
    res = best_embedding(builtin_decomposition("square", k), ExponentPair(p, 2), Method.HLS1)
    assert res.measure_term == pytest.approx(2.0, rel=1e-14)
    assert res.dp_term < res.measure_term
    assert res.c_p == pytest.approx(2 * math.sqrt(2), rel=1e-14)


def test_hls2_formula_scaling():
    # stated d-exponent 1 + (p+2)N/(2p) with |Omega| ~ d^2 gives homogeneity degree 2/p
    e = ExponentPair(3, 2)
    m1, m2 = metrics(square_piece(1.0)), metrics(square_piece(0.5))
    assert dp_hls2(e, m2) / dp_hls2(e, m1) == pytest.approx(0.5 ** (2 / 3), rel=1e-13)


def test_hls2_triangle_single_piece():
    res = best_embedding(builtin_decomposition("triangle", 0), ExponentPair(3, 2), Method.HLS2)
    assert res.c_p == pytest.approx(25.741822, rel=1e-6)
    res = best_embedding(builtin_decomposition("triangle", 0), ExponentPair(10, 2), Method.HLS2)
    assert res.c_p == pytest.approx(10.732444, rel=2e-6)


def test_young_interval():
    L = 1.0
    e = ExponentPair(1, 1, N=1)
    m = PieceMetrics.from_interval(0.0, L)
    knorm, _ = kernel_norm(m.difference_body, e.r, N=1)
    assert dp_young(e, m, knorm) == pytest.approx(2.0, rel=1e-15)
    m3 = PieceMetrics.from_interval(0.0, 3.0)
    assert dp_young(e, m3, kernel_norm(m3.difference_body, 1.0, N=1)[0]) == pytest.approx(6.0, rel=1e-15)


@pytest.mark.parametrize(
    "domain, p, q, method, value, n",
    [
        ("square", 3, 2, Method.YOUNG, 2.6470760, 16),
        ("square", 80, 2, Method.YOUNG, 15.443710, 64),
        ("square", INF, 3, Method.YOUNG_INF, 5.611920, 16),
        ("square", INF, 10, Method.YOUNG_INF, 2.828428, 64),
    ],
)
def test_square_young_reference_cells(domain, p, q, method, value, n):
    res = best_embedding(domain, ExponentPair(p, q), method)
    assert res.c_p == pytest.approx(value, rel=1e-5)
    assert res.n == n


def test_young_inf_formula():
    e = ExponentPair(INF, 3)
    m = metrics(square_piece(0.25))
    kn, _ = kernel_norm(m.difference_body, 1.5)
    assert dp_young_inf(e, m, kn) == pytest.approx(m.diameter**2 / (2 * m.measure) * kn, rel=1e-15)


# ---- combination -----------------------------------------------------------


def test_combine_examples():
    res = combine_cp([(PieceMetrics(1.0, 1.0), 1.0)], ExponentPair(2, 2))
    assert res.c_p == pytest.approx(math.sqrt(2), rel=1e-15)
    # 16 triangles of side 1/4 at p = inf, q = 10: the measure term alone
    tri = [(metrics(P), 1e-3) for P in subdivide_equilateral_triangle(2).pieces]
    res = combine_cp(tri, ExponentPair(INF, 10))
    assert res.measure_term == pytest.approx((SQRT3 / 64) ** -0.1, rel=1e-13)
    assert res.c_p == pytest.approx(2.677251, rel=1e-6)


def test_combine_rejects_bad_input():
    with pytest.raises(ValueError):
        combine_cp([], ExponentPair(3, 2))
    with pytest.raises(ValueError):
        combine_cp([(PieceMetrics(1.0, 1.0), 0.0)], ExponentPair(3, 2))


def test_combine_conventions_at_infinity():
    res = combine_cp([(PieceMetrics(1.0, 0.01), 0.5)], ExponentPair(INF, INF))
    assert res.measure_term == 1.0
    assert res.c_p == 2.0


@given(st.lists(st.floats(0.01, 10.0), min_size=1, max_size=8), st.randoms(use_true_random=False))
def test_combine_permutation_and_monotone(ds, rnd):
    e = ExponentPair(4, 2)
    pieces = [(PieceMetrics(1.0, 0.1 * (i + 1)), d) for i, d in enumerate(ds)]
    base = combine_cp(pieces, e).c_p
    shuffled = pieces[:]
    rnd.shuffle(shuffled)
    assert combine_cp(shuffled, e).c_p == base
    bumped = [(m, d * 1.5 if i == 0 else d) for i, (m, d) in enumerate(pieces)]
    assert combine_cp(bumped, e).c_p >= base


def test_nested_examples():
    assert combine_cp_nested([2.0, 3.0], ExponentPair(4, 2)) == 3.0
    assert combine_cp_nested([2.0, 3.0], ExponentPair(1, 2), n=2) == pytest.approx(3 * math.sqrt(2), rel=1e-15)
    for e in (ExponentPair(1, 2), ExponentPair(5, 2), ExponentPair(INF, 3)):
        assert combine_cp_nested([1.7], e) == 1.7
    with pytest.raises(ValueError):
        combine_cp_nested([], ExponentPair(3, 2))


# ---- invariants ------------------------------------------------------------


@pytest.mark.parametrize("p", [3.0, 5.0, 10.0])
@pytest.mark.parametrize("s", [0.5, 2.0])
def test_young_homogeneity(p, s):
    e = ExponentPair(p, 2.0)
    m0 = metrics(square_piece(0.5))
    m1 = metrics(square_piece(0.5 * s))
    d0 = dp_young(e, m0, kernel_norm(m0.difference_body, e.r)[0])
    d1 = dp_young(e, m1, kernel_norm(m1.difference_body, e.r)[0])
    assert d1 == pytest.approx(d0 * s ** (1 + 2 / p - 1), rel=1e-10)


@pytest.mark.parametrize("p", [3.0, 4.0])
def test_hls1_homogeneity(p):
    e = ExponentPair(p, 2.0)
    d0 = dp_hls1(e, metrics(square_piece(1.0)))
    d1 = dp_hls1(e, metrics(square_piece(0.5)))
    assert d1 == pytest.approx(d0 * 0.5 ** (2 / p), rel=1e-13)


@pytest.mark.parametrize(
    "e, method",
    [
        (ExponentPair(3, 2), Method.HLS1),
        (ExponentPair(3, 2), Method.HLS2),
        (ExponentPair(3, 2), Method.YOUNG),
        (ExponentPair(INF, 4), Method.YOUNG_INF),
    ],
)
def test_congruence_invariance(e, method):
    P = subdivide_equilateral_triangle(1).pieces[0]
    ref, _ = piece_dp(method, e, metrics(P))
    for angle, dx, dy in [(0.3, 1.0, -2.0), (math.pi / 3, 0.0, 0.0), (2.0, 5.5, 0.25)]:
        D, _ = piece_dp(method, e, metrics(P.rotated(angle).translated(dx, dy)))
        assert D == pytest.approx(ref, rel=1e-12)
    vals = [piece_dp(method, e, metrics(Q))[0] for Q in subdivide_equilateral_triangle(2).pieces]
    assert max(vals) == pytest.approx(min(vals), rel=1e-12)


@pytest.mark.parametrize("p", [3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 60, 70, 80])
def test_subdivision_search_is_unimodal(p):
    e = ExponentPair(float(p), 2.0)
    mts, dts = [], []
    for k in range(6):
        res = best_embedding(builtin_decomposition("square", k), e, Method.YOUNG)
        mts.append(res.measure_term)
        dts.append(res.dp_term)
    assert all(b > a for a, b in zip(mts, mts[1:]))
    assert all(b < a for a, b in zip(dts, dts[1:]))


@pytest.mark.parametrize("domain", ["square", "triangle"])
@pytest.mark.parametrize("p, q", [(3, 2), (4, 2), (10, 2), (INF, 3), (INF, 10), (1.5, 1.5)])
def test_auto_not_worse_than_fixed(domain, p, q):
    e = ExponentPair(p, q)
    auto = best_embedding(domain, e, Method.AUTO)
    for m in applicable_methods(e):
        fixed = best_embedding(domain, e, m)
        assert auto.c_p <= fixed.c_p * (1 + 1e-14)


def test_auto_tie_prefers_young():
    # p = q = 2 on a single piece: only Young applies; pick it deterministically
    e = ExponentPair(2, 2)
    res = best_embedding("square", e, Method.AUTO, k_max=0)
    assert res.methods == {Method.YOUNG}


def test_result_invariant_exact():
    e = ExponentPair(3, 2)
    res = best_embedding("triangle", e)
    assert res.c_p == 2.0 ** (1 - 1 / e.q) * max(res.measure_term, res.dp_term)


def test_user_decomposition_is_not_searched():
    D = subdivide_unit_square(1)
    res = best_embedding(D, ExponentPair(3, 2), Method.YOUNG)
    assert res.n == 4
    single = best_embedding(square_piece(1.0), ExponentPair(3, 2), Method.YOUNG)
    assert single.n == 1


def test_mixed_decomposition():
    # an L-shape as three unit squares
    pieces = [square_piece(1.0), square_piece(1.0).translated(1, 0), square_piece(1.0).translated(0, 1)]
    res = best_embedding(Decomposition(pieces), ExponentPair(3, 2))
    one = best_embedding(square_piece(1.0), ExponentPair(3, 2))
    assert res.c_p == pytest.approx(one.c_p, rel=1e-14)


def test_results_deterministic():
    a = best_embedding("triangle", ExponentPair(7, 2))
    b = best_embedding("triangle", ExponentPair(7, 2))
    assert a.c_p == b.c_p and a.n == b.n
