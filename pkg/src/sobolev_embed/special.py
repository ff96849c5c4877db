"""Gamma function and the closed-form best constants built from it.

Exponents are plain floats; ``math.inf`` stands for the exponent infinity and
``1/inf`` is taken as zero throughout.
"""

import math

INF = math.inf

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
GAMMA_MAX_ARG = 171.0


def gamma(x):
    """Gamma function for real ``0 < x <= 171``.

    Relative error stays below 1e-14 on (0, 30] and around 1e-13 near the
    overflow limit, where rounding of the large power dominates.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"gamma is only defined here for x > 0, got {x!r}")
    if x > GAMMA_MAX_ARG:
        raise OverflowError(f"gamma({x!r}) overflows double precision")
    if x < 0.5:
        return gamma(x + 1.0) / x
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power so t**(z + 0.5) cannot overflow before exp(-t) is applied
    half = t ** ((z + 0.5) / 2.0)
    return _SQRT_2PI * acc * half * (half * math.exp(-t))


def _check_exponent(m):
    if math.isnan(m) or m < 1.0:
        raise ValueError(f"Lebesgue exponent must be >= 1 or inf, got {m!r}")


def inv(m):
    """Reciprocal with the convention 1/inf = 0."""
    return 0.0 if math.isinf(m) else 1.0 / m


def conjugate(m):
    """Hoelder conjugate m' with 1/m + 1/m' = 1 (1' = inf, inf' = 1)."""
    _check_exponent(m)
    if m == 1.0:
        return INF
    if math.isinf(m):
        return 1.0
    return m / (m - 1.0)


def young_factor(m):
    """Beckner's factor A_m of the sharp Young convolution inequality."""
    _check_exponent(m)
    if m == 1.0 or math.isinf(m):
        return 1.0
    return math.sqrt(m ** (2.0 / m - 1.0) * (m - 1.0) ** (1.0 - 1.0 / m))


def hls_constant(lam, N):
    """Sharp Hardy-Littlewood-Sobolev constant for L^{2N/(2N-lam)} -> L^{2N/lam}."""
    if not 0.0 < lam < N:
        raise ValueError(f"need 0 < lambda < N, got lambda={lam!r}, N={N!r}")
    return (
        math.pi ** (lam / 2.0)
        * gamma(N / 2.0 - lam / 2.0)
        / gamma(N - lam / 2.0)
        * (gamma(N / 2.0) / gamma(N)) ** (-1.0 + lam / N)
    )


def hls_constant_tilde(lam, N):
    """Sharp constant of the L^2 -> L^{2N/(2 lam - N)} Riesz potential bound."""
    if not N < 2.0 * lam < 2.0 * N:
        raise ValueError(f"need N < 2*lambda < 2N, got lambda={lam!r}, N={N!r}")
    return (
        math.pi ** (lam / 2.0)
        * gamma(N / 2.0 - lam / 2.0)
        / gamma(lam / 2.0)
        * math.sqrt(gamma(lam - N / 2.0) / gamma(1.5 * N - lam))
        * (gamma(N / 2.0) / gamma(N)) ** (-1.0 + lam / N)
    )
