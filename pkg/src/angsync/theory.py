"""Closed-form predictors: spiked random-matrix laws, recovery thresholds,
offset-measurement entropies and the decoding error bound.

Everything here is a pure, total function.  Degenerate or vacuous regimes are
reported through explicit flags on TheoryPrediction rather than NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import InvalidInputError

FLAG_BELOW_THRESHOLD = "below_threshold"
FLAG_NEAR_EXACT = "near_exact"
FLAG_VACUOUS = "vacuous"


@dataclass(frozen=True)
class TheoryPrediction:
    """A named closed-form value plus an optional second value (e.g. a std)."""

    name: str
    value: float
    aux: float | None = None
    inputs: dict = field(default_factory=dict)
    flag: str | None = None


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"p must lie in [0, 1], got {p}")


def _check_L(L):
    if int(L) != L or L < 2:
        raise InvalidInputError(f"L must be an integer >= 2, got {L}")


def wigner_edge(n: int, p: float) -> float:
    """Bulk edge of the noise spectrum: 2 sqrt(n (1 - p^2))."""
    _check_p(p)
    return 2.0 * math.sqrt(n * (1.0 - p * p))


def lambda1_law(n: int, p: float) -> TheoryPrediction:
    """Asymptotic location (and std) of the top eigenvalue for the complete
    model with diagonal p.

    Above the spike condition n p > sqrt(n (1 - p^2)) the top eigenvalue
    separates from the bulk with mean n p / sqrt(1-p^2) + sqrt(1-p^2)/p and
    variance ((n+1) p^2 - 1)/(n p^2) * (1-p^2); below it, it sticks to the
    bulk edge (returned with aux=None and a flag).  At p=1 the variance
    vanishes and the mean expression diverges, flagged near_exact.
    """
    _check_p(p)
    inputs = {"n": n, "p": p}
    if p == 1.0:
        return TheoryPrediction("lambda1_law", math.inf, 0.0, inputs, FLAG_NEAR_EXACT)
    if p == 0.0 or n * p <= math.sqrt(n * (1.0 - p * p)):
        return TheoryPrediction("lambda1_law", wigner_edge(n, p), None, inputs,
                                FLAG_BELOW_THRESHOLD)
    q = 1.0 - p * p
    mu = n * p / math.sqrt(q) + math.sqrt(q) / p
    var = ((n + 1) * p * p - 1.0) / (n * p * p) * q
    return TheoryPrediction("lambda1_law", mu, math.sqrt(var), inputs)


def p_threshold_complete(n: int) -> float:
    """Good-edge fraction below which the spectral method is at chance: 1/sqrt(n)."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    return 1.0 / math.sqrt(n)


def correlation_prediction(n: int, p: float) -> float:
    """Leading-order correlation between eigenvector and truth: (1 + 1/(n p^2))^(-1/2)."""
    _check_p(p)
    s = n * p * p
    if s == 0.0:
        return 0.0
    return (1.0 + 1.0 / s) ** -0.5


def lambda1_sparse_bad(n: int, m_bad: int) -> float:
    """Spectral norm of the sparse outlier matrix: 2 sqrt(2 m_bad / n)."""
    if m_bad < 0 or n < 1:
        raise InvalidInputError("need m_bad >= 0 and n >= 1")
    return 2.0 * math.sqrt(2.0 * m_bad / n)


def small_world_gap(n: int, m: int, p: float) -> float:
    """Spectral gap of the good neighborhood graph: 4 m^2 p / n^3."""
    _check_p(p)
    return 4.0 * m * m * p / float(n) ** 3


def small_world_threshold(n: int, m: int) -> TheoryPrediction:
    """Sufficient (loose) recovery threshold sqrt(n^5 / (8 m^3)).

    Values above 1 cannot be a probability; flagged vacuous.  This bound is a
    formula check only, never a predictor of empirical thresholds.
    """
    if n < 1 or m < 1:
        raise InvalidInputError("need n >= 1 and m >= 1")
    value = math.sqrt(float(n) ** 5 / (8.0 * float(m) ** 3))
    flag = FLAG_VACUOUS if value > 1.0 else None
    return TheoryPrediction("small_world_threshold", value, None,
                            {"n": n, "m": m}, flag)


def _xlog2x(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log2(x)


def entropy_HLp(L: int, p: float) -> float:
    """Entropy of one offset measurement given its endpoint angles, for L
    circle sectors and good-edge probability p."""
    _check_L(L)
    _check_p(p)
    q = (1.0 - p) / L
    return -(L - 1) * _xlog2x(q) - _xlog2x(p + q)


def mutual_info_ILp(L: int, p: float) -> float:
    """Information one offset measurement carries about its endpoints:
    log2 L - H(L, p)."""
    return math.log2(L) - entropy_HLp(L, p)


def mutual_info_taylor(L: int, p: float) -> float:
    """Quadratic small-p term of the mutual information: (1/2) (L-1) p^2.

    This is the expansion of the information measured in nats; multiply
    mutual_info_ILp (bits) by ln 2 before comparing.
    """
    _check_L(L)
    _check_p(p)
    return 0.5 * (L - 1) * p * p


def fano_error_bound(n: int, m: int, L: int, p: float) -> float:
    """Lower bound on the decoding error probability,
    max(0, 1 - (m/n) I(L,p)/log2 L - 1/(n log2 L))."""
    if n < 1 or m < 0:
        raise InvalidInputError("need n >= 1 and m >= 0")
    log2L = math.log2(L)
    return max(0.0, 1.0 - (m / n) * mutual_info_ILp(L, p) / log2L - 1.0 / (n * log2L))


def p_threshold_info(n: int, m: int, L: int) -> float:
    """Below sqrt((n/m) 2 log2 L / (L-1)) no decoder recovers all angles."""
    if n < 1 or m < 1:
        raise InvalidInputError("need n >= 1 and m >= 1")
    _check_L(L)
    return math.sqrt((n / m) * 2.0 * math.log2(L) / (L - 1))


def p_threshold_individual(n: int, m: int, L: int) -> float:
    """Below sqrt((n/m) log2 L / (L-1)) even individual angles cannot be decoded."""
    if n < 1 or m < 1:
        raise InvalidInputError("need n >= 1 and m >= 1")
    _check_L(L)
    return math.sqrt((n / m) * math.log2(L) / (L - 1))


def threshold_ratio(L: int) -> float:
    """Spectral-over-individual threshold ratio sqrt((L-1) / (2 log2 L));
    crosses 1 between L=6 and L=7 and is independent of n and m."""
    _check_L(L)
    return math.sqrt((L - 1) / (2.0 * math.log2(L)))


def predictions_table(n: int, m: int, L: int, p: float) -> list[TheoryPrediction]:
    """All named predictions for one (n, m, L, p), ready for CSV output."""
    mk = TheoryPrediction
    base = {"n": n, "m": m, "L": L, "p": p}
    m_bad = int(round((1.0 - p) * m))  # expected outlier count at this p
    rows = [
        mk("wigner_edge", wigner_edge(n, p), None, base),
        lambda1_law(n, p),
        mk("p_threshold_complete", p_threshold_complete(n), None, base),
        mk("correlation_prediction", correlation_prediction(n, p), None, base),
        mk("lambda1_sparse_bad", lambda1_sparse_bad(n, m_bad), None, base),
        mk("small_world_gap", small_world_gap(n, m, p), None, base),
        small_world_threshold(n, m),
        mk("entropy_HLp", entropy_HLp(L, p), None, base),
        mk("mutual_info_ILp", mutual_info_ILp(L, p), None, base),
        mk("mutual_info_taylor", mutual_info_taylor(L, p), None, base),
        mk("fano_error_bound", fano_error_bound(n, m, L, p), None, base),
        mk("p_threshold_info", p_threshold_info(n, m, L), None, base),
        mk("p_threshold_individual", p_threshold_individual(n, m, L), None, base),
        mk("threshold_ratio", threshold_ratio(L), None, base),
    ]
    return rows
