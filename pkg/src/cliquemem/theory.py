"""Closed-form density, capacity and error-rate expressions.

Every ``1 - (1 - x)**N`` is evaluated as ``-expm1(N * log1p(-x))`` so that
tiny ``x`` and huge ``N`` neither underflow nor lose digits. Functions accept
scalars or numpy arrays for the density / message-count arguments.
"""
from __future__ import annotations

import math
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .core import OrderProfile

__all__ = [
    "connection_probability",
    "expected_density",
    "diversity_from_density",
    "density_linear",
    "diversity_linear",
    "diversity_quadratic",
    "log2_binomial",
    "message_information",
    "information_content",
    "efficiency",
    "max_diversity",
    "efficiency_of_orders",
    "Capacity",
    "capacity_and_efficiency",
    "p_retrieve_blind",
    "p_error_blind",
    "p_error_guided",
    "diversity_vs_order",
    "optimal_order",
    "p_type2",
    "p_type2_from_messages",
    "p_error_distorted",
    "band_density",
    "p_error_distorted_contiguous",
    "p_error_variable",
    "solve_diversity",
    "FORMULAS",
]


def _profile(c) -> OrderProfile:
    if isinstance(c, OrderProfile):
        return c
    return OrderProfile.constant(int(c))


def _scalar(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _one_minus_pow(x, count):
    """``1 - (1 - x) ** count`` without cancellation."""
    x = np.asarray(x, dtype=float)
    count = np.asarray(count, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = count * np.log1p(-x)
    t = np.where(count == 0, 0.0, t)
    return -np.expm1(t)


def connection_probability(chi: int, l: int, c: int) -> float:
    """Chance that one random order-``c`` message covers a given potential edge."""
    return c * (c - 1) / (chi * (chi - 1) * l * l)


# ------------------------------------------------------------------ density


def expected_density(chi: int, l: int, c, M=None, counts: Mapping[int, float] | None = None):
    """Expected connection density after learning ``M`` i.i.d. messages.

    ``c`` is an order or an :class:`OrderProfile`. For a range profile the
    ``M`` messages are split evenly over the orders unless explicit per-order
    ``counts`` are given.
    """
    profile = _profile(c)
    if counts is None:
        if M is None:
            raise TypeError("need M or counts")
        share = np.asarray(M, dtype=float) / profile.lam
        counts = {k: share for k in profile.orders}
    log_keep = 0.0
    for k, m_k in counts.items():
        log_keep = log_keep + np.asarray(m_k, dtype=float) * np.log1p(-connection_probability(chi, l, k))
    return _scalar(-np.expm1(log_keep))


def diversity_from_density(chi: int, l: int, c: int, d):
    """Number of i.i.d. order-``c`` messages giving density ``d`` (inverse of :func:`expected_density`)."""
    d = np.asarray(d, dtype=float)
    if np.any((d < 0) | (d >= 1)):
        raise ValueError("density must lie in [0, 1)")
    return _scalar(np.log1p(-d) / math.log1p(-connection_probability(chi, l, c)))


def density_linear(chi: int, l: int, c: int, M):
    """Low-density approximation ``d ~ c(c-1)M / (chi(chi-1)l^2)``."""
    return _scalar(connection_probability(chi, l, c) * np.asarray(M, dtype=float))


def diversity_linear(chi: int, l: int, c: int, d):
    """Low-density inverse: ``M ~ chi(chi-1)l^2 d / (c(c-1))``."""
    return _scalar(np.asarray(d, dtype=float) / connection_probability(chi, l, c))


def diversity_quadratic(chi: int, l: int, c: int, d):
    """Large-``chi`` form ``M ~ n^2 d / (c(c-1))`` with ``n = chi * l``."""
    n = chi * l
    return _scalar(n * n * np.asarray(d, dtype=float) / (c * (c - 1)))


# ------------------------------------------------------------------ capacity


def log2_binomial(n: int, k: int) -> float:
    if k < 0 or k > n:
        raise ValueError(f"binomial({n}, {k}) undefined")
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)


def message_information(chi: int, l: int, c: int, lam: int = 1) -> float:
    """Bits carried by one order-``c`` message: cluster choice, characters, and order choice."""
    if c > chi:
        raise ValueError(f"order {c} exceeds chi={chi}")
    kappa = math.log2(l)
    return log2_binomial(chi, c) + c * kappa + math.log2(lam)


def _mean_information(chi: int, l: int, profile: OrderProfile) -> float:
    if profile.is_constant:
        return message_information(chi, l, profile.c_min)
    lam = profile.lam
    return sum(message_information(chi, l, k, lam) for k in profile.orders) / lam


def information_content(chi: int, l: int, c, M):
    """Total stored information ``B`` in bits."""
    return _scalar(np.asarray(M, dtype=float) * _mean_information(chi, l, _profile(c)))


def efficiency(chi: int, l: int, c, M):
    q = chi * (chi - 1) * l * l / 2
    return _scalar(np.asarray(information_content(chi, l, c, M)) / q)


def max_diversity(chi: int, l: int, c) -> float:
    """Efficiency-1 diversity: the ``M`` at which stored bits equal the binary resource."""
    q = chi * (chi - 1) * l * l / 2
    return q / _mean_information(chi, l, _profile(c))


def efficiency_of_orders(chi: int, l: int, orders: Sequence[int], lam: int | None = None) -> float:
    """Efficiency of an explicit multiset of message orders.

    ``lam`` defaults to the number of distinct orders in the span
    ``max(orders) - min(orders) + 1``.
    """
    orders = list(orders)
    if not orders:
        return 0.0
    if lam is None:
        lam = max(orders) - min(orders) + 1
    total = sum(message_information(chi, l, k, lam) for k in orders)
    return 2 * total / (chi * (chi - 1) * l * l)


class Capacity(NamedTuple):
    bits: float
    efficiency: float
    max_diversity: float


def capacity_and_efficiency(chi: int, l: int, c, M) -> Capacity:
    profile = _profile(c)
    if profile.c_max > chi:
        raise ValueError(f"order {profile.c_max} exceeds chi={chi}")
    return Capacity(
        information_content(chi, l, profile, M),
        efficiency(chi, l, profile, M),
        max_diversity(chi, l, profile),
    )


# ------------------------------------------------------------------ recovery


def _check_erasures(c, c_e):
    if not 0 <= c_e < c:
        raise ValueError(f"need 0 <= c_e < c, got c_e={c_e}, c={c}")


def _blind_candidates(chi, l, c, c_e):
    return c_e * (l - 1) + (chi - c) * l


def p_retrieve_blind(chi: int, l: int, c: int, c_e: int, d):
    """Probability that no spurious clique with one extra vertex exists."""
    return _scalar(1.0 - np.asarray(p_error_blind(chi, l, c, c_e, d)))


def p_error_blind(chi: int, l: int, c: int, c_e: int, d, approx: bool = False):
    """Blind-recovery error probability after one iteration."""
    _check_erasures(c, c_e)
    d = np.asarray(d, dtype=float)
    n_cand = _blind_candidates(chi, l, c, c_e)
    if approx:
        return _scalar(n_cand * d ** (c - c_e))
    return _scalar(_one_minus_pow(d ** (c - c_e), n_cand))


def p_error_guided(l: int, c: int, c_e: int, d, approx: bool = False):
    """Guided-recovery error probability after one iteration."""
    _check_erasures(c, c_e)
    d = np.asarray(d, dtype=float)
    n_cand = (l - 1) * c_e
    if approx:
        return _scalar(n_cand * d ** (c - c_e))
    return _scalar(_one_minus_pow(d ** (c - c_e), n_cand))


def diversity_vs_order(chi: int, l: int, alpha: float, p0: float, c):
    """Approximate diversity reaching error ``p0`` with a fraction ``alpha`` erased."""
    _check_p0_alpha(alpha, p0)
    c = np.asarray(c, dtype=float)
    n = chi * l
    return _scalar((n / c) ** 2 * (p0 / n) ** (1.0 / ((1.0 - alpha) * c)))


def optimal_order(chi: int, l: int, alpha: float, p0: float) -> tuple[float, int]:
    """Order maximising :func:`diversity_vs_order`; returns ``(raw, rounded)``.

    Uses the natural logarithm.
    """
    _check_p0_alpha(alpha, p0)
    raw = math.log(chi * l / p0) / (2.0 * (1.0 - alpha))
    return raw, int(math.floor(raw + 0.5))


def _check_p0_alpha(alpha, p0):
    if not 0 < p0 < 1:
        raise ValueError(f"target error probability must lie in (0, 1), got {p0}")
    if not 0 <= alpha < 1:
        raise ValueError(f"erasure fraction must lie in [0, 1), got {alpha}")


# ------------------------------------------------------------------ classification


def p_type2(c: int, d):
    """Chance that a random order-``c`` probe forms a clique (false acceptance)."""
    return _scalar(np.asarray(d, dtype=float) ** (c * (c - 1) / 2))


def p_type2_from_messages(chi: int, l: int, c: int, M):
    return p_type2(c, expected_density(chi, l, c, M))


# ------------------------------------------------------------------ distortions


def p_error_distorted(c: int, d, kind="pairwise", approx: bool = False):
    """Error probability for pairwise-permuted (``2c`` patterns) or anagram (``(c-1)c``) input."""
    kind = getattr(kind, "value", kind)
    if c < 2:
        raise ValueError(f"order must be at least 2, got {c}")
    if kind == "pairwise":
        patterns = 2 * c
    elif kind == "anagram":
        patterns = (c - 1) * c
    else:
        raise ValueError(f"unknown distortion kind {kind!r}")
    x = np.asarray(d, dtype=float) ** (c - 1)
    if approx:
        return _scalar(patterns * x)
    return _scalar(_one_minus_pow(x, patterns))


def band_density(chi: int, l: int, c: int, M, distance: int):
    """Expected density between two interior clusters ``distance`` apart.

    Messages placed on ``c`` contiguous clusters (uniform start) only ever
    connect clusters closer than ``c``, so the density is banded.
    """
    if not 0 < distance:
        raise ValueError("distance must be positive")
    starts = chi - c + 1
    covering = max(0, c - distance)
    log_keep = np.asarray(M, dtype=float) * covering / starts * math.log1p(-1.0 / (l * l))
    return _scalar(-np.expm1(log_keep))


def p_error_distorted_contiguous(chi: int, l: int, c: int, M, kind="pairwise"):
    """Distortion error with contiguous placement, using banded densities.

    Same pattern count as :func:`p_error_distorted`, but each pattern's
    ``c - 1`` edges are weighted by the density at their cluster distance
    instead of one network-wide ``d``.
    """
    kind = getattr(kind, "value", kind)
    per_cluster = {"pairwise": 2, "anagram": c - 1}.get(kind)
    if per_cluster is None:
        raise ValueError(f"unknown distortion kind {kind!r}")
    dens = {k: np.asarray(band_density(chi, l, c, M, k)) for k in range(1, c)}
    log_ok = 0.0
    for k in range(c):
        q = 1.0
        for j in range(c):
            if j != k:
                q = q * dens[abs(j - k)]
        log_ok = log_ok + per_cluster * np.log1p(-q)
    return _scalar(-np.expm1(log_ok))


# ------------------------------------------------------------------ variable order


def p_error_variable(
    chi: int, l: int, c_min: int, c_max: int, alpha: float, d, rounded: bool = False
):
    """Average blind error over orders uniform on ``[c_min, c_max]``.

    With ``rounded=False`` the erased count ``alpha * c`` is used as a real
    number; ``rounded=True`` rounds it to the nearest integer per order, as a
    simulation must.
    """
    if not 1 < c_min <= c_max:
        raise ValueError(f"invalid order range {c_min}..{c_max}")
    if not 0 <= alpha < 1:
        raise ValueError(f"erasure fraction must lie in [0, 1), got {alpha}")
    d = np.asarray(d, dtype=float)
    total = 0.0
    for c in range(c_min, c_max + 1):
        c_e = math.floor(alpha * c + 0.5) if rounded else alpha * c
        known = c - c_e
        n_cand = c_e * (l - 1) + (chi - c) * l
        total = total + _one_minus_pow(d ** known, n_cand)
    return _scalar(total / (c_max - c_min + 1))


# ------------------------------------------------------------------ helpers


def solve_diversity(
    error_of_density: Callable[[float], float],
    target: float,
    chi: int,
    l: int,
    c,
) -> float:
    """Message count ``M`` at which ``error_of_density(expected_density(M))`` equals ``target``."""
    def gap(log_m):
        return error_of_density(expected_density(chi, l, c, math.exp(log_m))) - target

    return math.exp(brentq(gap, 0.0, math.log(1e12), xtol=1e-12))


#: Name -> function table used by the command line ``theory`` subcommand.
FORMULAS: dict[str, Callable] = {
    "expected_density": expected_density,
    "diversity_from_density": diversity_from_density,
    "density_linear": density_linear,
    "diversity_linear": diversity_linear,
    "diversity_quadratic": diversity_quadratic,
    "message_information": message_information,
    "information_content": information_content,
    "efficiency": efficiency,
    "max_diversity": max_diversity,
    "p_retrieve_blind": p_retrieve_blind,
    "p_error_blind": p_error_blind,
    "p_error_guided": p_error_guided,
    "diversity_vs_order": diversity_vs_order,
    "optimal_order": optimal_order,
    "p_type2": p_type2,
    "p_type2_from_messages": p_type2_from_messages,
    "p_error_distorted": p_error_distorted,
    "p_error_distorted_contiguous": p_error_distorted_contiguous,
    "p_error_variable": p_error_variable,
}
