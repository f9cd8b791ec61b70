"""Closed-form lower bounds and the binomial inequalities around them.

Everything is exact: rationals are ``Fraction``, binomials are Python
integers, and the one irrational quantity (a square root) is bracketed
by a rational interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Optional

from .joincomplex import skeleton_joinpower_params

__all__ = [
    "BoundReport",
    "evaluate_bounds",
    "heawood",
    "skeleton_bound",
    "joinpower_bound",
    "crossing_bound",
    "gamma_delta",
    "gamma_complex",
    "helly_threshold",
    "ScanResult",
    "gamma_inequality_values",
    "gamma_inequality_scan",
    "skeleton_reduction_consistent",
]


def _binom(a: int, b: int) -> int:
    """C(a, b), zero when a < 0 or b outside [0, a]."""
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


def heawood(n: int) -> Fraction:
    return Fraction((n - 3) * (n - 4), 12)


def skeleton_bound(n: int, k: int) -> Fraction:
    return Fraction((n - 4 * k - 2) ** 2, 2 ** k * (k + 1) ** 2)


def joinpower_bound(n: int, k: int) -> Fraction:
    return Fraction((n - 3) ** 2, 2 ** k)


def crossing_bound(n: int, k: int) -> Fraction:
    """Asymptotic handle count n^2 / (2^k (k+1)^2)."""
    return Fraction(n * n, 2 ** k * (k + 1) ** 2)


def gamma_complex(f_k: int, f_km1: int, k: int) -> int:
    """gamma(K) = f_k - (k + 2) f_{k-1} from face counts."""
    return f_k - (k + 2) * f_km1


def gamma_delta(n: int, k: int) -> int:
    """gamma of the k-skeleton of the n-simplex: C(n+1,k+1) - (k+2) C(n+1,k)."""
    if k < 1 or n < k:
        raise ValueError("need n >= k >= 1")
    return gamma_complex(comb(n + 1, k + 1), comb(n + 1, k), k)


def helly_threshold(k: int, beta: int, width: Fraction = Fraction(1, 10 ** 7)):
    """Rational enclosure (lo, hi) of (k+1) 2^{k-1} sqrt(beta) + 4k + 4.

    ``hi - lo <= width``; ``lo == hi`` when beta is a perfect square.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    coef = Fraction((k + 1) * 2 ** k, 2)
    shift = 4 * k + 4
    root = isqrt(beta)
    if root * root == beta:
        v = coef * root + shift
        return v, v
    # scale so that one unit of the integer square root costs <= width
    scale = -(-coef.numerator // (coef.denominator * width))
    scale = int(scale) + 1
    s = isqrt(beta * scale * scale)
    lo = coef * Fraction(s, scale) + shift
    hi = coef * Fraction(s + 1, scale) + shift
    return lo, hi


@dataclass
class BoundReport:
    n: int
    k: int
    heawood: Fraction
    skeleton_bound: Fraction
    skeleton_valid: bool
    joinpower_bound: Fraction
    joinpower_valid: bool
    kuhnel_lhs_coefficient: int
    kuhnel_rhs: int
    gamma_delta: Optional[int]
    gamma_negative: bool
    crossing_bound: Fraction
    beta: Optional[int] = None
    helly_threshold: Optional[tuple[Fraction, Fraction]] = None

    def numbers(self) -> dict[str, object]:
        out: dict[str, object] = {
            "heawood": self.heawood,
            "skeleton_bound": self.skeleton_bound,
            "joinpower_bound": self.joinpower_bound,
            "kuhnel_lhs_coefficient": self.kuhnel_lhs_coefficient,
            "kuhnel_rhs": self.kuhnel_rhs,
            "crossing_bound": self.crossing_bound,
        }
        if self.gamma_delta is not None:
            out["gamma_delta"] = self.gamma_delta
        if self.helly_threshold is not None:
            out["helly_threshold_lo"], out["helly_threshold_hi"] = self.helly_threshold
        return out


def evaluate_bounds(n: int, k: int, beta: Optional[int] = None) -> BoundReport:
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    gd = gamma_delta(n, k) if n >= k else None
    return BoundReport(
        n=n,
        k=k,
        heawood=heawood(n),
        skeleton_bound=skeleton_bound(n, k),
        skeleton_valid=n >= 5 * k + 3,
        joinpower_bound=joinpower_bound(n, k),
        joinpower_valid=n >= 4,
        kuhnel_lhs_coefficient=comb(2 * k + 1, k + 1),
        kuhnel_rhs=_binom(n - k - 1, k + 1),
        gamma_delta=gd,
        gamma_negative=gd is not None and gd < 0,
        crossing_bound=crossing_bound(n, k),
        beta=beta,
        helly_threshold=helly_threshold(k, beta) if beta is not None else None,
    )


@dataclass
class ScanResult:
    k: int
    n_max: int
    verdicts: list[tuple[int, bool, bool]]
    threshold: Optional[int]


def gamma_inequality_values(n: int, k: int) -> tuple[int, int, int]:
    left = _binom(n, k + 1) - (k + 2) * _binom(n, k)
    mid = _binom(n + 1, k + 1) - (k + 2) * _binom(n + 1, k)
    right = _binom(n - k - 1, k + 1)
    return left, mid, right


def gamma_inequality_scan(k: int, n_max: int) -> ScanResult:
    """For n = k+1 .. n_max test
    C(n,k+1) - (k+2)C(n,k) < C(n+1,k+1) - (k+2)C(n+1,k) < C(n-k-1,k+1).

    ``verdicts`` holds (n, first_holds, second_holds).  ``threshold`` is the
    least n0 with both holding on all of [n0, n_max], reported only if that
    trailing run has length at least k + 2.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if n_max < k + 3:
        raise ValueError("n_max must be >= k + 3")
    verdicts = []
    for n in range(k + 1, n_max + 1):
        left, mid, right = gamma_inequality_values(n, k)
        verdicts.append((n, left < mid, mid < right))
    threshold = None
    for n, a, b in reversed(verdicts):
        if not (a and b):
            break
        threshold = n
    if threshold is not None and n_max - threshold + 1 < k + 2:
        threshold = None
    return ScanResult(k, n_max, verdicts, threshold)


def skeleton_reduction_consistent(n: int, k: int) -> bool:
    """skeleton_bound(n, k) <= joinpower_bound(s, k) for the join power
    [s]^{*k+1} found inside the k-skeleton of the n-simplex (n >= 5k+3)."""
    s, _ = skeleton_joinpower_params(n, k)
    return s >= 4 and skeleton_bound(n, k) <= joinpower_bound(s, k)
