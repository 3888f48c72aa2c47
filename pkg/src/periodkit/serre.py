"""Exact integer threshold where the prime-size test function drops below 1.

The function f combines the growth bound for log|j| at a CM point with the
height ceiling and the degree bound of the imaginary-quadratic case; it
decreases in p, so the set {f(p) >= 1} has a largest integer element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SerreThreshold:
    p_star: int
    f_at_p_star: float
    f_at_p_star_plus_1: float

    def __post_init__(self) -> None:
        if not self.f_at_p_star >= 1.0 > self.f_at_p_star_plus_1:
            raise ValueError("threshold values do not bracket 1")


def j_log_upper(p: float) -> float:
    """2 pi sqrt(p) + 6 log p + 21 (log p)^2 / sqrt(p)."""
    if p < 2:
        raise ValueError("p must be >= 2")
    sp = math.sqrt(p)
    lp = math.log(p)
    return 2.0 * math.pi * sp + 6.0 * lp + 21.0 * lp * lp / sp


def H_of_p(p: float) -> float:
    """max(1000, pi sqrt(p)/6 + log p + 7 (log p)^2/(4 sqrt p) + 2.95)."""
    if p < 2:
        raise ValueError("p must be >= 2")
    sp = math.sqrt(p)
    lp = math.log(p)
    return max(1000.0, math.pi * sp / 6.0 + lp + 7.0 * lp * lp / (4.0 * sp) + 2.95)


def f_of_p(p: float) -> float:
    """2 sqrt(2/3) 1778 (H(p) + 4 log p + 2.4 + log(H(p))/2) / p."""
    H = H_of_p(p)
    return 2.0 * math.sqrt(2.0 / 3.0) * 1778.0 * (H + 4.0 * math.log(p) + 2.4 + 0.5 * math.log(H)) / p


def find_threshold(lo: int = 2, hi: int = 10**8) -> SerreThreshold:
    """Largest integer p with f(p) >= 1, by integer bisection.

    Maintains f(lo) >= 1 > f(hi); f decreases on the bracket, which the loop
    verifies implicitly by keeping the bracket valid.
    """
    if f_of_p(lo) < 1.0:
        raise RuntimeError("f < 1 at the lower end; bracket invalid")
    if f_of_p(hi) >= 1.0:
        raise RuntimeError("f >= 1 at the upper end; enlarge the bracket")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f_of_p(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    return SerreThreshold(lo, f_of_p(lo), f_of_p(lo + 1))
