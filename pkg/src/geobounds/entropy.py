"""Scalar entropy helpers shared by the update and beacon bounds.

Everything is in bits; 0*log(0) is 0 by continuity.
"""

from __future__ import annotations

import math


def _check_probability(x: float, name: str) -> float:
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return float(x)


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2 (1-x)."""
    x = _check_probability(x, "x")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def ternary_entropy(delta: float) -> float:
    """Entropy of the three-point law (delta/2, 1-delta, delta/2)."""
    delta = _check_probability(delta, "delta")
    if delta / 2.0 == 0.0:  # includes subnormals that underflow when halved
        return 0.0
    acc = -delta * math.log2(delta / 2.0)
    if delta < 1.0:
        acc -= (1.0 - delta) * math.log2(1.0 - delta)
    return acc


def clamp_nonneg(x: float) -> float:
    """A rate lower bound below zero carries no information; clamp it."""
    if not math.isfinite(x):
        raise ValueError(f"expected a finite value, got {x!r}")
    return max(x, 0.0)
