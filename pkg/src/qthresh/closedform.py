"""Closed-form erasure noise thresholds, the exact oracle for the numeric stack.

For the erasure channel the objective c/k + p(k) - 1 is convex whenever p(k)
is, so the smallest excluded initial noise p0 solves in closed form for two
noise growth laws:

    linear  p(k) = p0 * (1 + alpha*(k-1))
    power   p(k) = p0 * k**gamma

Both share the same branch structure: when the growth parameter is at least
c/(1-c) the binding redundancy is k = 1 and the threshold is 1 - c; otherwise
an interior stationary point binds.  The interior linear branch is the root of
the quadratic (1-alpha)*x**2 + 2*sqrt(alpha*c)*x - 1 = 0 in x = sqrt(p0),
which removes the spurious 0/0 of the textbook surd at alpha = 1.
"""

from __future__ import annotations

import math

BRANCH_BOUNDARY = "boundary"  # minimum at k = 1, threshold 1 - c
BRANCH_INTERIOR = "interior"  # interior stationary point binds


def _check_cost(c: float) -> float:
    c = float(c)
    if not (0.0 < c < 1.0):
        raise ValueError(f"capacity cost must lie in (0, 1), got {c!r}")
    return c


def threshold_branch(growth: float, c: float) -> str:
    """Which Theorem branch applies for growth parameter alpha or gamma."""
    c = _check_cost(c)
    if growth <= 0.0:
        raise ValueError(f"growth parameter must be positive, got {growth!r}")
    return BRANCH_BOUNDARY if growth >= c / (1.0 - c) else BRANCH_INTERIOR


def erasure_threshold_linear(alpha: float, c: float) -> float:
    """Threshold p0 for erasure noise growing as p0*(1 + alpha*(k-1))."""
    c = _check_cost(c)
    if threshold_branch(alpha, c) == BRANCH_BOUNDARY:
        return 1.0 - c
    # interior stationary point k = sqrt(c/(p0*alpha)) substituted into the
    # boundary condition gives (1-alpha)*x^2 + 2*sqrt(alpha*c)*x - 1 = 0
    b = 2.0 * math.sqrt(alpha * c)
    a = 1.0 - alpha
    if abs(a) < 1e-12:
        x = 1.0 / b
    else:
        # the same root expression is the positive one on both sides of alpha = 1
        x = (-b + math.sqrt(b * b + 4.0 * a)) / (2.0 * a)
    return x * x


def erasure_threshold_power(gamma: float, c: float) -> float:
    """Threshold p0 for erasure noise growing as p0 * k**gamma."""
    c = _check_cost(c)
    if threshold_branch(gamma, c) == BRANCH_BOUNDARY:
        return 1.0 - c
    return (gamma / c) ** gamma / (gamma + 1.0) ** (gamma + 1.0)
