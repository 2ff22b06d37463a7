"""Non-asymptotic redundancy lower bound and the error-probability floor.

For an n-bit function with range cardinality R_f computed to accuracy
epsilon < 1/2, the per-input-bit capacity cost is

    c = ((1 - eps) * log2(R_f) - h2(eps)) / n

and any circuit using N = k*n noisy qubits must satisfy k > c / chi(N_p(k)).
Rearranging the same inequality for fixed redundancy gives a lower bound on
the achievable error probability, found here as the smallest fixed point of

    eps >= 1 - (k*n*chi + h2(eps)) / log2(R_f)

on [0, 1/2).  The search is restricted to [0, 1/2) because the derivation uses
monotonicity of h2 on that interval; values that would exceed 1/2 are reported
as saturated rather than extrapolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channels import ChannelKind, binary_entropy, holevo
from .scaling import ScalingLaw

_ROOT_RESIDUAL_TOL = 1e-9
_ROOT_MAX_ITERS = 80


@dataclass(frozen=True)
class AccuracySpec:
    """Target accuracy eps, log2 of the range cardinality, and input width n."""

    epsilon: float
    log2_rf: float
    n: int

    def __post_init__(self):
        if not (0.0 < self.epsilon < 0.5):
            raise ValueError(f"epsilon must lie in (0, 0.5), got {self.epsilon!r}")
        if not math.isfinite(self.log2_rf) or self.log2_rf < 0.0:
            raise ValueError(f"log2_rf must be a non-negative real, got {self.log2_rf!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if self.log2_rf > self.n:
            raise ValueError("log2_rf cannot exceed n: an n-bit function has at most 2**n outputs")


def capacity_cost(spec: AccuracySpec) -> float:
    """Per-input-bit capacity cost c; may be <= 0 for tiny ranges (vacuous bound)."""
    return ((1.0 - spec.epsilon) * spec.log2_rf - binary_entropy(spec.epsilon)) / spec.n


def objective(kind: ChannelKind, law: ScalingLaw, spec: AccuracySpec, k):
    """c/k - chi(p(k)).  Negative means redundancy k is not excluded at this noise.

    Accepts a float or an ndarray of redundancies k >= 1.
    """
    c = capacity_cost(spec)
    return c / k - holevo(kind, law.noise_at(k))


@dataclass(frozen=True)
class RedundancyBound:
    """Minimum total qubit count N implied by the bound, with a status field.

    status is "ok" (finite positive requirement), "infeasible" (zero capacity
    but positive cost: no finite redundancy suffices) or "vacuous" (cost <= 0:
    the bound excludes nothing).
    """

    n_min: float
    status: str


def redundancy_lower_bound(kind: ChannelKind, p: float, spec: AccuracySpec) -> RedundancyBound:
    """Smallest N consistent with the bound N > n*c/chi at constant noise p."""
    c = capacity_cost(spec)
    chi = holevo(kind, p)
    if c <= 0.0:
        n_min = spec.n * c / chi if chi > 0.0 else 0.0
        return RedundancyBound(n_min, "vacuous")
    if chi == 0.0:
        return RedundancyBound(math.inf, "infeasible")
    return RedundancyBound(spec.n * c / chi, "ok")


@dataclass(frozen=True)
class ErrorBound:
    """Error-probability floor at a given redundancy; saturated means the true
    floor is >= 0.5 and lies outside the region where the bound is valid."""

    epsilon: float
    saturated: bool


def error_lower_bound(kind: ChannelKind, law: ScalingLaw, k: float,
                      log2_rf: float, n: int) -> ErrorBound:
    """Smallest eps in [0, 0.5) with eps >= 1 - (k*n*chi + h2(eps))/log2_rf.

    The residual eps - 1 + (K + h2(eps))/R is strictly increasing on [0, 1/2],
    so the root is found by bisection to a 1e-9 residual.  Returns 0 when the
    information through the circuit already covers the range (K >= R).
    """
    if log2_rf <= 0.0:
        raise ValueError("log2_rf must be positive; the bound is vacuous otherwise")
    if k < 1.0:
        raise ValueError(f"redundancy k must be >= 1, got {k!r}")
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    cap = k * n * holevo(kind, law.noise_at(k))

    def residual(eps: float) -> float:
        return eps - 1.0 + (cap + binary_entropy(eps)) / log2_rf

    if residual(0.0) >= 0.0:
        return ErrorBound(0.0, False)
    if residual(0.5) <= 0.0:
        return ErrorBound(0.5, True)
    lo, hi = 0.0, 0.5
    for _ in range(_ROOT_MAX_ITERS):
        mid = 0.5 * (lo + hi)
        r = residual(mid)
        if abs(r) < _ROOT_RESIDUAL_TOL:
            return ErrorBound(mid, False)
        if r < 0.0:
            lo = mid
        else:
            hi = mid
    return ErrorBound(0.5 * (lo + hi), False)
