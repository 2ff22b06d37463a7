"""Repetition-coded phase readout at the classical channel level.

Model: each of the n phase bits is measured in T independent runs.  Under
depolarizing noise each run flips the bit with probability p/2; the bit is
declared by strict majority, with an exact tie counting as an error.  Under
erasure noise each run erases the outcome with probability p; any surviving
run reveals the bit exactly, so only an all-erased bit errs.  A trial fails
when any of the n bits errs.

exact_error computes the per-bit and overall error probabilities in closed
form (binomial tail summed in log space); simulate estimates them by seeded
Monte Carlo with a counter-based generator so results are independent of
trial execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

_Z95 = 1.959963984540054
_KEY_MASK = (1 << 128) - 1


class MeasurementNoise(str, Enum):
    DEPOLARIZING = "depolarizing"
    ERASURE = "erasure"


@dataclass(frozen=True)
class SimSpec:
    noise: MeasurementNoise
    p: float
    n: int
    t: int
    trials: int
    seed: int

    def __post_init__(self):
        if not (0.0 <= self.p < 1.0):
            raise ValueError(f"p must lie in [0, 1), got {self.p!r}")
        if self.n < 1 or self.t < 1:
            raise ValueError("n and t must be positive integers")
        if self.trials < 1:
            raise ValueError("trials must be a positive integer")


@dataclass(frozen=True)
class SimResult:
    empirical_pe: float
    ci_low: float
    ci_high: float
    exact_pe: float
    hoeffding_bound: float | None


def required_runs(noise: MeasurementNoise, p: float, n: int, eps: float) -> int:
    """Repetitions sufficient for overall error at most eps, rounded up.

    Depolarizing: 2*ln(n/eps) / (1-p)^2.  Erasure: |ln(eps/n) / ln(p)|.
    """
    noise = MeasurementNoise(noise)
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    if not (0.0 <= p < 1.0):
        raise ValueError(f"p must lie in [0, 1), got {p!r}")
    if n < 1:
        raise ValueError("n must be a positive integer")
    if noise is MeasurementNoise.DEPOLARIZING:
        t = 2.0 * math.log(n / eps) / (1.0 - p) ** 2
    else:
        if p == 0.0:
            return 1
        t = abs(math.log(eps / n) / math.log(p))
    return max(1, math.ceil(t))


def _log_binom_tail(t: int, r: float, j0: int) -> float:
    """log of P[Binomial(t, r) >= j0], summed stably in log space."""
    if j0 <= 0:
        return 0.0
    if j0 > t:
        return -math.inf
    if r <= 0.0:
        return -math.inf
    if r >= 1.0:
        return 0.0
    log_r = math.log(r)
    log_q = math.log1p(-r)
    terms = []
    for j in range(j0, t + 1):
        log_comb = math.lgamma(t + 1) - math.lgamma(j + 1) - math.lgamma(t - j + 1)
        terms.append(log_comb + j * log_r + (t - j) * log_q)
    peak = max(terms)
    return peak + math.log(sum(math.exp(x - peak) for x in terms))


def exact_error(noise: MeasurementNoise, p: float, n: int, t: int) -> float:
    """Exact overall error probability 1 - (1 - q)^n.

    Per-bit q is p^t for erasure (all runs erased) and the upper binomial tail
    P[flips >= t/2] for depolarizing, the tie at even t counting as an error.
    """
    noise = MeasurementNoise(noise)
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if n < 1 or t < 1:
        raise ValueError("n and t must be positive integers")
    if noise is MeasurementNoise.ERASURE:
        log_q = t * math.log(p) if p > 0.0 else -math.inf
    else:
        log_q = _log_binom_tail(t, 0.5 * p, (t + 1) // 2)
    if log_q == -math.inf:
        return 0.0
    # 1 - (1-q)^n computed as -expm1(n*log1p(-q)) to keep precision for tiny q
    q = math.exp(log_q)
    if q >= 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-q))


def hoeffding_bound(p: float, n: int, t: int) -> float:
    """Union + Hoeffding bound n * exp(-2 * ((1-p)/2)^2 * t) on the depolarizing error."""
    return n * math.exp(-2.0 * ((1.0 - p) / 2.0) ** 2 * t)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # trial index in the high counter words: per-trial substreams never overlap
    # and the result is independent of the order trials are drawn in
    return np.random.Generator(np.random.Philox(key=seed & _KEY_MASK,
                                                counter=trial << 192))


def _wilson_interval(successes: int, total: int) -> tuple[float, float]:
    phat = successes / total
    z2 = _Z95 * _Z95
    denom = 1.0 + z2 / total
    center = (phat + z2 / (2.0 * total)) / denom
    half = _Z95 * math.sqrt(phat * (1.0 - phat) / total + z2 / (4.0 * total * total)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def simulate(spec: SimSpec) -> SimResult:
    """Seeded Monte Carlo estimate of the overall readout error probability.

    Each trial draws T per-run outcomes for all n bits from its own keyed
    substream, decodes by majority (depolarizing) or any-survivor (erasure),
    and errs if any bit errs.  Returns the empirical rate with a 95% Wilson
    interval alongside the exact probability and, for depolarizing noise, the
    Hoeffding bound.
    """
    noise = MeasurementNoise(spec.noise)
    failures = 0
    for trial in range(spec.trials):
        rng = _trial_rng(spec.seed, trial)
        u = rng.random((spec.t, spec.n))
        if noise is MeasurementNoise.DEPOLARIZING:
            flips = (u < 0.5 * spec.p).sum(axis=0)
            bit_err = 2 * flips >= spec.t
        else:
            erased = (u < spec.p).sum(axis=0)
            bit_err = erased == spec.t
        if bool(bit_err.any()):
            failures += 1
    empirical = failures / spec.trials
    lo, hi = _wilson_interval(failures, spec.trials)
    exact = exact_error(noise, spec.p, spec.n, spec.t)
    hoeff = hoeffding_bound(spec.p, spec.n, spec.t) \
        if noise is MeasurementNoise.DEPOLARIZING else None
    return SimResult(empirical, lo, hi, exact, hoeff)
