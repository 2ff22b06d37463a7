"""Scale-dependent noise laws p(k) = min(raw(k), 1) on redundancy k >= 1.

Three closed variants:

    constant      raw(k) = p0
    polynomial    raw(k) = p0 * (1 + alpha*(k-1))**gamma
    exponential   raw(k) = p0 * exp(alpha * (k-1)**gamma)

Every law satisfies p(1) = p0 and is non-decreasing in k and in each of
(p0, alpha, gamma).  A polynomial or exponential law with alpha = 0 or
gamma = 0 carries no k dependence and is normalized to the constant law at
construction, so downstream dispatch only ever sees genuine scale dependence.

The power law p0 * k**gamma used by the closed-form erasure thresholds is the
alpha = 1 polynomial law: 1 + 1*(k-1) = k identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

_CLAMP_SLACK = 1e-9


class LawKind(str, Enum):
    CONSTANT = "constant"
    POLYNOMIAL = "polynomial"
    EXPONENTIAL = "exponential"


def _check_prob(p0: float) -> float:
    p0 = float(p0)
    if not math.isfinite(p0) or p0 < 0.0 or p0 > 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0!r}")
    return p0


def _check_nonneg(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"{name} must be a finite non-negative real, got {x!r}")
    return x


@dataclass(frozen=True)
class ScalingLaw:
    kind: LawKind
    p0: float
    alpha: float = 0.0
    gamma: float = 0.0

    @classmethod
    def constant(cls, p0: float) -> "ScalingLaw":
        return cls(LawKind.CONSTANT, _check_prob(p0))

    @classmethod
    def polynomial(cls, p0: float, alpha: float, gamma: float) -> "ScalingLaw":
        p0 = _check_prob(p0)
        alpha = _check_nonneg(alpha, "alpha")
        gamma = _check_nonneg(gamma, "gamma")
        if alpha == 0.0 or gamma == 0.0:
            return cls(LawKind.CONSTANT, p0)
        return cls(LawKind.POLYNOMIAL, p0, alpha, gamma)

    @classmethod
    def exponential(cls, p0: float, alpha: float, gamma: float) -> "ScalingLaw":
        p0 = _check_prob(p0)
        alpha = _check_nonneg(alpha, "alpha")
        gamma = _check_nonneg(gamma, "gamma")
        if alpha == 0.0 or gamma == 0.0:
            # degenerate: no growth that preserves p(1) = p0
            return cls(LawKind.CONSTANT, p0)
        return cls(LawKind.EXPONENTIAL, p0, alpha, gamma)

    # -- evaluation ---------------------------------------------------------

    def _raw(self, k):
        """Unclamped law value; k may be scalar or array, already validated."""
        if self.kind is LawKind.CONSTANT:
            if np.ndim(k) == 0:
                return self.p0
            return np.full(np.shape(k), self.p0)
        if self.p0 == 0.0:
            return 0.0 if np.ndim(k) == 0 else np.zeros(np.shape(k))
        if self.kind is LawKind.POLYNOMIAL:
            if np.ndim(k) == 0:
                return self.p0 * (1.0 + self.alpha * (k - 1.0)) ** self.gamma
            with np.errstate(over="ignore"):
                return self.p0 * np.power(1.0 + self.alpha * (np.asarray(k, float) - 1.0), self.gamma)
        if np.ndim(k) == 0:
            arg = self.alpha * (k - 1.0) ** self.gamma
            return self.p0 * math.exp(min(arg, 700.0))
        with np.errstate(over="ignore"):
            arg = self.alpha * np.power(np.asarray(k, float) - 1.0, self.gamma)
            return self.p0 * np.exp(np.minimum(arg, 700.0))

    def _check_k(self, k):
        if np.ndim(k) == 0:
            kf = float(k)
            if not math.isfinite(kf) or kf < 1.0 - 1e-12:
                raise ValueError(f"redundancy k must be >= 1, got {k!r}")
            return max(kf, 1.0)
        arr = np.asarray(k, dtype=float)
        if not np.all(np.isfinite(arr)) or np.any(arr < 1.0 - 1e-12):
            raise ValueError("redundancy k must be >= 1 everywhere")
        return np.maximum(arr, 1.0)

    def noise_at(self, k):
        """Noise strength min(raw(k), 1) at redundancy k >= 1."""
        k = self._check_k(k)
        raw = self._raw(k)
        if np.ndim(raw) == 0:
            return min(raw, 1.0)
        return np.minimum(raw, 1.0)

    def noise_derivs(self, k):
        """(p', p'') of the unclamped law at k.

        Only valid below saturation; evaluating where raw(k) > 1 raises, since
        the clamp's derivative is 0 and the solvers must not consume it.
        """
        k = self._check_k(k)
        raw = self._raw(k)
        if np.any(np.asarray(raw) > 1.0 + _CLAMP_SLACK):
            raise ValueError("noise law is clamped at 1 here; derivatives undefined")
        if self.kind is LawKind.CONSTANT:
            zero = 0.0 if np.ndim(k) == 0 else np.zeros(np.shape(k))
            return zero, zero
        a, g, p0 = self.alpha, self.gamma, self.p0
        if self.kind is LawKind.POLYNOMIAL:
            u = 1.0 + a * (np.asarray(k, float) - 1.0) if np.ndim(k) else 1.0 + a * (k - 1.0)
            d1 = p0 * g * a * u ** (g - 1.0)
            d2 = p0 * g * (g - 1.0) * a * a * u ** (g - 2.0)
            return d1, d2
        # exponential: p = p0 * exp(a * t**g) with t = k - 1
        t = np.asarray(k, float) - 1.0 if np.ndim(k) else k - 1.0
        with np.errstate(divide="ignore"):
            base = raw
            inner1 = a * g * t ** (g - 1.0)
            inner2 = a * g * (g - 1.0) * t ** (g - 2.0)
        d1 = base * inner1
        d2 = base * (inner2 + inner1 * inner1)
        return d1, d2

    def k_max(self) -> float:
        """Largest redundancy before the law saturates at p = 1.

        Returns math.inf when the law never reaches 1 (constant laws with
        p0 < 1, or p0 = 0); callers must branch on the infinite sentinel.
        """
        if self.p0 >= 1.0:
            return 1.0
        if self.kind is LawKind.CONSTANT or self.p0 == 0.0:
            return math.inf
        if self.kind is LawKind.POLYNOMIAL:
            with np.errstate(over="ignore"):
                reach = self.p0 ** (-1.0 / self.gamma)
            if not math.isfinite(reach):
                return math.inf
            return 1.0 + (reach - 1.0) / self.alpha
        arg = math.log(1.0 / self.p0) / self.alpha
        return 1.0 + arg ** (1.0 / self.gamma)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "law": self.kind.value,
            "p0": self.p0,
            "alpha": self.alpha,
            "gamma": self.gamma,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScalingLaw":
        kind = LawKind(data["law"])
        p0 = data["p0"]
        if kind is LawKind.CONSTANT:
            return cls.constant(p0)
        alpha = data.get("alpha", 0.0)
        gamma = data.get("gamma", 0.0)
        if kind is LawKind.POLYNOMIAL:
            return cls.polynomial(p0, alpha, gamma)
        return cls.exponential(p0, alpha, gamma)
