"""Holevo information of three single-parameter, Holevo-additive channel families.

All three channels are parameterized by a noise strength p in [0, 1] and have
classical (Holevo) capacity 1 at p = 0 and 0 at p = 1:

    erasure        chi(p) = 1 - p
    depolarizing   chi(p) = 1 - h2(p / 2)
    symmetric GAD  chi(p) = 1 - h2((1 - sqrt(1 - p)) / 2)

where h2 is the binary entropy in bits.  The symmetric generalized amplitude
damping channel is pinned to thermal parameter 1/2; that is the only case in
which its Holevo information is known to be additive.

Functions accept scalars or numpy arrays and return float / ndarray
accordingly.  Everything here is pure and stateless.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

_LN2 = math.log(2.0)


class ChannelKind(str, Enum):
    ERASURE = "erasure"
    DEPOLARIZING = "depolarizing"
    SYMMETRIC_GAD = "symmetric_gad"


def _check_unit_interval(x, name: str):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return arr


def binary_entropy(q):
    """Binary entropy -q*log2(q) - (1-q)*log2(1-q) with the 0*log(0) = 0 convention.

    Symmetric about q = 1/2; exactly 0 at the endpoints and exactly 1 at 1/2.
    Raises ValueError outside [0, 1].
    """
    if np.ndim(q) == 0:
        qf = float(q)
        if not math.isfinite(qf) or qf < 0.0 or qf > 1.0:
            raise ValueError(f"q must lie in [0, 1], got {q!r}")
        if qf == 0.0 or qf == 1.0:
            return 0.0
        return -qf * math.log2(qf) - (1.0 - qf) * math.log2(1.0 - qf)
    arr = _check_unit_interval(q, "q")
    out = np.zeros_like(arr)
    interior = (arr > 0.0) & (arr < 1.0)
    qi = arr[interior]
    out[interior] = -qi * np.log2(qi) - (1.0 - qi) * np.log2(1.0 - qi)
    return out


def holevo(kind: ChannelKind, p):
    """Holevo information chi of the channel with noise strength p in [0, 1]."""
    kind = ChannelKind(kind)
    if np.ndim(p) == 0:
        pf = float(p)
        if not math.isfinite(pf) or pf < 0.0 or pf > 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p!r}")
        if kind is ChannelKind.ERASURE:
            return 1.0 - pf
        if kind is ChannelKind.DEPOLARIZING:
            return 1.0 - binary_entropy(0.5 * pf)
        return 1.0 - binary_entropy(0.5 * (1.0 - math.sqrt(1.0 - pf)))
    arr = _check_unit_interval(p, "p")
    if kind is ChannelKind.ERASURE:
        return 1.0 - arr
    if kind is ChannelKind.DEPOLARIZING:
        return 1.0 - binary_entropy(0.5 * arr)
    return 1.0 - binary_entropy(0.5 * (1.0 - np.sqrt(1.0 - arr)))


def _gad_deriv_scalar(pf: float) -> float:
    # chi'(p) = -log2((1+s)/(1-s)) / (4s) with s = sqrt(1-p).  The ratio has a
    # finite limit -1/(2 ln 2) at p -> 1; switch to the series in s there.
    s = math.sqrt(1.0 - pf)
    if s < 1e-6:
        return -(1.0 + s * s / 3.0) / (2.0 * _LN2)
    if s == 1.0:
        return -math.inf
    return -math.log2((1.0 + s) / (1.0 - s)) / (4.0 * s)


def holevo_deriv(kind: ChannelKind, p):
    """d(chi)/dp.  Non-positive everywhere; -inf at p = 0 for the entropy-based
    channels (the solvers never evaluate there because p(k) >= p0 > 0)."""
    kind = ChannelKind(kind)
    if np.ndim(p) == 0:
        pf = float(p)
        if not math.isfinite(pf) or pf < 0.0 or pf > 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p!r}")
        if kind is ChannelKind.ERASURE:
            return -1.0
        if kind is ChannelKind.DEPOLARIZING:
            if pf == 0.0:
                return -math.inf
            return -0.5 * math.log2((2.0 - pf) / pf)
        return _gad_deriv_scalar(pf)
    arr = _check_unit_interval(p, "p")
    if kind is ChannelKind.ERASURE:
        return np.full_like(arr, -1.0)
    if kind is ChannelKind.DEPOLARIZING:
        out = np.full_like(arr, -np.inf)
        pos = arr > 0.0
        out[pos] = -0.5 * np.log2((2.0 - arr[pos]) / arr[pos])
        return out
    s = np.sqrt(1.0 - arr)
    out = np.empty_like(arr)
    near_one = s < 1e-6
    out[near_one] = -(1.0 + s[near_one] ** 2 / 3.0) / (2.0 * _LN2)
    mid = ~near_one & (s < 1.0)
    out[mid] = -np.log2((1.0 + s[mid]) / (1.0 - s[mid])) / (4.0 * s[mid])
    out[s == 1.0] = -np.inf
    return out
