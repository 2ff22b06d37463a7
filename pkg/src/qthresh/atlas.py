"""Threshold surfaces over (alpha, gamma) grids, per channel.

A sweep runs the bi-level solver at every grid point and collects one entry
per (channel, alpha, gamma) in that canonical order, so the output is
deterministic no matter how the points were evaluated.  Individual solver
failures are recorded in the entry's flags and never abort the sweep.

The resulting surface inherits two structural facts worth validating: each
channel's threshold is non-increasing along both parameter axes (raising any
growth parameter can only enlarge the excluded set), and at every grid point
the thresholds are ordered erasure >= symmetric GAD >= depolarizing, matching
the pointwise ordering of the three capacities.
"""

from __future__ import annotations

import datetime as _dt
import math
from dataclasses import dataclass, field

from . import __version__
from .bound import AccuracySpec
from .channels import ChannelKind
from .optimize import OptimizerConfig, threshold_bisection
from .scaling import LawKind

_CHANNEL_ORDER = {
    ChannelKind.ERASURE: 0,
    ChannelKind.SYMMETRIC_GAD: 1,
    ChannelKind.DEPOLARIZING: 2,
}


def default_axis() -> tuple[float, ...]:
    """0.1, 0.2, ..., 2.0; the documented default mesh for both parameters."""
    return tuple(round(0.1 * i, 10) for i in range(1, 21))


@dataclass(frozen=True)
class SweepGrid:
    alphas: tuple[float, ...]
    gammas: tuple[float, ...]
    channels: tuple[ChannelKind, ...]
    law_family: LawKind
    spec: AccuracySpec
    cfg: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        for name, axis in (("alphas", self.alphas), ("gammas", self.gammas)):
            if not axis:
                raise ValueError(f"{name} must be non-empty")
            if any(v <= 0.0 for v in axis):
                raise ValueError(f"{name} must be positive")
            if any(b <= a for a, b in zip(axis, axis[1:])):
                raise ValueError(f"{name} must be strictly increasing")
        if not self.channels:
            raise ValueError("channels must be non-empty")


@dataclass(frozen=True)
class SurfaceEntry:
    channel: ChannelKind
    alpha: float
    gamma: float
    p_th: float
    k_star: float
    flags: tuple[str, ...]


@dataclass(frozen=True)
class SurfaceResult:
    entries: tuple[SurfaceEntry, ...]
    provenance: dict


def sweep(grid: SweepGrid) -> SurfaceResult:
    """Solve the threshold at every (channel, alpha, gamma) grid point."""
    entries = []
    for channel in sorted(grid.channels, key=_CHANNEL_ORDER.__getitem__):
        for alpha in grid.alphas:
            for gamma in grid.gammas:
                try:
                    res = threshold_bisection(channel, grid.law_family, alpha, gamma,
                                              grid.spec, grid.cfg)
                    entries.append(SurfaceEntry(channel, alpha, gamma,
                                                res.p_th, res.k_star, res.flags))
                except Exception as exc:  # record, never abort the sweep
                    entries.append(SurfaceEntry(channel, alpha, gamma,
                                                math.nan, math.nan,
                                                (f"error:{exc}",)))
    provenance = {
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "law_family": grid.law_family.value,
        "channels": [c.value for c in grid.channels],
        "alphas": list(grid.alphas),
        "gammas": list(grid.gammas),
        "spec": {"epsilon": grid.spec.epsilon, "log2_rf": grid.spec.log2_rf,
                 "n": grid.spec.n},
        "cfg": {"delta_p0": grid.cfg.delta_p0, "delta": grid.cfg.delta,
                "max_iters": grid.cfg.max_iters, "grid_points": grid.cfg.grid_points},
    }
    return SurfaceResult(tuple(entries), provenance)


def validate_surface(result: SurfaceResult, delta_p0: float = 1e-4) -> list[str]:
    """Monotonicity along both axes (tolerance delta_p0) and the three-channel
    pointwise ordering (tolerance 2*delta_p0).  Returns violation messages."""
    tol = delta_p0 + 1e-12
    by_channel: dict[ChannelKind, dict[tuple[float, float], float]] = {}
    for e in result.entries:
        if math.isnan(e.p_th):
            continue
        by_channel.setdefault(e.channel, {})[(e.alpha, e.gamma)] = e.p_th
    violations: list[str] = []
    for channel, points in by_channel.items():
        alphas = sorted({a for a, _ in points})
        gammas = sorted({g for _, g in points})
        for gm in gammas:
            row = [(a, points[(a, gm)]) for a in alphas if (a, gm) in points]
            for (a1, v1), (a2, v2) in zip(row, row[1:]):
                if v2 > v1 + tol:
                    violations.append(
                        f"{channel.value}: p_th rises along alpha at gamma={gm}: "
                        f"({a1},{v1:.6f}) -> ({a2},{v2:.6f})")
        for a in alphas:
            col = [(gm, points[(a, gm)]) for gm in gammas if (a, gm) in points]
            for (g1, v1), (g2, v2) in zip(col, col[1:]):
                if v2 > v1 + tol:
                    violations.append(
                        f"{channel.value}: p_th rises along gamma at alpha={a}: "
                        f"({g1},{v1:.6f}) -> ({g2},{v2:.6f})")
    order_tol = 2.0 * delta_p0 + 1e-12
    era = by_channel.get(ChannelKind.ERASURE, {})
    gad = by_channel.get(ChannelKind.SYMMETRIC_GAD, {})
    dep = by_channel.get(ChannelKind.DEPOLARIZING, {})
    for key in sorted(set(era) & set(gad)):
        if era[key] < gad[key] - order_tol:
            violations.append(f"ordering erasure >= gad broken at {key}: "
                              f"{era[key]:.6f} < {gad[key]:.6f}")
    for key in sorted(set(gad) & set(dep)):
        if gad[key] < dep[key] - order_tol:
            violations.append(f"ordering gad >= depolarizing broken at {key}: "
                              f"{gad[key]:.6f} < {dep[key]:.6f}")
    for key in sorted(set(era) & set(dep)):
        if era[key] < dep[key] - order_tol:
            violations.append(f"ordering erasure >= depolarizing broken at {key}: "
                              f"{era[key]:.6f} < {dep[key]:.6f}")
    return violations


def surface_rows(result: SurfaceResult) -> list[tuple]:
    """CSV-ready rows sorted by (channel, alpha, gamma)."""
    ordered = sorted(result.entries,
                     key=lambda e: (_CHANNEL_ORDER[e.channel], e.alpha, e.gamma))
    return [(e.channel.value, e.alpha, e.gamma, e.p_th, e.k_star,
             "|".join(e.flags)) for e in ordered]
