"""Bi-level threshold solver for scale-dependent noise.

The outer problem bisects the initial noise p0 on [0, 1] for the smallest
value whose whole redundancy range is excluded, i.e. whose lower-level minimum

    g*(p0) = min_{k in [1, k_max]} c/k - chi(p(k))

is non-negative.  The lower level is solved by constant-step projected
gradient descent when the objective is convex in k (erasure noise with a
convex polynomial law) and otherwise by a left-to-right line search that
alternates gradient steps with a fixed-step perturbation walk.

Step sizes are 1/L with L a bound on |d^2 g / dk^2| over [1, k_max]: closed
forms exist for polynomial laws per channel; exponential laws fall back to an
empirical estimate (1.5x the max finite-difference curvature of a dense scan).

Two properties drive the stopping rules, and the tests assert both on
recorded traces: with step 1/L successive iterates never cross a stationary
point (the gradient sign is preserved), and when the descent stops because
successive values differ by less than delta^2 / (2 L k_max^2) the gradient at
the stop is below delta / k_max.

Deviation from the obvious transcription: the standalone descent moves along
the signed gradient (k - g'/L), so it also handles minima at the left
boundary, where an update by +|g'|/L would walk away from the minimum.  The
line-search sweep, whose job is to traverse [1, k_max] left to right, uses the
rightward step +|g'|/L, which coincides with signed descent on descending
segments and crosses ascending segments at the same guaranteed step bound.

The perturbation walk adds two certified early exits so that gigantic k_max
values (slow noise growth at small p0) stay tractable: past any visited k the
objective is at least -chi(p(k)), so the walk stops once that floor cannot
beat the running minimum, or once both c/k and chi(p(k)) are below delta/2.
Neither exit costs accuracy: the returned minimum is still within delta of
the true one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bound import AccuracySpec, capacity_cost
from .channels import ChannelKind, holevo, holevo_deriv
from .scaling import LawKind, ScalingLaw

_LN2 = math.log(2.0)
_KMAX_SOLVE_CAP = 1e12  # search window cap when k_max overflows to inf


class SolverError(RuntimeError):
    """Raised when an inner solve hits non-finite values; carries the trace."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class OptimizerConfig:
    """Tolerances and budgets for the bi-level solver.

    delta_p0: bisection bracket width at termination.
    delta: lower-level accuracy |g_found - g_min|.
    max_iters: bisection iteration cap.
    grid_points: resolution of the brute-force grid oracle (per axis).
    gd_max_iters: per-solve cap on gradient steps.
    walk_max_steps: per-solve cap on perturbation-walk evaluations.
    """

    delta_p0: float = 1e-4
    delta: float = 1e-6
    max_iters: int = 200
    grid_points: int = 2001
    gd_max_iters: int = 1_000_000
    walk_max_steps: int = 200_000_000

    def __post_init__(self):
        if self.delta_p0 <= 0.0 or self.delta <= 0.0:
            raise ValueError("delta_p0 and delta must be positive")
        if self.max_iters < 1 or self.gd_max_iters < 1 or self.walk_max_steps < 1:
            raise ValueError("iteration budgets must be at least 1")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")


def _objective_fns(kind: ChannelKind, law: ScalingLaw, c: float):
    """Objective and its k-derivative, usable on floats and arrays alike.

    Array inputs go through the channel and law primitives; scalar inputs take
    inlined formulas because the descent loops evaluate millions of points.
    The two paths are asserted equal in the test suite.
    """
    kind = ChannelKind(kind)
    law_kind, p0, a, gm = law.kind, law.p0, law.alpha, law.gamma

    if law_kind is LawKind.POLYNOMIAL:
        def _p_dp(k):
            u = 1.0 + a * (k - 1.0)
            raw = p0 * u ** gm
            return (raw if raw < 1.0 else 1.0), p0 * gm * a * u ** (gm - 1.0)
    elif law_kind is LawKind.EXPONENTIAL:
        def _p_dp(k):
            t = k - 1.0
            raw = p0 * math.exp(min(a * t ** gm, 700.0))
            if t == 0.0:
                d = p0 * a if gm == 1.0 else (math.inf if gm < 1.0 else 0.0)
            else:
                d = raw * a * gm * t ** (gm - 1.0)
            return (raw if raw < 1.0 else 1.0), d
    else:
        def _p_dp(k):
            return p0, 0.0

    if kind is ChannelKind.ERASURE:
        def g_s(k):
            p, _ = _p_dp(k)
            return c / k + p - 1.0

        def gp_s(k):
            _, d = _p_dp(k)
            return -c / (k * k) + d
    elif kind is ChannelKind.DEPOLARIZING:
        def g_s(k):
            p, _ = _p_dp(k)
            z = 0.5 * p
            h = 0.0 if z <= 0.0 else -(z * math.log2(z) + (1.0 - z) * math.log2(1.0 - z))
            return c / k - 1.0 + h

        def gp_s(k):
            p, d = _p_dp(k)
            chi_d = -math.inf if p <= 0.0 else -0.5 * math.log2((2.0 - p) / p)
            return -c / (k * k) - chi_d * d
    else:
        def g_s(k):
            p, _ = _p_dp(k)
            q = 0.5 * (1.0 - math.sqrt(1.0 - p))
            h = 0.0 if q <= 0.0 else -(q * math.log2(q) + (1.0 - q) * math.log2(1.0 - q))
            return c / k - 1.0 + h

        def gp_s(k):
            p, d = _p_dp(k)
            s = math.sqrt(1.0 - p)
            if s < 1e-6:
                chi_d = -(1.0 + s * s / 3.0) / (2.0 * _LN2)
            elif s >= 1.0:
                chi_d = -math.inf
            else:
                chi_d = -math.log2((1.0 + s) / (1.0 - s)) / (4.0 * s)
            return -c / (k * k) - chi_d * d

    def g(k):
        if np.ndim(k) == 0:
            return g_s(float(k))
        return c / k - holevo(kind, law.noise_at(k))

    def gp(k):
        if np.ndim(k) == 0:
            return gp_s(float(k))
        p = law.noise_at(k)
        d1, _ = law.noise_derivs(k)
        return -c / (k * k) - holevo_deriv(kind, p) * d1

    return g, gp


# ---------------------------------------------------------------------------
# Lipschitz constants
# ---------------------------------------------------------------------------

def lipschitz_constant(kind: ChannelKind, law: ScalingLaw, c: float) -> float:
    """Closed-form bound on |g''| over [1, k_max] for polynomial laws.

    Constant laws reduce to the curvature of c/k alone.  Exponential laws have
    no closed form here; use empirical_lipschitz instead.
    """
    kind = ChannelKind(kind)
    if c <= 0.0:
        raise ValueError("capacity cost must be positive for a meaningful step size")
    if law.kind is LawKind.CONSTANT:
        return 2.0 * c
    if law.kind is LawKind.EXPONENTIAL:
        raise ValueError("no closed-form Lipschitz constant for the exponential law; "
                         "use empirical_lipschitz")
    a, g_, p0 = law.alpha, law.gamma, law.p0
    if kind is ChannelKind.ERASURE:
        return 2.0 * c + a * a * g_ * abs(g_ - 1.0) * p0 ** min(1.0, 2.0 / g_)
    if kind is ChannelKind.SYMMETRIC_GAD:
        return 2.0 * c + (a * a * g_ / (2.0 * _LN2)) * (abs(g_ - 1.0) + g_ / 3.0)
    if p0 <= 0.0:
        raise ValueError("depolarizing Lipschitz constant is singular at p0 = 0")
    return 2.0 * c + (a * a * g_ / (2.0 * _LN2)) * (
        2.0 * g_ / (p0 * (2.0 - p0)) + abs(g_ - 1.0) * math.log((2.0 - p0) / p0)
    )


def empirical_lipschitz(kind: ChannelKind, law: ScalingLaw, c: float,
                        points: int = 10_000) -> float:
    """1.5x the max finite-difference |g''| over a dense scan of [1, k_max].

    Not a proven bound; used where no closed form exists (exponential laws).
    """
    kmx = law.k_max()
    if not math.isfinite(kmx):
        raise ValueError("empirical Lipschitz estimate needs a finite k_max")
    g, _ = _objective_fns(kind, law, c)
    ks = np.linspace(1.0, kmx, points)
    gs = g(ks)
    h = ks[1] - ks[0]
    second = (gs[2:] - 2.0 * gs[1:-1] + gs[:-2]) / (h * h)
    second = second[np.isfinite(second)]
    est = 1.5 * float(np.max(np.abs(second))) if second.size else 0.0
    return max(est, 2.0 * c, 1e-9)


# ---------------------------------------------------------------------------
# Projected gradient descent
# ---------------------------------------------------------------------------

@dataclass
class DescentResult:
    g: float
    k: float
    iterations: int
    converged: bool
    trace: list[float] | None = None


def _descend_loop(g, gp, k0: float, k_max: float, L: float, zeta: float,
                  max_iters: int, rightward: bool, trace):
    xi = 1.0 / L
    k = float(k0)
    gk = float(g(k))
    if not math.isfinite(gk):
        raise SolverError(f"objective non-finite at k={k}", trace)
    if trace is not None:
        trace.append(k)
    for it in range(1, max_iters + 1):
        d = float(gp(k))
        if not math.isfinite(d):
            raise SolverError(f"gradient non-finite at k={k}", trace)
        step = xi * abs(d) if rightward else -xi * d
        k_next = min(k_max, max(1.0, k + step))
        g_next = float(g(k_next))
        if not math.isfinite(g_next):
            raise SolverError(f"objective non-finite at k={k_next}", trace)
        if trace is not None:
            trace.append(k_next)
        dg = abs(gk - g_next)
        k, gk = k_next, g_next
        if dg < zeta:
            return gk, k, it, True
    return gk, k, max_iters, False


def proj_gd(kind: ChannelKind, law: ScalingLaw, spec: AccuracySpec, k_start: float,
            k_max: float, L: float, zeta: float, *, max_iters: int = 1_000_000,
            record_trace: bool = False) -> DescentResult:
    """Signed-gradient descent with constant step 1/L, projected to [1, k_max].

    Stops when successive objective values differ by less than zeta; for a
    convex objective with zeta = delta^2/(2 L k_max^2) the final value is
    within delta of the minimum.  An exact stationary start returns itself.
    """
    if not (1.0 <= k_start <= k_max):
        raise ValueError("k_start must lie in [1, k_max]")
    c = capacity_cost(spec)
    g, gp = _objective_fns(kind, law, c)
    trace: list[float] | None = [] if record_trace else None
    gk, k, iters, conv = _descend_loop(g, gp, k_start, k_max, L, zeta,
                                       max_iters, rightward=False, trace=trace)
    return DescentResult(gk, k, iters, conv, trace)


# ---------------------------------------------------------------------------
# Perturbation walk + line search
# ---------------------------------------------------------------------------

def _perturb_walk(g, gp, c: float, k0: float, k_max: float, L: float, delta: float,
                  running_best: float, *, max_steps: int, chunk: int = 16384):
    """Fixed-step rightward walk from k0 until |g(k) - g(k + |g'|/L)| >= delta.

    Tracks the minimum over the visited grid.  Returns
    (walk_min_g, walk_min_k, k_resume, steps_used, status) with status one of
    "active", "kmax", "pruned", "budget".
    """
    dk = math.sqrt(2.0 * delta / L)
    xi = 1.0 / L
    best_g, best_k = math.inf, k0
    steps = 0
    start = k0
    first_batch = True
    while True:
        room = max_steps - steps
        if room <= 0:
            return best_g, best_k, start, steps, "budget"
        m = int(min(chunk, room))
        offset = 0 if first_batch else 1
        qs = start + dk * np.arange(offset, offset + m, dtype=float)
        first_batch = False
        np.minimum(qs, k_max, out=qs)
        at_end = qs >= k_max
        if at_end.any():
            qs = qs[: int(np.argmax(at_end)) + 1]
        gv = np.asarray(g(qs), dtype=float)
        dv = np.asarray(gp(qs), dtype=float)
        if not (np.all(np.isfinite(gv)) and np.all(np.isfinite(dv))):
            raise SolverError("objective or gradient non-finite during walk")
        probes = np.minimum(k_max, qs + xi * np.abs(dv))
        g_probe = np.asarray(g(probes), dtype=float)
        active = np.abs(gv - g_probe) >= delta
        steps += qs.size
        if active.any():
            idx = int(np.argmax(active))
            seg_min = int(np.argmin(gv[: idx + 1]))
            if gv[seg_min] < best_g:
                best_g, best_k = float(gv[seg_min]), float(qs[seg_min])
            return best_g, best_k, float(qs[idx]), steps, "active"
        seg_min = int(np.argmin(gv))
        if gv[seg_min] < best_g:
            best_g, best_k = float(gv[seg_min]), float(qs[seg_min])
        if qs[-1] >= k_max:
            return best_g, best_k, k_max, steps, "kmax"
        # certified tail exits: beyond q the objective is >= -chi(p(q))
        q_last = float(qs[-1])
        chi_last = c / q_last - float(gv[-1])
        floor_best = min(running_best, best_g)
        if -chi_last >= floor_best:
            return best_g, best_k, q_last, steps, "pruned"
        if chi_last <= 0.5 * delta and c / q_last <= 0.5 * delta:
            return best_g, best_k, q_last, steps, "pruned"
        start = q_last


@dataclass
class LineSearchResult:
    g: float
    k: float
    iterations: int            # outer gd/walk alternations
    completed: bool            # swept to k_max or a certified early exit
    gd_traces: list[list[float]] | None = None


def line_search(kind: ChannelKind, law: ScalingLaw, spec: AccuracySpec, k_max: float,
                L: float, delta: float, *, gd_max_iters: int = 1_000_000,
                walk_max_steps: int = 200_000_000,
                record_trace: bool = False) -> LineSearchResult:
    """Global minimum of the objective over [1, k_max] to accuracy delta.

    Starts from the better of the two boundary values, then alternates a
    rightward gradient phase (stopping when successive values differ by less
    than delta) with a perturbation walk of step sqrt(2*delta/L) that ends as
    soon as the objective is active again.  With step 1/L the gradient phase
    cannot cross a stationary point, and the walk grid cannot miss one by more
    than delta, so the tracked minimum is within delta of the true one.
    """
    if not math.isfinite(k_max) or k_max < 1.0:
        raise ValueError("line_search needs a finite k_max >= 1")
    c = capacity_cost(spec)
    g, gp = _objective_fns(kind, law, c)
    g1 = float(g(1.0))
    gk = float(g(k_max))
    if g1 <= gk:
        best_g, best_k = g1, 1.0
    else:
        best_g, best_k = gk, k_max
    traces: list[list[float]] | None = [] if record_trace else None
    k = 1.0
    outer = 0
    completed = k >= k_max
    gd_left = gd_max_iters
    walk_left = walk_max_steps
    while k < k_max:
        outer += 1
        trace: list[float] | None = [] if record_trace else None
        g_end, k_end, used, conv = _descend_loop(
            g, gp, k, k_max, L, delta, max(1, gd_left), rightward=True, trace=trace)
        gd_left -= used
        if traces is not None:
            traces.append(trace)
        if g_end < best_g:
            best_g, best_k = g_end, k_end
        if not conv:
            break
        wg, wk, k_resume, wsteps, status = _perturb_walk(
            g, gp, c, k_end, k_max, L, delta, best_g, max_steps=max(1, walk_left))
        walk_left -= wsteps
        if wg < best_g:
            best_g, best_k = wg, wk
        if status in ("kmax", "pruned"):
            completed = True
            break
        if status == "budget":
            break
        # active again: resume the gradient phase, guarding forward progress
        k = k_resume if k_resume > k else min(k_max, k + math.sqrt(2.0 * delta / L))
    else:
        completed = True
    return LineSearchResult(best_g, best_k, outer, completed, traces)


# ---------------------------------------------------------------------------
# Bi-level bisection and the brute-force oracle
# ---------------------------------------------------------------------------

@dataclass
class ThresholdResult:
    p_th: float
    k_star: float
    g_star: float
    iterations: int
    bracket: tuple[float, float]
    flags: tuple[str, ...] = ()
    trace: list[tuple[float, float]] | None = None


def _make_law(family: LawKind, p0: float, alpha: float, gamma: float) -> ScalingLaw:
    if family is LawKind.POLYNOMIAL:
        return ScalingLaw.polynomial(p0, alpha, gamma)
    return ScalingLaw.exponential(p0, alpha, gamma)


def _solve_lower(kind: ChannelKind, family: LawKind, p0: float, alpha: float,
                 gamma: float, spec: AccuracySpec, cfg: OptimizerConfig,
                 convex: bool):
    """g*(p0) on [1, k_max] plus its argmin and any budget flags."""
    flags: set[str] = set()
    law = _make_law(family, p0, alpha, gamma)
    kmx = law.k_max()
    if not math.isfinite(kmx):
        kmx = _KMAX_SOLVE_CAP
        flags.add("k_max_overflow")
    elif kmx > _KMAX_SOLVE_CAP:
        kmx = _KMAX_SOLVE_CAP
        flags.add("k_max_capped")
    c = capacity_cost(spec)
    if law.kind is LawKind.EXPONENTIAL:
        L = empirical_lipschitz(kind, law, c)
    else:
        L = lipschitz_constant(kind, law, c)
    if convex:
        zeta = cfg.delta ** 2 / (2.0 * L * kmx * kmx)
        res = proj_gd(kind, law, spec, 1.0, kmx, L, zeta, max_iters=cfg.gd_max_iters)
        if not res.converged:
            flags.add("lower_level_budget")
        return res.g, res.k, flags
    res = line_search(kind, law, spec, kmx, L, cfg.delta,
                      gd_max_iters=cfg.gd_max_iters, walk_max_steps=cfg.walk_max_steps)
    if not res.completed:
        flags.add("lower_level_budget")
    return res.g, res.k, flags


def threshold_bisection(kind: ChannelKind, family: LawKind | str, alpha: float,
                        gamma: float, spec: AccuracySpec,
                        cfg: OptimizerConfig | None = None, *,
                        record_trace: bool = False) -> ThresholdResult:
    """Smallest p0 whose entire redundancy range is excluded by the bound.

    Bisects p0 on [0, 1] keeping g*(hi) >= 0 > g*(lo) until the bracket is
    narrower than delta_p0; the reported p_th is the final probe, which lies
    within delta_p0 of the true threshold.  Exact zeros of g* count as the
    non-negative branch so p_th is the infimum of the excluded set.
    """
    kind = ChannelKind(kind)
    family = LawKind(family)
    if family is LawKind.CONSTANT:
        raise ValueError("constant laws have no finite saturation redundancy; "
                         "the threshold solver needs polynomial or exponential noise growth")
    if alpha <= 0.0 or gamma <= 0.0:
        raise ValueError("alpha and gamma must be positive for a scale-dependent law")
    cfg = cfg or OptimizerConfig()
    c = capacity_cost(spec)
    if c < 0.0:
        # even fully saturated noise is not excluded: no converse region
        return ThresholdResult(1.0, 1.0, c, 0, (0.0, 1.0), ("no_converse_region",),
                               [] if record_trace else None)
    if c >= 1.0:
        # excluded already at vanishing noise
        return ThresholdResult(0.0, 1.0, c - 1.0, 0, (0.0, 1.0), ("excluded_at_zero_noise",),
                               [] if record_trace else None)
    convex = kind is ChannelKind.ERASURE and family is LawKind.POLYNOMIAL and gamma >= 1.0
    lo, hi = 0.0, 1.0
    flags: set[str] = set()
    trace: list[tuple[float, float]] | None = [] if record_trace else None
    iters = 0
    p_th, g_star, k_star = 1.0, c, 1.0
    while hi - lo > cfg.delta_p0 and iters < cfg.max_iters:
        mid = 0.5 * (lo + hi)
        gs, ks, probe_flags = _solve_lower(kind, family, mid, alpha, gamma, spec, cfg, convex)
        flags |= probe_flags
        if trace is not None:
            trace.append((mid, gs))
        if gs >= 0.0:
            hi = mid
        else:
            lo = mid
        p_th, g_star, k_star = mid, gs, ks
        iters += 1
    if hi - lo > cfg.delta_p0:
        flags.add("max_iters")
    return ThresholdResult(p_th, k_star, g_star, iters, (lo, hi),
                           tuple(sorted(flags)), trace)


def grid_oracle(kind: ChannelKind, family: LawKind | str, alpha: float, gamma: float,
                spec: AccuracySpec, grid_points: int = 2001) -> float:
    """Brute-force threshold: scan p0 and k on uniform grids, independent of the
    descent machinery.  Returns the smallest scanned p0 whose sampled objective
    is non-negative everywhere, 1.0 if none qualifies, and 0.0 for the
    degenerate c <= 0 input."""
    kind = ChannelKind(kind)
    family = LawKind(family)
    if grid_points < 100:
        raise ValueError("grid_points must be at least 100")
    c = capacity_cost(spec)
    if c <= 0.0:
        return 0.0
    for p0 in np.linspace(0.0, 1.0, grid_points)[1:]:
        law = _make_law(family, float(p0), alpha, gamma)
        kmx = min(law.k_max(), _KMAX_SOLVE_CAP)
        ks = np.linspace(1.0, kmx, grid_points)
        gs = c / ks - holevo(kind, law.noise_at(ks))
        if float(gs.min()) >= 0.0:
            return float(p0)
    return 1.0
