"""Command-line surface: bounds, thresholds, sweeps, simulation, self checks.

Every parameter may come from a --config JSON file; explicit flags override
config values, and the fully resolved parameter set is echoed into the
provenance block of every output.  Files are written atomically (temp file
plus rename).  Exit codes: 0 success, 1 domain/usage error, 2 solver-flagged
result, 3 internal error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .atlas import SweepGrid, default_axis, surface_rows, sweep, validate_surface
from .bound import AccuracySpec, capacity_cost, error_lower_bound, redundancy_lower_bound
from .channels import ChannelKind, holevo
from .closedform import (erasure_threshold_linear, erasure_threshold_power,
                         threshold_branch)
from .optimize import OptimizerConfig, grid_oracle, threshold_bisection
from .plots import heatmap_svg, line_chart_svg
from .scaling import LawKind, ScalingLaw
from .simulator import MeasurementNoise, SimSpec, required_runs, simulate

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_FLAGGED = 2
EXIT_INTERNAL = 3


class CliError(Exception):
    pass


def _fmt(x) -> str:
    return format(float(x), ".9g")


def _round9(obj):
    """Round every float in a JSON-ready structure to 9 significant digits."""
    if isinstance(obj, float):
        return float(_fmt(obj)) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(v) for v in obj]
    return obj


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _out_dir() -> Path:
    return Path(os.environ.get("QTHRESH_OUTDIR", "."))


def _provenance(command: str, resolved: dict) -> dict:
    return {
        "command": command,
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "resolved": _round9(resolved),
    }


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(_round9(payload), indent=2, sort_keys=True) + "\n"
    if out:
        _atomic_write(Path(out), text)
    else:
        sys.stdout.write(text)


def _csv_text(provenance: dict, header: list[str], rows: list[tuple]) -> str:
    prov = dict(provenance)
    stamp = prov.pop("timestamp", None)
    lines = ["# provenance: " + json.dumps(prov, sort_keys=True)]
    if stamp:
        lines.append("# timestamp: " + stamp)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError("config file must contain a JSON object")
    return data


class _Params:
    """Flag-over-config-over-default resolution with an echo of the result."""

    def __init__(self, args: argparse.Namespace, config: dict):
        self._args = args
        self._config = config
        self.resolved: dict = {}

    def get(self, key: str, default=None, cast=None, required: bool = False):
        value = getattr(self._args, key.replace("-", "_"), None)
        if value is None:
            value = self._config.get(key, default)
        if value is None:
            if required:
                raise CliError(f"missing required parameter: --{key}")
            self.resolved[key] = None
            return None
        if cast is not None:
            try:
                value = cast(value)
            except (TypeError, ValueError) as exc:
                raise CliError(f"bad value for --{key}: {value!r}") from exc
        self.resolved[key] = value.value if hasattr(value, "value") else value
        return value


def _floats_list(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(tok) for tok in str(text).split(",") if tok.strip())


def _accuracy_spec(params: _Params) -> AccuracySpec:
    eps = params.get("eps", 0.1, float)
    log2rf = params.get("log2rf", 128.0, float)
    n = params.get("n", 128, int)
    try:
        return AccuracySpec(eps, log2rf, n)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _scaling_law(params: _Params) -> ScalingLaw:
    law = params.get("law", "constant", LawKind)
    p0 = params.get("p0", required=True, cast=float)
    alpha = params.get("alpha", 0.0, float)
    gamma = params.get("gamma", 0.0, float)
    try:
        if law is LawKind.CONSTANT:
            return ScalingLaw.constant(p0)
        if law is LawKind.POLYNOMIAL:
            return ScalingLaw.polynomial(p0, alpha, gamma)
        return ScalingLaw.exponential(p0, alpha, gamma)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _optimizer_cfg(params: _Params) -> OptimizerConfig:
    try:
        return OptimizerConfig(
            delta_p0=params.get("delta-p0", 1e-4, float),
            delta=params.get("delta", 1e-6, float),
            max_iters=params.get("max-iters", 200, int),
            grid_points=params.get("grid-points", 2001, int),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_capacity(params: _Params) -> int:
    kind = params.get("channel", required=True, cast=ChannelKind)
    p = params.get("p", required=True, cast=float)
    try:
        chi = holevo(kind, p)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    out = params.get("out")
    if out:
        _emit_json({"provenance": _provenance("capacity", params.resolved),
                    "result": {"chi": chi}}, out)
    else:
        print(_fmt(chi))
    return EXIT_OK


def _cmd_bound(params: _Params) -> int:
    kind = params.get("channel", required=True, cast=ChannelKind)
    p = params.get("p", required=True, cast=float)
    spec = _accuracy_spec(params)
    try:
        res = redundancy_lower_bound(kind, p, spec)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    payload = {"provenance": _provenance("bound", params.resolved),
               "result": {"n_min": res.n_min, "status": res.status,
                          "capacity_cost": capacity_cost(spec)}}
    _emit_json(payload, params.get("out"))
    return EXIT_OK


def _cmd_error_curve(params: _Params) -> int:
    kind = params.get("channel", required=True, cast=ChannelKind)
    law = _scaling_law(params)
    log2rf = params.get("log2rf", 128.0, float)
    n = params.get("n", 128, int)
    k_lo = params.get("k-min", 1.0, float)
    k_hi = params.get("k-max", required=True, cast=float)
    points = params.get("points", 200, int)
    if points < 2 or k_hi <= k_lo or k_lo < 1.0:
        raise CliError("need k-min >= 1 < k-max and at least 2 points")
    rows = []
    for i in range(points):
        k = k_lo + (k_hi - k_lo) * i / (points - 1)
        p_k = law.noise_at(k)
        chi = holevo(kind, p_k)
        try:
            eb = error_lower_bound(kind, law, k, log2rf, n)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
        rows.append((k, p_k, chi, eb.epsilon, int(eb.saturated)))
    rows.sort(key=lambda r: r[0])
    prov = _provenance("error-curve", params.resolved)
    out = params.get("out") or str(_out_dir() / "error_curve.csv")
    _atomic_write(Path(out), _csv_text(
        prov, ["k", "p_of_k", "chi", "eps_lb", "saturated_flag"], rows))
    svg = params.get("svg")
    if svg:
        pts = [(r[0], r[3]) for r in rows]
        _atomic_write(Path(svg), line_chart_svg(
            [(f"{kind.value} {law.kind.value}", pts)],
            "error probability floor vs redundancy", "redundancy k",
            "error floor"))
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_threshold(params: _Params) -> int:
    kind = params.get("channel", required=True, cast=ChannelKind)
    family = params.get("family", "polynomial", LawKind)
    alpha = params.get("alpha", required=True, cast=float)
    gamma = params.get("gamma", required=True, cast=float)
    spec = _accuracy_spec(params)
    cfg = _optimizer_cfg(params)
    trace_path = params.get("trace")
    try:
        res = threshold_bisection(kind, family, alpha, gamma, spec, cfg,
                                  record_trace=bool(trace_path))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    payload = {"provenance": _provenance("threshold", params.resolved),
               "result": {"p_th": res.p_th, "k_star": res.k_star,
                          "g_star": res.g_star, "iterations": res.iterations,
                          "bracket": list(res.bracket), "flags": list(res.flags)}}
    _emit_json(payload, params.get("out"))
    if trace_path and res.trace is not None:
        _atomic_write(Path(trace_path), _csv_text(
            _provenance("threshold-trace", params.resolved),
            ["p0", "g_star"], [(p0, gs) for p0, gs in res.trace]))
    return EXIT_FLAGGED if res.flags else EXIT_OK


def _cmd_closed_form(params: _Params) -> int:
    law = params.get("law", required=True, cast=str)
    spec = _accuracy_spec(params)
    c = capacity_cost(spec)
    try:
        if law == "linear":
            growth = params.get("alpha", required=True, cast=float)
            p_th = erasure_threshold_linear(growth, c)
        elif law == "power":
            growth = params.get("gamma", required=True, cast=float)
            p_th = erasure_threshold_power(growth, c)
        else:
            raise CliError(f"--law must be linear or power, got {law!r}")
        branch = threshold_branch(growth, c)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    payload = {"provenance": _provenance("closed-form", params.resolved),
               "result": {"branch": branch, "p_th": p_th, "capacity_cost": c}}
    _emit_json(payload, params.get("out"))
    return EXIT_OK


def _cmd_sweep(params: _Params) -> int:
    channels_raw = params.get("channels", "erasure,symmetric_gad,depolarizing", str)
    channels = tuple(ChannelKind(tok.strip()) for tok in channels_raw.split(","))
    family = params.get("family", "polynomial", LawKind)
    alphas = params.get("alphas", default_axis(), _floats_list)
    gammas = params.get("gammas", default_axis(), _floats_list)
    spec = _accuracy_spec(params)
    cfg = _optimizer_cfg(params)
    try:
        grid = SweepGrid(tuple(alphas), tuple(gammas), channels, family, spec, cfg)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    result = sweep(grid)
    violations = validate_surface(result, cfg.delta_p0)
    prefix = params.get("out", str(_out_dir() / "surface"), str)
    prov = _provenance("sweep", params.resolved)
    rows = surface_rows(result)
    _atomic_write(Path(prefix + ".csv"), _csv_text(
        prov, ["channel", "alpha", "gamma", "p_th", "k_star", "flags"], rows))
    _emit_json({"provenance": prov,
                "surface_provenance": {k: v for k, v in result.provenance.items()
                                       if k != "timestamp"},
                "violations": violations,
                "entries": [{"channel": r[0], "alpha": r[1], "gamma": r[2],
                             "p_th": r[3], "k_star": r[4], "flags": r[5]}
                            for r in rows]},
               prefix + ".json")
    for channel in channels:
        cells = [[next(r[3] for r in rows
                       if r[0] == channel.value and r[1] == a and r[2] == g)
                  for g in gammas] for a in alphas]
        _atomic_write(Path(f"{prefix}_{channel.value}.svg"), heatmap_svg(
            list(alphas), list(gammas), cells,
            f"threshold surface: {channel.value}", "alpha", "gamma"))
    flagged = [r for r in rows if r[5]]
    print(f"wrote {prefix}.csv / .json / per-channel .svg "
          f"({len(rows)} entries, {len(flagged)} flagged, "
          f"{len(violations)} structural violations)")
    return EXIT_FLAGGED if flagged or violations else EXIT_OK


def _cmd_simulate(params: _Params) -> int:
    noise = params.get("noise", required=True, cast=MeasurementNoise)
    p = params.get("p", required=True, cast=float)
    n = params.get("n", required=True, cast=int)
    t = params.get("t", cast=int)
    target = params.get("target-eps", cast=float)
    if t is None:
        if target is None:
            raise CliError("provide --t or --target-eps")
        t = required_runs(noise, p, n, target)
        params.resolved["t"] = t
    trials = params.get("trials", required=True, cast=int)
    seed = params.get("seed", 0, int)
    try:
        spec = SimSpec(noise, p, n, t, trials, seed)
        res = simulate(spec)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    payload = {"provenance": _provenance("simulate", params.resolved),
               "result": {"empirical_pe": res.empirical_pe,
                          "ci_low": res.ci_low, "ci_high": res.ci_high,
                          "exact_pe": res.exact_pe,
                          "hoeffding_bound": res.hoeffding_bound,
                          "spec": {"noise": noise.value, "p": p, "n": n,
                                   "t": t, "trials": trials, "seed": seed}}}
    _emit_json(payload, params.get("out"))
    return EXIT_OK


def _cmd_selfcheck(params: _Params) -> int:
    """Closed-form vs numeric agreement plus capacity and simulator anchors."""
    checks: list[tuple[str, bool, str]] = []
    spec = AccuracySpec(0.1, 128.0, 128)
    c = capacity_cost(spec)

    for kind in ChannelKind:
        ok = abs(holevo(kind, 0.0) - 1.0) <= 1e-12 and abs(holevo(kind, 1.0)) <= 1e-12
        checks.append((f"capacity anchors ({kind.value})", ok, "chi(0)=1, chi(1)=0"))

    for alpha in (0.5, 10.0):
        res = threshold_bisection(ChannelKind.ERASURE, LawKind.POLYNOMIAL,
                                  alpha, 1.0, spec)
        ref = erasure_threshold_linear(alpha, c)
        ok = abs(res.p_th - ref) <= 2e-4 and not res.flags
        checks.append((f"closed form vs bisection (linear alpha={alpha})", ok,
                       f"|{res.p_th:.6f} - {ref:.6f}|"))
    for gamma in (0.5, 10.0):
        res = threshold_bisection(ChannelKind.ERASURE, LawKind.POLYNOMIAL,
                                  1.0, gamma, spec)
        ref = erasure_threshold_power(gamma, c)
        ok = abs(res.p_th - ref) <= 2e-4 and not res.flags
        checks.append((f"closed form vs bisection (power gamma={gamma})", ok,
                       f"|{res.p_th:.6f} - {ref:.6f}|"))

    cfg = OptimizerConfig()
    res = threshold_bisection(ChannelKind.DEPOLARIZING, LawKind.POLYNOMIAL,
                              1.0, 1.0, spec, cfg)
    ref = grid_oracle(ChannelKind.DEPOLARIZING, LawKind.POLYNOMIAL, 1.0, 1.0,
                      spec, 501)
    ok = abs(res.p_th - ref) <= 1.0 / 500 + cfg.delta_p0
    checks.append(("bisection vs grid oracle (depolarizing)", ok,
                   f"|{res.p_th:.6f} - {ref:.6f}|"))

    from .simulator import exact_error, hoeffding_bound as hoeff
    t76 = required_runs(MeasurementNoise.DEPOLARIZING, 0.5, 128, 0.01)
    e_dep = exact_error(MeasurementNoise.DEPOLARIZING, 0.5, 128, t76)
    checks.append(("repetition guarantee (depolarizing)",
                   t76 == 76 and e_dep <= 0.01 and e_dep <= hoeff(0.5, 128, t76),
                   f"T={t76}, exact={e_dep:.3e}"))
    t14 = required_runs(MeasurementNoise.ERASURE, 0.5, 128, 0.01)
    e_era = exact_error(MeasurementNoise.ERASURE, 0.5, 128, t14)
    checks.append(("repetition guarantee (erasure)",
                   t14 == 14 and e_era <= 0.01 and e_era <= 128 * 0.5 ** t14,
                   f"T={t14}, exact={e_era:.3e}"))

    width = max(len(name) for name, _, _ in checks)
    all_ok = True
    for name, ok, detail in checks:
        all_ok &= ok
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    return EXIT_OK if all_ok else EXIT_FLAGGED


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qthresh",
        description="Redundancy lower bounds and scale-dependent noise "
                    "thresholds for quantum circuits with classical I/O.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON file with parameter defaults")
        p.add_argument("--out", help="output path (default: stdout or QTHRESH_OUTDIR)")
        return p

    p = add("capacity", "Holevo information of a channel at noise p")
    p.add_argument("--channel"), p.add_argument("--p")

    p = add("bound", "minimum qubit count from the redundancy bound")
    for flag in ("--channel", "--p", "--eps", "--log2rf", "--n"):
        p.add_argument(flag)

    p = add("error-curve", "error-probability floor vs redundancy (CSV)")
    for flag in ("--channel", "--law", "--p0", "--alpha", "--gamma", "--log2rf",
                 "--n", "--k-min", "--k-max", "--points", "--svg"):
        p.add_argument(flag)

    p = add("threshold", "bi-level threshold solve for one (alpha, gamma)")
    for flag in ("--channel", "--family", "--alpha", "--gamma", "--eps",
                 "--log2rf", "--n", "--delta-p0", "--delta", "--max-iters",
                 "--grid-points", "--trace"):
        p.add_argument(flag)

    p = add("closed-form", "closed-form erasure threshold")
    for flag in ("--law", "--alpha", "--gamma", "--eps", "--log2rf", "--n"):
        p.add_argument(flag)

    p = add("sweep", "threshold surface over an (alpha, gamma) grid")
    for flag in ("--channels", "--family", "--alphas", "--gammas", "--eps",
                 "--log2rf", "--n", "--delta-p0", "--delta", "--max-iters",
                 "--grid-points"):
        p.add_argument(flag)

    p = add("simulate", "Monte Carlo repetition readout")
    for flag in ("--noise", "--p", "--n", "--t", "--target-eps", "--trials",
                 "--seed"):
        p.add_argument(flag)

    add("selfcheck", "closed-form vs numeric and simulator consistency table")
    return parser


_HANDLERS = {
    "capacity": _cmd_capacity,
    "bound": _cmd_bound,
    "error-curve": _cmd_error_curve,
    "threshold": _cmd_threshold,
    "closed-form": _cmd_closed_form,
    "sweep": _cmd_sweep,
    "simulate": _cmd_simulate,
    "selfcheck": _cmd_selfcheck,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the contract says 1
        return EXIT_OK if exc.code == 0 else EXIT_DOMAIN
    try:
        config = _load_config(getattr(args, "config", None))
        params = _Params(args, config)
        return _HANDLERS[args.command](params)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> int:
    return run()


if __name__ == "__main__":
    raise SystemExit(main())
