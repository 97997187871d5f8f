"""Command-line entry point: ``tsp-timereg <command> [flags]``.

Each ``*_report`` function returns a JSON-ready dict with an ``ok`` field;
``main`` renders it and exits non-zero when ``ok`` is false.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
import time
from typing import Sequence

import numpy as np

from . import amplify as amp
from .circuit import RegisterLayout
from .encoding import EncodingConfig, classify, pipeline
from .figure import FIGURE_OPTIMUM, FIGURE_ROWS, PHI_TOLERANCE
from .instance import (
    TspInstance,
    brute_force_optimum,
    figure_instance,
    lambda_bound,
    load_instance,
    random_instance,
)
from .resources import CostModel, pipeline_report, scaling_fit
from .sim import DEFAULT_CEILING, SimulationError, ancilla_leakage, init_state, route_marginals, run

PHASE_TOL = 1e-9


def resolve_lambda(instance: TspInstance, spec: str | float = "tight") -> float:
    if isinstance(spec, str) and spec in ("loose", "tight"):
        return lambda_bound(instance, spec)
    value = float(spec)
    if not value > 0:
        raise ValueError(f"explicit lambda must be positive, got {value}")
    return value


def _render(instance: TspInstance, labels: Sequence[int]) -> list:
    m = instance.n - 1
    s = instance.labels[instance.start]
    return [s, *(instance.labels[v] if v < m else None for v in labels), s]


def solve_report(instance: TspInstance) -> dict:
    order, cost = brute_force_optimum(instance)
    return {"tour": instance.render_tour(order), "cost": cost, "ok": True}


def tour_rows(instance: TspInstance, lam: float, include_invalid: bool = False) -> list[dict]:
    """Classified tours sorted by (valid desc, phi asc, tour)."""
    config = EncodingConfig(lam)
    layout = RegisterLayout(instance.n)
    if include_invalid:
        space = itertools.product(range(1 << layout.b), repeat=layout.T)
    else:
        space = itertools.permutations(range(instance.n - 1))
    rows = []
    for labels in space:
        rec = classify(instance, labels, config)
        rows.append({"tour": _render(instance, labels), "labels": list(labels), "cost": rec.cost, "phi": rec.phase, "valid": rec.valid})
    rows.sort(key=lambda r: (-r["valid"], r["phi"], r["labels"]))
    return rows


def tours_report(instance: TspInstance, lam: float, include_invalid: bool = False) -> dict:
    rows = tour_rows(instance, lam, include_invalid)
    layout = RegisterLayout(instance.n)
    n_valid = math.factorial(instance.n - 1)
    return {
        "lambda": lam,
        "rows": [{k: r[k] for k in ("tour", "cost", "phi", "valid")} for r in rows],
        "valid_count": n_valid,
        "invalid_count": (1 << layout.num_route_qubits) - n_valid,
        "ok": True,
    }


def simulate_report(instance: TspInstance, lam: float, ceiling: int = DEFAULT_CEILING) -> dict:
    """Run prep + validity + cost and compare every route pattern with ``classify``."""
    layout = RegisterLayout(instance.n)
    if layout.total_qubits > ceiling:
        raise SimulationError(f"{layout.total_qubits} qubits exceeds ceiling {ceiling}")
    config = EncodingConfig(lam)
    state = run(init_state(layout.total_qubits, ceiling), pipeline(instance, config))
    expected_mag = 1.0 / math.sqrt(1 << layout.num_route_qubits)
    max_phase_err = max_mag_err = 0.0
    mismatches: list[list[int]] = []
    for entry in route_marginals(state, layout):
        rec = classify(instance, entry.labels, config)
        if entry.branches != 1 or entry.flag != rec.valid:
            mismatches.append(list(entry.labels))
        err = abs(np.angle(entry.amplitude * np.exp(-1j * rec.phase)))
        max_phase_err = max(max_phase_err, float(err))
        max_mag_err = max(max_mag_err, abs(abs(entry.amplitude) - expected_mag))
    ok = not mismatches and max_phase_err < PHASE_TOL and max_mag_err < PHASE_TOL
    return {
        "n": instance.n,
        "qubits": layout.total_qubits,
        "patterns": 1 << layout.num_route_qubits,
        "lambda": lam,
        "max_phase_error": max_phase_err,
        "max_magnitude_error": max_mag_err,
        "validity_mismatches": len(mismatches),
        "mismatched_patterns": mismatches[:20],
        "ok": ok,
    }


def amplify_report(instance: TspInstance | int, mode: str = amp.EXACT, ceiling: int = DEFAULT_CEILING) -> dict:
    n = instance if isinstance(instance, int) else instance.n
    layout = RegisterLayout(n)
    result = amp.amplify_valid(n, mode, ceiling)
    entries = route_marginals(result.state, layout)
    valid = [e for e in entries if sorted(e.labels) == list(range(n - 1))]
    probs = np.array([abs(e.amplitude) ** 2 for e in valid])
    target = result.achieved / len(valid)
    ref = valid[0].amplitude
    phase_spread = max(abs(float(np.angle(e.amplitude / ref))) for e in valid)
    leakage = ancilla_leakage(result.state, layout)
    sched = result.schedule
    if mode == amp.EXACT:
        reached = result.achieved >= 1 - 1e-9
    else:
        reached = abs(result.achieved - sched.predicted_success) < 1e-9
    uniformity = float(np.max(np.abs(probs - target)))
    return {
        **sched.to_dict(),
        "achieved_success": result.achieved,
        "uniformity_deviation": uniformity,
        "valid_phase_spread": phase_spread,
        "ancilla_leakage": leakage,
        "ok": bool(reached and uniformity < 1e-9 and phase_spread < 1e-9 and leakage < 1e-12),
    }


def resources_report(n: int | None, n_range: Sequence[int] | None, model: CostModel) -> dict:
    out: dict = {}
    ok = True
    if n is not None:
        out = pipeline_report(n, model)
        ok = bool(out["matches"])
    if n_range is not None:
        out["scaling"] = {
            "n_range": [min(n_range), max(n_range)],
            "regressor": "log(n-1)",
            **{which: scaling_fit(n_range, which) for which in ("cost", "validity", "prep")},
        }
    out["ok"] = ok
    return out


def reproduce_figure_report(instance: TspInstance | None = None, lam_mode: str = "tight") -> dict:
    """Compare computed phases with the printed illustration table."""
    started = time.perf_counter()
    instance = instance or figure_instance()
    lam = resolve_lambda(instance, lam_mode)
    tight = lambda_bound(instance, "tight")
    config = EncodingConfig(lam)
    rows = []
    for order, phi_printed, valid in FIGURE_ROWS:
        rec = classify(instance, order, config)
        dev = rec.phase - phi_printed
        rows.append(
            {
                "tour": instance.render_tour(order),
                "phi_printed": phi_printed,
                "phi": rec.phase,
                "deviation": dev,
                "valid": rec.valid,
                "matched": abs(dev) <= PHI_TOLERANCE and rec.valid == valid,
            }
        )
    order, cost = brute_force_optimum(instance)
    best_order, best_cost = FIGURE_OPTIMUM
    optimum_ok = tuple(order) == best_order and abs(cost - best_cost) <= 1e-9
    sim = simulate_report(instance, lam)
    matched = sum(r["matched"] for r in rows)
    return {
        "lambda": lam,
        "lambda_mode": lam_mode,
        "scale_factor": tight / lam,
        "rows": rows,
        "matched": matched,
        "total": len(rows),
        "failed_rows": [r["tour"] for r in rows if not r["matched"]],
        "optimum": {"tour": instance.render_tour(order), "cost": cost, "ok": optimum_ok},
        "simulation_ok": sim["ok"],
        "max_phase_error": sim["max_phase_error"],
        "seconds": time.perf_counter() - started,
        "ok": matched == len(rows) and optimum_ok and sim["ok"],
    }


def _parse_range(text: str) -> list[int]:
    lo, _, hi = text.partition("..")
    if not hi:
        raise argparse.ArgumentTypeError("expected a..b")
    return list(range(int(lo), int(hi) + 1))


def _emit(payload: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(payload, out, indent=2, sort_keys=True)
        out.write("\n")
        return
    rows = payload.get("rows")
    if rows:
        cols = list(rows[0].keys())
        if fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(cols)
            for r in rows:
                w.writerow([_cell(r[c]) for c in cols])
        else:
            cells = [[_cell(r[c]) for c in cols] for r in rows]
            widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
            out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)) + "\n")
            for row in cells:
                out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)) + "\n")
    rest = {k: v for k, v in payload.items() if k != "rows"}
    for key in sorted(rest):
        if fmt == "csv":
            csv.writer(out, lineterminator="\n").writerow([key, _cell(rest[key])])
        else:
            out.write(f"{key}: {_cell(rest[key])}\n")


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}" if abs(v) < 1e-3 and v != 0 else f"{v:.4f}"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="instance file (JSON or CSV); default: built-in figure instance")
    common.add_argument("--n", type=int, help="city count for a random instance (or for resources)")
    common.add_argument("--seed", type=int, default=0, help="seed for random instances")
    common.add_argument("--lambda", dest="lam", default="tight", help="loose, tight or a positive number")
    common.add_argument("--mode", choices=[amp.STANDARD, amp.EXACT], default=amp.EXACT)
    common.add_argument("--format", choices=["json", "csv", "table"], default="table")
    common.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)

    parser = argparse.ArgumentParser(prog="tsp-timereg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="brute-force optimal tour")
    tours = sub.add_parser("tours", parents=[common], help="classified tour table")
    tours.add_argument("--all", action="store_true", help="include invalid route strings")
    sub.add_parser("simulate", parents=[common], help="simulate the pipeline and cross-check")
    sub.add_parser("amplify", parents=[common], help="amplify onto valid tours")
    res = sub.add_parser("resources", parents=[common], help="gate censuses and scaling fits")
    res.add_argument("--n-range", type=_parse_range, help="a..b for scaling fits")
    res.add_argument("--cx-coeffs", type=float, nargs=2, default=(6.0, 0.0), metavar=("A", "C"))
    res.add_argument("--t-coeffs", type=float, nargs=2, default=(4.0, 0.0), metavar=("A", "C"))
    res.add_argument("--epsilon", type=float, default=1e-3)
    res.add_argument("--parallel", action="store_true", help="divide transition depth over disjoint slot pairs")
    sub.add_parser("reproduce-figure", parents=[common], help="check the five-city golden table")
    return parser


def _instance(args) -> TspInstance:
    if args.instance:
        return load_instance(args.instance)
    if args.n is not None:
        return random_instance(args.n, args.seed)
    return figure_instance()


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.ceiling > DEFAULT_CEILING:
        print(f"ceiling may not exceed {DEFAULT_CEILING}", file=sys.stderr)
        return 2
    try:
        if args.command == "resources":
            model = CostModel(tuple(args.cx_coeffs), tuple(args.t_coeffs), args.epsilon, args.parallel)
            n = args.n
            if n is None and args.n_range is None:
                n = _instance(args).n
            payload = resources_report(n, args.n_range, model)
        elif args.command == "reproduce-figure":
            inst = load_instance(args.instance) if args.instance else None
            payload = reproduce_figure_report(inst, args.lam)
        else:
            inst = _instance(args)
            if args.command == "solve":
                payload = solve_report(inst)
            elif args.command == "tours":
                payload = tours_report(inst, resolve_lambda(inst, args.lam), args.all)
            elif args.command == "simulate":
                payload = simulate_report(inst, resolve_lambda(inst, args.lam), args.ceiling)
            else:
                payload = amplify_report(inst, args.mode, args.ceiling)
    except (ValueError, SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, args.format, out)
    return 0 if payload["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
