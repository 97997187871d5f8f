"""Gate censuses, closed-form count predictions and a linear cost model.

The cost model turns a census of multi-controlled gates into CX / T / depth
estimates using affine per-gate costs. Its default coefficients are
illustrative placeholders for a linear-size decomposition, not measured
constants.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .circuit import MCPHASE, MCX, Circuit, RegisterLayout, gate_census
from .encoding import EncodingConfig, cost_oracle, uniform_prep, validity_oracle
from .instance import TspInstance

Census = Mapping[tuple[str, int], int]


def predicted_validity_counts(n: int) -> Counter:
    b = RegisterLayout(n).b
    return Counter({(MCX, b): (n - 1) ** 2, (MCX, n - 1): 1})


def predicted_cost_counts(n: int) -> Counter:
    layout = RegisterLayout(n)
    m = n - 1
    counts = Counter()
    counts[(MCPHASE, layout.b)] += 2 * m
    counts[(MCPHASE, 2 * layout.b)] += (layout.T - 1) * m * m
    return counts


@dataclass(frozen=True)
class CostModel:
    """Per-gate costs for a k-controlled gate: CX = a*k + c, T = a_t*k + c_t.

    Phase gates also pay ceil(log2(1/epsilon)) T gates for synthesis.
    """

    mcx_cx: tuple[float, float] = (6.0, 0.0)
    mcx_t: tuple[float, float] = (4.0, 0.0)
    epsilon: float = 1e-3
    parallel_slots: bool = False

    def __post_init__(self) -> None:
        if min(*self.mcx_cx, *self.mcx_t) < 0:
            raise ValueError("cost coefficients must be non-negative")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ResourceReport:
    census: dict = field(default_factory=dict)
    cx_estimate: int = 0
    t_estimate: int = 0
    depth_estimate: int = 0
    model: CostModel = CostModel()
    n: int | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "census": [
                {"kind": k, "arity": a, "count": c} for (k, a), c in sorted(self.census.items())
            ],
            "cx_estimate": self.cx_estimate,
            "t_estimate": self.t_estimate,
            "depth_estimate": self.depth_estimate,
            "model": self.model.to_dict(),
        }


def estimate(census: Census, model: CostModel = CostModel(), n: int | None = None) -> ResourceReport:
    """Apply ``model`` to the multi-controlled entries of ``census``.

    Depth is the serial CX sum. With ``model.parallel_slots`` and ``n`` given,
    the 2b-controlled transition phases are spread over floor(T/2) disjoint
    slot pairs that run side by side.
    """
    a, c = model.mcx_cx
    at, ct = model.mcx_t
    synth = math.ceil(math.log2(1 / model.epsilon))
    transition_arity = None
    lanes = 1
    if model.parallel_slots:
        if n is None:
            raise ValueError("parallel_slots needs n")
        layout = RegisterLayout(n)
        transition_arity = 2 * layout.b
        lanes = max(1, layout.T // 2)
    cx = t = 0.0
    serial = parallel = 0.0
    for (kind, k), count in census.items():
        if kind not in (MCX, MCPHASE) or count == 0:
            continue
        gate_cx = count * (a * k + c)
        cx += gate_cx
        t += count * (at * k + ct)
        if kind == MCPHASE:
            t += count * synth
        if kind == MCPHASE and k == transition_arity:
            parallel += gate_cx
        else:
            serial += gate_cx
    depth = serial + math.ceil(parallel / lanes)
    return ResourceReport(
        census=dict(census),
        cx_estimate=int(round(cx)),
        t_estimate=int(round(t)),
        depth_estimate=int(round(depth)),
        model=model,
        n=n,
    )


def _zero_free_instance(n: int) -> TspInstance:
    # Only the gate structure matters; include_zero_angle_gates keeps every gate.
    return TspInstance(n=n, cost=np.ones((n, n)))


def oracle_circuit(n: int, which: str) -> Circuit:
    layout = RegisterLayout(n)
    if which == "cost":
        return cost_oracle(_zero_free_instance(n), layout, EncodingConfig(1.0, True))
    if which == "validity":
        return validity_oracle(layout)
    if which == "prep":
        return uniform_prep(layout)
    raise ValueError(f"unknown oracle {which!r}")


def gate_total(n: int, which: str) -> int:
    """Multi-controlled gates in the constructed block (H gates for ``prep``)."""
    census = gate_census(oracle_circuit(n, which))
    if which == "prep":
        return sum(census.values())
    return sum(v for (kind, _), v in census.items() if kind in (MCX, MCPHASE))


def scaling_fit(n_range: Iterable[int], which: str) -> float:
    """Least-squares slope of log(gate count) against log(n - 1).

    The regressor is the number of time slots, n - 1, which is what the
    counts are polynomial in.
    """
    ns = sorted(set(int(v) for v in n_range))
    if len(ns) < 5 or ns[0] < 4:
        raise ValueError("need at least 5 values of n, all >= 4")
    xs = np.log(np.array(ns, dtype=float) - 1)
    ys = np.log(np.array([gate_total(n, which) for n in ns], dtype=float))
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def pipeline_report(n: int, model: CostModel = CostModel()) -> dict:
    """Predicted vs constructed censuses for both oracles, plus model estimates."""
    val = gate_census(oracle_circuit(n, "validity"))
    cost = gate_census(oracle_circuit(n, "cost"))
    combined = val + cost
    return {
        "n": n,
        "validity": {"predicted": _census_rows(predicted_validity_counts(n)), "constructed": _census_rows(val)},
        "cost": {"predicted": _census_rows(predicted_cost_counts(n)), "constructed": _census_rows(cost)},
        "matches": val == predicted_validity_counts(n) and cost == predicted_cost_counts(n),
        "estimate": estimate(combined, model, n).to_dict(),
    }


def _census_rows(census: Census) -> list[dict]:
    return [{"kind": k, "arity": a, "count": c} for (k, a), c in sorted(census.items())]
