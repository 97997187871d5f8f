"""Amplitude amplification onto the valid-tour subspace.

Standard mode runs plain Grover iterations. Exact mode uses a phase-matched
iteration: oracle and diffusion share one phase ``phi`` chosen so that ``J``
iterations land on the valid subspace with probability one.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

from .circuit import Circuit, RegisterLayout, compose, inverse, mcphase, x
from .encoding import uniform_prep, validity_phase_oracle
from .instance import TspInstance
from .sim import DEFAULT_CEILING, SimulationError, StateVector, init_state, run, subspace_probability

STANDARD = "standard"
EXACT = "exact"


def success_probability(n: int) -> float:
    """Weight of the valid tours in the uniform route state: (n-1)! / 2**(T*b)."""
    layout = RegisterLayout(n)
    return math.factorial(n - 1) / float(1 << layout.num_route_qubits)


def valid_fraction(n: int) -> float:
    """(n-1)! / (n-1)**(n-1): valid share among strings over the n-1 real labels."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    m = n - 1
    return math.factorial(m) / float(m**m)


def stirling_estimate(n: int) -> float:
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    m = n - 1
    return math.sqrt(2 * math.pi * m) * math.exp(-m)


def diffusion(layout: RegisterLayout, phase_angle: float = math.pi) -> Circuit:
    """Phase ``phase_angle`` on |psi_unif> of the route register."""
    prep = uniform_prep(layout)
    route = [q for slot in layout.route_qubits for q in slot]
    target, rest = route[0], route[1:]
    zero = Circuit(
        layout.total_qubits,
        (x(target), mcphase(phase_angle, [(q, 0) for q in rest], target=target), x(target)),
    )
    return compose(inverse(prep), zero, prep)


def grover_iteration(layout: RegisterLayout, phase_angle: float = math.pi, hook: Circuit | None = None) -> Circuit:
    """Validity phase oracle, optional ``hook`` circuit, then diffusion.

    With ``phase_angle = pi`` this is minus the textbook Grover operator; the
    global sign does not affect any probability.
    """
    parts = [validity_phase_oracle(layout, phase_angle)]
    if hook is not None:
        parts.append(hook)
    parts.append(diffusion(layout, phase_angle))
    return compose(*parts)


@dataclass(frozen=True)
class AmplificationSchedule:
    p: float
    theta: float
    iterations: int
    mode: str
    phase_angle: float
    predicted_success: float

    def to_dict(self) -> dict:
        return asdict(self)


def standard_iterations(p: float) -> int:
    theta = math.asin(math.sqrt(p))
    x = math.pi / (4 * theta) - 0.5
    # floor(x + 1/2) rounds halves up.
    return max(0, math.floor(x + 0.5))


def make_schedule(p: float, mode: str = EXACT) -> AmplificationSchedule:
    if not 0 < p < 1:
        raise ValueError(f"success probability must lie in (0, 1), got {p}")
    theta = math.asin(math.sqrt(p))
    if mode == STANDARD:
        j = standard_iterations(p)
        return AmplificationSchedule(p, theta, j, mode, math.pi, math.sin((2 * j + 1) * theta) ** 2)
    if mode == EXACT:
        j = math.ceil((math.pi / (2 * theta) - 1) / 2)
        ratio = min(1.0, math.sin(math.pi / (4 * j + 2)) / math.sin(theta))
        return AmplificationSchedule(p, theta, j, mode, 2 * math.asin(ratio), 1.0)
    raise ValueError(f"unknown amplification mode {mode!r}")


class Amplified(NamedTuple):
    state: StateVector
    achieved: float
    schedule: AmplificationSchedule


def prepared_state(layout: RegisterLayout, ceiling: int = DEFAULT_CEILING) -> StateVector:
    if layout.total_qubits > ceiling:
        raise SimulationError(f"{layout.total_qubits} qubits exceeds ceiling {ceiling}")
    return run(init_state(layout.total_qubits, ceiling), uniform_prep(layout))


def valid_probability(state: StateVector, layout: RegisterLayout) -> float:
    """Weight on valid route patterns, read by computing the flag and uncomputing it."""
    from .encoding import validity_oracle

    return subspace_probability(run(state, validity_oracle(layout)), layout.flag_qubit, 1)


def amplify_valid(
    instance: TspInstance | int,
    mode: str = EXACT,
    ceiling: int = DEFAULT_CEILING,
    hook: Circuit | None = None,
    iterations: int | None = None,
) -> Amplified:
    """Prepare |psi_unif> and rotate it toward the valid tours.

    ``iterations`` overrides the schedule's count (standard mode only).
    """
    n = instance if isinstance(instance, int) else instance.n
    layout = RegisterLayout(n)
    schedule = make_schedule(success_probability(n), mode)
    if iterations is not None:
        if mode != STANDARD:
            raise ValueError("an explicit iteration count needs standard mode")
        theta = schedule.theta
        schedule = AmplificationSchedule(
            schedule.p, theta, iterations, mode, math.pi, math.sin((2 * iterations + 1) * theta) ** 2
        )
    state = prepared_state(layout, ceiling)
    step = grover_iteration(layout, schedule.phase_angle, hook)
    for _ in range(schedule.iterations):
        state = run(state, step)
    return Amplified(state, valid_probability(state, layout), schedule)
