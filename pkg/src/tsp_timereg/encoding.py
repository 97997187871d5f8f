"""Circuit blocks of the time-register encoding and their classical mirror."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .circuit import (
    Circuit,
    Gate,
    RegisterLayout,
    compose,
    h,
    inverse,
    mcphase,
    mcx,
)
from .instance import BRUTE_FORCE_LIMIT, TspInstance, lambda_bound


@dataclass(frozen=True)
class EncodingConfig:
    """``lam`` scales tour lengths into phases ``L / lam`` (radians)."""

    lam: float
    include_zero_angle_gates: bool = True

    def __post_init__(self) -> None:
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")


def default_config(instance: TspInstance, include_zero_angle_gates: bool = True) -> EncodingConfig:
    """Tight scale (longest tour) when brute force is affordable, else max edge * n."""
    mode = "tight" if instance.n <= BRUTE_FORCE_LIMIT else "loose"
    return EncodingConfig(lambda_bound(instance, mode), include_zero_angle_gates)


@dataclass(frozen=True)
class TourRecord:
    labels: tuple[int, ...]
    valid: int
    cost: float
    phase: float


def uniform_prep(layout: RegisterLayout) -> Circuit:
    gates = [h(q) for slot in layout.route_qubits for q in slot]
    return Circuit(layout.total_qubits, tuple(gates))


def validity_oracle(layout: RegisterLayout) -> Circuit:
    """|x>|0..0>|0> -> |x>|p_0(x)..p_{n-2}(x)>|v(x)>.

    Parity ancilla ``i`` is toggled once per slot holding label ``i``; the
    flag is the AND of all parities. Ancillas are left computed.
    """
    gates: list[Gate] = []
    for t in range(layout.T):
        for i, anc in enumerate(layout.parity_qubits):
            gates.append(mcx(anc, layout.label_controls(t, i)))
    gates.append(mcx(layout.flag_qubit, [(a, 1) for a in layout.parity_qubits]))
    return Circuit(layout.total_qubits, tuple(gates))


def validity_phase_oracle(layout: RegisterLayout, angle: float = math.pi) -> Circuit:
    """|x> -> exp(i*angle*v(x)) |x> with every ancilla returned to |0>."""
    compute = validity_oracle(layout)
    kick = Circuit(layout.total_qubits, (mcphase(angle, (), target=layout.flag_qubit),))
    return compose(compute, kick, inverse(compute))


def cost_oracle(instance: TspInstance, layout: RegisterLayout, config: EncodingConfig) -> Circuit:
    """Diagonal |x> -> exp(i L(x) / lam) |x>, multiplexed over labels.

    One b-controlled phase per label for the start edge and the return edge,
    and one 2b-controlled phase per ordered label pair for each of the T-1
    transitions. Out-of-range slot values (>= n-1) pick up no phase.
    """
    if layout.n != instance.n:
        raise ValueError("layout and instance disagree on n")
    if not config.lam > 0:
        raise ValueError("lambda must be positive")
    c = instance.cost
    s = instance.start
    m = layout.num_labels
    lam = config.lam
    gates: list[Gate] = []

    def emit(angle: float, controls) -> None:
        if angle != 0.0 or config.include_zero_angle_gates:
            gates.append(mcphase(angle, controls))

    for i in range(m):
        emit(c[s, i] / lam, layout.label_controls(0, i))
    for t in range(layout.T - 1):
        for i in range(m):
            for j in range(m):
                emit(c[i, j] / lam, layout.label_controls(t, i) + layout.label_controls(t + 1, j))
    for i in range(m):
        emit(c[i, s] / lam, layout.label_controls(layout.T - 1, i))
    return Circuit(layout.total_qubits, tuple(gates))


def decode_basis_index(layout: RegisterLayout, index: int) -> tuple[int, ...]:
    """Route labels of a basis index; bits above the route register are ignored."""
    if not 0 <= index < 1 << layout.num_route_qubits:
        raise ValueError(f"route index {index} outside 0..{(1 << layout.num_route_qubits) - 1}")
    mask = (1 << layout.b) - 1
    return tuple((index >> (t * layout.b)) & mask for t in range(layout.T))


def encode_labels(layout: RegisterLayout, labels: Sequence[int]) -> int:
    if len(labels) != layout.T:
        raise ValueError(f"expected {layout.T} labels, got {len(labels)}")
    index = 0
    for t, lab in enumerate(labels):
        if not 0 <= lab < 1 << layout.b:
            raise ValueError(f"label {lab} does not fit in {layout.b} bits")
        index |= lab << (t * layout.b)
    return index


def is_valid_labels(labels: Sequence[int], n: int) -> bool:
    return sorted(labels) == list(range(n - 1))


def phase_cost(instance: TspInstance, labels: Sequence[int]) -> float:
    """Tour length counting only edges whose slot labels are real cities."""
    c = instance.cost
    s = instance.start
    m = instance.n - 1
    total = 0.0
    if labels[0] < m:
        total += c[s, labels[0]]
    for a, b in zip(labels, labels[1:]):
        if a < m and b < m:
            total += c[a, b]
    if labels[-1] < m:
        total += c[labels[-1], s]
    return float(total)


def classify(instance: TspInstance, labels: Sequence[int], config: EncodingConfig) -> TourRecord:
    """What the two oracles do to one route basis state, computed classically."""
    labels = tuple(int(v) for v in labels)
    if len(labels) != instance.n - 1:
        raise ValueError(f"expected {instance.n - 1} labels, got {len(labels)}")
    cost = phase_cost(instance, labels)
    return TourRecord(
        labels=labels,
        valid=int(is_valid_labels(labels, instance.n)),
        cost=cost,
        phase=cost / config.lam,
    )


def pipeline(instance: TspInstance, config: EncodingConfig) -> Circuit:
    """Uniform preparation, validity oracle, then cost oracle."""
    layout = RegisterLayout(instance.n)
    return compose(uniform_prep(layout), validity_oracle(layout), cost_oracle(instance, layout, config))
