"""Gate-level IR: register layout, gates with control polarities, and census.

Qubit ``k`` is bit ``k`` of a basis-state index (little-endian). Route slot
``t`` holds its label in qubits ``t*b .. t*b + b - 1``, least significant bit
first; parity ancillas and the flag follow.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

H = "H"
X = "X"
MCX = "MCX"
MCPHASE = "MCPhase"
KINDS = (H, X, MCX, MCPHASE)

Control = tuple[int, int]


@dataclass(frozen=True)
class RegisterLayout:
    n: int

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"need n >= 3, got {self.n}")

    @property
    def T(self) -> int:
        return self.n - 1

    @property
    def b(self) -> int:
        return math.ceil(math.log2(self.n - 1))

    @property
    def num_route_qubits(self) -> int:
        return self.T * self.b

    @property
    def num_labels(self) -> int:
        return self.n - 1

    def slot_qubits(self, t: int) -> tuple[int, ...]:
        if not 0 <= t < self.T:
            raise IndexError(f"slot {t} outside 0..{self.T - 1}")
        return tuple(range(t * self.b, (t + 1) * self.b))

    @property
    def route_qubits(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.slot_qubits(t) for t in range(self.T))

    @property
    def parity_qubits(self) -> tuple[int, ...]:
        base = self.num_route_qubits
        return tuple(range(base, base + self.n - 1))

    @property
    def flag_qubit(self) -> int:
        return self.num_route_qubits + self.n - 1

    @property
    def total_qubits(self) -> int:
        return self.num_route_qubits + self.n

    def label_controls(self, t: int, label: int) -> tuple[Control, ...]:
        """Controls that fire exactly when slot ``t`` holds ``label``."""
        if not 0 <= label < 1 << self.b:
            raise ValueError(f"label {label} does not fit in {self.b} bits")
        return tuple((q, (label >> k) & 1) for k, q in enumerate(self.slot_qubits(t)))


def make_layout(n: int) -> RegisterLayout:
    return RegisterLayout(n)


@dataclass(frozen=True)
class Gate:
    """A single-target gate.

    ``MCPhase`` multiplies by ``exp(1j*angle)`` the basis states on which every
    control matches its polarity and the target (if any) is 1. With
    ``target=None`` it is a phase on the control pattern alone, i.e. a
    multi-controlled global phase.
    """

    kind: str
    target: int | None
    controls: tuple[Control, ...] = ()
    angle: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        controls = tuple((int(q), int(p)) for q, p in self.controls)
        object.__setattr__(self, "controls", controls)
        if self.kind in (H, X) and controls:
            raise ValueError(f"{self.kind} takes no controls")
        if self.target is None and self.kind != MCPHASE:
            raise ValueError(f"{self.kind} needs a target")
        qubits = [q for q, _ in controls]
        if self.target is not None:
            qubits.append(self.target)
        if len(set(qubits)) != len(qubits):
            raise ValueError("gate qubits must be distinct")
        if any(q < 0 for q in qubits):
            raise ValueError("negative qubit index")
        if any(p not in (0, 1) for _, p in controls):
            raise ValueError("control polarity must be 0 or 1")
        if self.kind == MCPHASE and self.target is None and not controls:
            raise ValueError("MCPhase without target needs controls")

    @property
    def arity(self) -> int:
        return len(self.controls)

    @property
    def qubits(self) -> tuple[int, ...]:
        qs = tuple(q for q, _ in self.controls)
        return qs if self.target is None else qs + (self.target,)

    def inverse(self) -> Gate:
        if self.kind == MCPHASE:
            return Gate(MCPHASE, self.target, self.controls, -self.angle)
        return self


def h(q: int) -> Gate:
    return Gate(H, q)


def x(q: int) -> Gate:
    return Gate(X, q)


def mcx(target: int, controls: Iterable[Control]) -> Gate:
    return Gate(MCX, target, tuple(controls))


def mcphase(angle: float, controls: Iterable[Control], target: int | None = None) -> Gate:
    return Gate(MCPHASE, target, tuple(controls), float(angle))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        for g in gates:
            if any(q >= self.num_qubits for q in g.qubits):
                raise ValueError(f"{g} touches a qubit >= {self.num_qubits}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


def compose(*circuits: Circuit) -> Circuit:
    """Concatenate circuits acting on the same number of qubits."""
    if not circuits:
        raise ValueError("compose needs at least one circuit")
    q = circuits[0].num_qubits
    for c in circuits[1:]:
        if c.num_qubits != q:
            raise ValueError(f"qubit count mismatch: {q} vs {c.num_qubits}")
    return Circuit(q, tuple(g for c in circuits for g in c.gates))


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.num_qubits, tuple(g.inverse() for g in reversed(c.gates)))


def gate_census(c: Circuit) -> Counter:
    """Counts keyed by ``(kind, number of controls)``."""
    return Counter((g.kind, g.arity) for g in c.gates)


def lower_polarities(c: Circuit) -> Circuit:
    """Rewrite 0-polarity controls as X-conjugated positive controls."""
    out: list[Gate] = []
    for g in c.gates:
        flips = [q for q, p in g.controls if p == 0]
        if not flips:
            out.append(g)
            continue
        out.extend(x(q) for q in flips)
        out.append(Gate(g.kind, g.target, tuple((q, 1) for q, _ in g.controls), g.angle))
        out.extend(x(q) for q in flips)
    return Circuit(c.num_qubits, tuple(out))


def format_gate(g: Gate) -> str:
    parts = [g.kind, "*" if g.target is None else str(g.target)]
    parts.extend(f"{'+' if p else '-'}{q}" for q, p in g.controls)
    if g.kind == MCPHASE:
        parts.append(repr(g.angle))
    return " ".join(parts)


def dump(c: Circuit) -> str:
    """One gate per line: ``KIND target [+q|-q ...] [angle]``."""
    lines = [f"# qubits {c.num_qubits}"]
    lines.extend(format_gate(g) for g in c.gates)
    return "\n".join(lines) + "\n"


def parse_dump(text: str) -> Circuit:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    header = lines[0]
    if header[:2] != ["#", "qubits"]:
        raise ValueError("missing '# qubits' header")
    gates = []
    for parts in lines[1:]:
        kind, target, rest = parts[0], parts[1], parts[2:]
        angle = 0.0
        if kind == MCPHASE:
            angle = float(rest.pop())
        controls: Sequence[Control] = [(int(tok[1:]), 1 if tok[0] == "+" else 0) for tok in rest]
        gates.append(Gate(kind, None if target == "*" else int(target), tuple(controls), angle))
    return Circuit(int(header[2]), tuple(gates))
