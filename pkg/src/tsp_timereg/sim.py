"""Dense statevector simulation of the gate IR.

Amplitudes are viewed as a rank-``q`` tensor of shape ``(2,) * q`` in C order,
so qubit ``k`` lives on axis ``q - 1 - k``. Controlled gates index the
satisfied-control slab directly; nothing is ever expanded to a matrix here.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .circuit import H, MCPHASE, MCX, X, Circuit, Gate, RegisterLayout

DEFAULT_CEILING = 24
_SQRT1_2 = 1.0 / np.sqrt(2.0)


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise SimulationError(
                f"expected {1 << self.num_qubits} amplitudes, got {self.amplitudes.shape}"
            )

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy())


def init_state(q: int, ceiling: int = DEFAULT_CEILING) -> StateVector:
    if not 1 <= q <= ceiling:
        raise SimulationError(f"qubit count {q} outside 1..{ceiling}")
    amps = np.zeros(1 << q, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(q, amps)


def basis_state(q: int, index: int) -> StateVector:
    amps = np.zeros(1 << q, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(q, amps)


def _apply_inplace(psi: np.ndarray, q: int, g: Gate) -> None:
    """Apply ``g`` to the ``(2,)*q`` tensor ``psi`` in place."""
    for qb in g.qubits:
        if qb >= q:
            raise SimulationError(f"gate {g} touches qubit {qb} but state has {q}")
    idx: list = [slice(None)] * q
    for c, p in g.controls:
        idx[q - 1 - c] = p
    if g.kind == MCPHASE:
        if g.target is not None:
            idx[q - 1 - g.target] = 1
        psi[tuple(idx)] *= np.exp(1j * g.angle)
        return
    ax = q - 1 - g.target
    idx[ax] = 0
    i0 = tuple(idx)
    idx[ax] = 1
    i1 = tuple(idx)
    a = np.array(psi[i0], copy=True)
    if g.kind in (X, MCX):
        psi[i0] = psi[i1]
        psi[i1] = a
    elif g.kind == H:
        b = np.array(psi[i1], copy=True)
        psi[i0] = (a + b) * _SQRT1_2
        psi[i1] = (a - b) * _SQRT1_2
    else:  # pragma: no cover - Gate validates kinds
        raise SimulationError(f"unsupported gate kind {g.kind}")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    out = state.copy()
    _apply_inplace(out.amplitudes.reshape((2,) * state.num_qubits), state.num_qubits, gate)
    return out


def run(state: StateVector, circuit: Circuit) -> StateVector:
    if circuit.num_qubits != state.num_qubits:
        raise SimulationError(
            f"circuit has {circuit.num_qubits} qubits, state has {state.num_qubits}"
        )
    out = state.copy()
    psi = out.amplitudes.reshape((2,) * state.num_qubits)
    for g in circuit.gates:
        _apply_inplace(psi, state.num_qubits, g)
    return out


def subspace_probability(state: StateVector, qubit: int, value: int = 1) -> float:
    q = state.num_qubits
    if not 0 <= qubit < q:
        raise SimulationError(f"qubit {qubit} outside 0..{q - 1}")
    psi = state.amplitudes.reshape((2,) * q)
    idx: list = [slice(None)] * q
    idx[q - 1 - qubit] = value
    slab = psi[tuple(idx)]
    return float(np.vdot(slab, slab).real)


def ancilla_leakage(state: StateVector, layout: RegisterLayout) -> float:
    """Total probability that any parity ancilla or the flag is nonzero."""
    grid = state.amplitudes.reshape(-1, 1 << layout.num_route_qubits)
    return float(np.sum(np.abs(grid[1:]) ** 2))


class RouteEntry(NamedTuple):
    pattern: int
    labels: tuple[int, ...]
    amplitude: complex
    parities: tuple[int, ...]
    flag: int
    branches: int


def route_marginals(state: StateVector, layout: RegisterLayout, tol: float = 1e-12) -> list[RouteEntry]:
    """Per route pattern: its amplitude and the ancilla values it is paired with.

    When the ancillas are a classical function of the route there is exactly
    one ancilla branch per pattern. Patterns paired with several branches are
    reported with ``branches > 1`` and the largest branch's values; patterns
    with no weight above ``tol`` report ``branches == 0``.
    """
    if state.num_qubits != layout.total_qubits:
        raise SimulationError("state does not match layout")
    from .encoding import decode_basis_index

    r = layout.num_route_qubits
    grid = state.amplitudes.reshape(-1, 1 << r)
    mags = np.abs(grid)
    branches = (mags > tol).sum(axis=0)
    best = mags.argmax(axis=0)
    n_anc = layout.n - 1
    out = []
    for pattern in range(1 << r):
        anc = int(best[pattern])
        parities = tuple((anc >> i) & 1 for i in range(n_anc))
        out.append(
            RouteEntry(
                pattern=pattern,
                labels=decode_basis_index(layout, pattern),
                amplitude=complex(grid[anc, pattern]),
                parities=parities,
                flag=(anc >> n_anc) & 1,
                branches=int(branches[pattern]),
            )
        )
    return out


def dump_csv(state: StateVector, tol: float = 0.0) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "re", "im"])
    for i, a in enumerate(state.amplitudes):
        if abs(a) > tol:
            w.writerow([i, repr(float(a.real)), repr(float(a.imag))])
    return buf.getvalue()


def load_csv(text: str, num_qubits: int) -> StateVector:
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    for row in csv.DictReader(io.StringIO(text)):
        amps[int(row["index"])] = complex(float(row["re"]), float(row["im"]))
    return StateVector(num_qubits, amps)


def gate_matrix(gate: Gate, q: int) -> np.ndarray:
    """Dense ``2**q`` unitary of ``gate``, built column by column from bit logic.

    This is an independent reference for the tensor-slab kernel above.
    """
    dim = 1 << q
    m = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        fires = all(((col >> c) & 1) == p for c, p in gate.controls)
        if gate.kind == MCPHASE:
            hit = fires and (gate.target is None or (col >> gate.target) & 1)
            m[col, col] = np.exp(1j * gate.angle) if hit else 1.0
        elif gate.kind in (X, MCX):
            m[col ^ (1 << gate.target) if fires else col, col] = 1.0
        elif gate.kind == H:
            bit = (col >> gate.target) & 1
            flipped = col ^ (1 << gate.target)
            m[col, col] = -_SQRT1_2 if bit else _SQRT1_2
            m[flipped, col] = _SQRT1_2
    return m


def circuit_matrix(circuit: Circuit) -> np.ndarray:
    u = np.eye(1 << circuit.num_qubits, dtype=np.complex128)
    for g in circuit.gates:
        u = gate_matrix(g, circuit.num_qubits) @ u
    return u
