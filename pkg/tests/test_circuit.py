import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsp_timereg.circuit import (
    H,
    MCPHASE,
    MCX,
    X,
    Circuit,
    Gate,
    compose,
    dump,
    gate_census,
    h,
    inverse,
    lower_polarities,
    make_layout,
    mcphase,
    mcx,
    parse_dump,
    x,
)
from tsp_timereg.encoding import cost_oracle, uniform_prep, validity_oracle, EncodingConfig
from tsp_timereg.sim import basis_state, circuit_matrix, run


@pytest.mark.parametrize("n, T, b, total", [(5, 4, 2, 13), (3, 2, 1, 5), (6, 5, 3, 21)])
def test_layout_sizes(n, T, b, total):
    lay = make_layout(n)
    assert (lay.T, lay.b, lay.total_qubits) == (T, b, total)
    assert lay.num_route_qubits == (n - 1) * math.ceil(math.log2(n - 1))


def test_layout_indices_contiguous():
    lay = make_layout(5)
    qubits = [q for slot in lay.route_qubits for q in slot] + list(lay.parity_qubits) + [lay.flag_qubit]
    assert qubits == list(range(13))
    assert lay.slot_qubits(2) == (4, 5)
    assert lay.parity_qubits == (8, 9, 10, 11)
    assert lay.flag_qubit == 12


def test_layout_rejects_small_n():
    with pytest.raises(ValueError):
        make_layout(2)


def test_layout_injective():
    seen = {}
    for n in range(3, 30):
        lay = make_layout(n)
        key = (lay.T, lay.b, lay.total_qubits)
        assert key not in seen
        seen[key] = n
        assert make_layout(n) == lay


def test_label_controls_little_endian():
    lay = make_layout(5)
    assert lay.label_controls(1, 2) == ((2, 0), (3, 1))


@pytest.mark.parametrize(
    "bad",
    [
        lambda: Gate(H, 0, ((1, 1),)),
        lambda: Gate(MCX, 0, ((0, 1),)),
        lambda: Gate(MCX, 2, ((0, 1), (0, 0))),
        lambda: Gate(MCX, None, ((0, 1),)),
        lambda: Gate("CZ", 0),
        lambda: Gate(MCX, 1, ((0, 2),)),
        lambda: Gate(MCPHASE, None, ()),
    ],
)
def test_gate_validation(bad):
    with pytest.raises(ValueError):
        bad()


def test_circuit_rejects_out_of_range_qubit():
    with pytest.raises(ValueError):
        Circuit(2, (h(2),))


def test_compose_and_census_additive():
    a = Circuit(3, (h(0), mcx(2, [(0, 1), (1, 0)])))
    b = Circuit(3, (mcphase(0.3, [(0, 1)], target=1), x(2)))
    empty = Circuit(3)
    assert compose(empty, a) == a
    ab = compose(a, b)
    assert len(ab) == len(a) + len(b)
    assert gate_census(ab) == gate_census(a) + gate_census(b)
    with pytest.raises(ValueError):
        compose(a, Circuit(4))


def test_inverse_rules():
    assert inverse(Circuit(1, (h(0),))) == Circuit(1, (h(0),))
    g = mcphase(0.7, [(0, 1)], target=1)
    assert inverse(Circuit(2, (g,))).gates[0].angle == -0.7
    c = Circuit(3, (h(0), g, x(2)))
    assert [gg.kind for gg in inverse(c)] == [X, MCPHASE, H]


def random_circuit(rng, q, length):
    gates = []
    for _ in range(length):
        kind = rng.integers(4)
        qs = rng.permutation(q)
        if kind == 0:
            gates.append(h(int(qs[0])))
        elif kind == 1:
            gates.append(x(int(qs[0])))
        else:
            k = int(rng.integers(0, q))
            controls = [(int(c), int(rng.integers(2))) for c in qs[1 : 1 + k]]
            if kind == 2:
                gates.append(mcx(int(qs[0]), controls))
            elif controls and rng.random() < 0.3:
                gates.append(mcphase(rng.uniform(-math.pi, math.pi), controls))
            else:
                gates.append(mcphase(rng.uniform(-math.pi, math.pi), controls, target=int(qs[0])))
    return Circuit(q, tuple(gates))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_double_inverse_is_identity_structurally(seed):
    c = random_circuit(np.random.default_rng(seed), 5, 20)
    assert inverse(inverse(c)) == c


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_census_of_compose(seed):
    rng = np.random.default_rng(seed)
    a, b = random_circuit(rng, 4, 10), random_circuit(rng, 4, 7)
    assert gate_census(compose(a, b)) == gate_census(a) + gate_census(b)


def test_compose_with_inverse_is_identity_matrix():
    c = random_circuit(np.random.default_rng(7), 4, 30)
    u = circuit_matrix(compose(c, inverse(c)))
    np.testing.assert_allclose(u, np.eye(16), atol=1e-12)


def test_census_validity_n5():
    census = gate_census(validity_oracle(make_layout(5)))
    assert census == Counter({(MCX, 2): 16, (MCX, 4): 1})


def test_census_validity_lowered_counts_polarity_flips():
    lay = make_layout(5)
    lowered = gate_census(lower_polarities(validity_oracle(lay)))
    # Labels 0..3 in two bits have 2+1+1+0 zero bits; each is flipped and unflipped, in every slot.
    assert lowered[(X, 0)] == 2 * 4 * (2 + 1 + 1 + 0)
    assert lowered[(MCX, 2)] == 16 and lowered[(MCX, 4)] == 1


def test_lowering_preserves_action():
    lay = make_layout(3)
    c = validity_oracle(lay)
    np.testing.assert_allclose(circuit_matrix(lower_polarities(c)), circuit_matrix(c), atol=1e-12)


def test_census_cost_n5(fig):
    lay = make_layout(5)
    census = gate_census(cost_oracle(fig, lay, EncodingConfig(3.42, True)))
    assert census == Counter({(MCPHASE, 2): 8, (MCPHASE, 4): 48})


def test_census_empty():
    assert gate_census(Circuit(3)) == Counter()


def test_dump_format_and_round_trip():
    c = Circuit(
        4,
        (h(0), x(1), mcx(3, [(0, 1), (1, 0)]), mcphase(0.25, [(2, 0)], target=3), mcphase(-1.5, [(0, 1), (1, 1)])),
    )
    text = dump(c)
    assert text.splitlines() == [
        "# qubits 4",
        "H 0",
        "X 1",
        "MCX 3 +0 -1",
        "MCPhase 3 -2 0.25",
        "MCPhase * +0 +1 -1.5",
    ]
    assert parse_dump(text) == c


def test_dump_golden_prep_n3():
    assert dump(uniform_prep(make_layout(3))) == "# qubits 5\nH 0\nH 1\n"


def test_run_respects_polarity():
    # MCX fires on control 0 = |0>, leaves |1> alone.
    c = Circuit(2, (mcx(1, [(0, 0)]),))
    assert run(basis_state(2, 0), c).amplitudes[2] == 1
    assert run(basis_state(2, 1), c).amplitudes[1] == 1
