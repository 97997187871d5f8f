import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsp_timereg.instance import (
    FIGURE_COST,
    InstanceError,
    TspInstance,
    brute_force_optimum,
    from_matrix,
    instance_to_json,
    lambda_bound,
    longest_tour_cost,
    parse_instance,
    random_instance,
    tour_cost,
)

from conftest import random_cost


def naive_cost(matrix, start, order):
    path = [start, *order, start]
    return sum(matrix[a][b] for a, b in zip(path, path[1:]))


def test_parse_figure_json():
    doc = json.dumps({"n": 5, "start": 4, "cost": [list(r) for r in FIGURE_COST]})
    inst = parse_instance(doc)
    assert inst.n == 5
    assert inst.start == 4
    assert inst.labels == (0, 1, 2, 3, 4)
    np.testing.assert_array_equal(inst.cost, np.array(FIGURE_COST))


def test_parse_csv_assumes_last_city_start():
    text = "0,1,2\n3,0,4\n5,6,0\n"
    inst = parse_instance(text)
    assert inst.n == 3 and inst.start == 2
    assert inst.cost[2, 1] == 6.0


def test_zero_matrix_instance(zero3):
    for order in itertools.permutations(range(2)):
        assert tour_cost(zero3, order) == 0.0


@pytest.mark.parametrize(
    "doc",
    [
        '{"n": 2, "cost": [[0, 1], [1, 0]]}',
        '{"n": 3, "cost": [[0, 1, 2], [1, 0, 2]]}',
        '{"n": 3, "cost": [[0, -1, 2], [1, 0, 2], [1, 1, 0]]}',
        '{"n": 3, "cost": [[0, NaN, 2], [1, 0, 2], [1, 1, 0]]}',
        '{"n": 3, "n": 3, "cost": [[0, 1, 2], [1, 0, 2], [1, 1, 0]]}',
        '{"cost": [[0, 1, 2], [1, 0, 2], [1, 1, 0]]}',
        '{"n": 3, "start": 7, "cost": [[0, 1, 2], [1, 0, 2], [1, 1, 0]]}',
        "0,1\n1,0\n",
        "0,1,2\n1,0\n2,2,0\n",
    ],
)
def test_parse_rejects(doc):
    with pytest.raises(InstanceError):
        parse_instance(doc)


def test_diagonal_forced_to_zero_and_may_be_null():
    inst = parse_instance('{"n": 3, "cost": [[null, 1, 2], [3, 9, 4], [5, 6, null]]}')
    assert np.all(np.diag(inst.cost) == 0)


def test_costs_not_rounded():
    inst = parse_instance('{"n": 3, "cost": [[0, 0.123456789012, 2], [3, 0, 4], [5, 6, 0]]}')
    assert inst.cost[0, 1] == 0.123456789012


def test_instance_is_immutable(fig):
    with pytest.raises(ValueError):
        fig.cost[0, 1] = 5.0


@pytest.mark.parametrize(
    "order, expected",
    [
        ((2, 3, 1, 0), 0.29 + 0.21 + 0.30 + 0.16 + 0.16),
        ((0, 3, 2, 1), 0.61 + 0.60 + 0.53 + 0.97 + 0.71),
        ((3, 3, 3, 2), 0.37 + 0 + 0 + 0.53 + 0.18),
    ],
)
def test_tour_cost_figure(fig, order, expected):
    assert tour_cost(fig, order) == pytest.approx(expected, abs=1e-12)


def test_tour_cost_figure_values(fig):
    assert tour_cost(fig, (2, 3, 1, 0)) == pytest.approx(1.12, abs=1e-12)
    assert tour_cost(fig, (0, 3, 2, 1)) == pytest.approx(3.42, abs=1e-12)
    assert tour_cost(fig, (3, 3, 3, 2)) == pytest.approx(1.08, abs=1e-12)


@pytest.mark.parametrize("order", [(0, 1, 2), (0, 1, 2, 4), (0, 1, -1, 2)])
def test_tour_cost_rejects_bad_orders(fig, order):
    with pytest.raises(InstanceError):
        tour_cost(fig, order)


def test_brute_force_figure(fig):
    order, cost = brute_force_optimum(fig)
    assert order == (2, 3, 1, 0)
    assert cost == pytest.approx(1.12, abs=1e-12)


def test_brute_force_zero_tie_break():
    inst = TspInstance(n=4, cost=np.zeros((4, 4)))
    assert brute_force_optimum(inst) == ((0, 1, 2), 0.0)


def test_brute_force_random_six_city():
    m = random_cost(6, 11)
    inst = TspInstance(n=6, cost=m)
    np.fill_diagonal(m, 0)
    tours = list(itertools.permutations(range(5)))
    assert len(tours) == 120
    costs = [naive_cost(m, 5, t) for t in tours]
    order, cost = brute_force_optimum(inst)
    assert cost == pytest.approx(min(costs), abs=1e-12)
    assert order == tours[int(np.argmin(costs))]


def test_brute_force_guard():
    inst = TspInstance(n=8, cost=np.ones((8, 8)))
    with pytest.raises(InstanceError):
        brute_force_optimum(inst, limit=7)


def test_longest_and_lambda(fig, zero3):
    assert longest_tour_cost(fig) == pytest.approx(3.42, abs=1e-12)
    assert lambda_bound(fig, "loose") == pytest.approx(0.97 * 5, abs=1e-12)
    assert lambda_bound(fig, "tight") == pytest.approx(3.42, abs=1e-12)
    assert longest_tour_cost(zero3) == 0
    assert lambda_bound(zero3, "loose") == 1.0
    assert lambda_bound(zero3, "tight") == 1.0


@settings(max_examples=30, deadline=None)
@given(n=st.integers(3, 7), seed=st.integers(0, 2**32 - 1))
def test_bounds_hold(n, seed):
    inst = random_instance(n, seed)
    loose = lambda_bound(inst, "loose")
    tight = lambda_bound(inst, "tight")
    _, best = brute_force_optimum(inst)
    assert longest_tour_cost(inst) >= best
    for order in itertools.permutations(range(n - 1)):
        c = tour_cost(inst, order)
        assert best <= c + 1e-12
        assert c <= tight + 1e-12
        assert c <= loose + 1e-12
    # Arbitrary (invalid) strings also stay under the loose bound.
    rng = np.random.default_rng(seed)
    for _ in range(20):
        assert tour_cost(inst, rng.integers(0, n - 1, size=n - 1)) <= loose + 1e-12


@settings(max_examples=30, deadline=None)
@given(n=st.integers(3, 6), start=st.integers(0, 5), seed=st.integers(0, 1000))
def test_relabeling_preserves_costs(n, start, seed):
    start = start % n
    m = random_cost(n, seed)
    np.fill_diagonal(m, 0)
    inst = from_matrix(m, start)
    others = [c for c in range(n) if c != start]
    for original in itertools.permutations(others):
        internal = inst.internal_order(original)
        assert tour_cost(inst, internal) == pytest.approx(naive_cost(m, start, original), abs=1e-12)
        assert inst.render_tour(internal) == [start, *original, start]


def test_json_round_trip_with_relabel():
    m = random_cost(5, 3)
    inst = from_matrix(m, start=1)
    again = parse_instance(instance_to_json(inst))
    np.testing.assert_array_equal(again.cost, inst.cost)
    assert again.labels == inst.labels
    assert math.isclose(lambda_bound(again), lambda_bound(inst))
