import numpy as np
import pytest

from tsp_timereg.instance import TspInstance, figure_instance


@pytest.fixture
def fig():
    return figure_instance()


@pytest.fixture
def zero3():
    return TspInstance(n=3, cost=np.zeros((3, 3)))


def random_cost(n, seed):
    return np.random.default_rng(seed).uniform(0.0, 1.0, size=(n, n))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for name in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[name])
