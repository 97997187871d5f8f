"""Classical TSP model: parsing, tour costs, brute-force optima and phase scales.

Everything the quantum circuits compute is cross-checked against the plain
Python in this module, so it deliberately avoids any circuit machinery.

The start city is always the highest label, ``n - 1``. A tour is stored as the
visiting order of the remaining ``n - 1`` cities; the start is implicit at both
ends.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

Tour = tuple[int, ...]

#: Largest ``n`` accepted by the exhaustive routines; 11! orderings at n=12.
BRUTE_FORCE_LIMIT = 12


class InstanceError(ValueError):
    """Raised for malformed instance documents or out-of-range tours."""


@dataclass(frozen=True)
class TspInstance:
    """A directed TSP instance with the start city relabeled to ``n - 1``.

    ``labels[k]`` is the original city id of internal city ``k``; it is the
    identity unless the document declared a different start city.
    """

    n: int
    cost: np.ndarray
    labels: tuple[int, ...] = field(default=())
    start: int = -1

    def __post_init__(self) -> None:
        cost = np.array(self.cost, dtype=float)
        if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
            raise InstanceError(f"cost matrix must be square, got shape {cost.shape}")
        if cost.shape[0] != self.n:
            raise InstanceError(f"cost matrix is {cost.shape[0]}x{cost.shape[0]} but n={self.n}")
        if self.n < 3:
            raise InstanceError(f"need at least 3 cities, got n={self.n}")
        if not np.all(np.isfinite(cost)):
            raise InstanceError("cost matrix contains NaN or infinite entries")
        if np.any(cost < 0):
            raise InstanceError("cost matrix contains negative entries")
        np.fill_diagonal(cost, 0.0)
        cost.flags.writeable = False
        object.__setattr__(self, "cost", cost)
        labels = tuple(self.labels) or tuple(range(self.n))
        if sorted(labels) != list(range(self.n)):
            raise InstanceError("labels must be a permutation of 0..n-1")
        object.__setattr__(self, "labels", labels)
        if self.start == -1:
            object.__setattr__(self, "start", self.n - 1)
        if self.start != self.n - 1:
            raise InstanceError("start city must be n-1 after relabeling")

    @property
    def num_slots(self) -> int:
        return self.n - 1

    def original_label(self, city: int) -> int:
        return self.labels[city]

    def internal_order(self, original: Sequence[int]) -> Tour:
        """Map a visiting order given in original city ids to internal labels."""
        inv = {orig: k for k, orig in enumerate(self.labels)}
        return tuple(inv[c] for c in original)

    def render_tour(self, order: Sequence[int]) -> list[int]:
        """Original city ids with the start city prepended and appended."""
        s = self.labels[self.start]
        return [s, *(self.labels[c] for c in order), s]


def from_matrix(cost: Sequence[Sequence[float]] | np.ndarray, start: int | None = None) -> TspInstance:
    """Build an instance, swapping ``start`` with ``n - 1`` if needed."""
    m = np.array(cost, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InstanceError(f"cost matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    if start is None:
        start = n - 1
    if not 0 <= start < n:
        raise InstanceError(f"start city {start} outside 0..{n - 1}")
    perm = list(range(n))
    perm[start], perm[n - 1] = perm[n - 1], perm[start]
    relabeled = m[np.ix_(perm, perm)]
    return TspInstance(n=n, cost=relabeled, labels=tuple(perm))


def _reject_duplicates(pairs):
    keys = [k for k, _ in pairs]
    dupes = {k for k in keys if keys.count(k) > 1}
    if dupes:
        raise InstanceError(f"duplicate fields: {sorted(dupes)}")
    return dict(pairs)


def _parse_json(text: str) -> TspInstance:
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceError("instance JSON must be an object")
    missing = {"n", "cost"} - doc.keys()
    if missing:
        raise InstanceError(f"missing fields: {sorted(missing)}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise InstanceError("field 'n' must be an integer")
    rows = doc["cost"]
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InstanceError("field 'cost' must be a list of rows")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InstanceError(f"cost matrix must be {n}x{n}")
    # Diagonal entries may be given as null.
    matrix = [
        [0.0 if (i == j and v is None) else _as_float(v) for j, v in enumerate(row)]
        for i, row in enumerate(rows)
    ]
    start = doc.get("start", n - 1)
    if not isinstance(start, int) or isinstance(start, bool):
        raise InstanceError("field 'start' must be an integer")
    return from_matrix(matrix, start)


def _as_float(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise InstanceError(f"cost entry {v!r} is not a number")
    try:
        return float(v)
    except ValueError as exc:
        raise InstanceError(f"cost entry {v!r} is not a number") from exc


def _parse_csv(text: str) -> TspInstance:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InstanceError("CSV cost matrix must be square")
    matrix = [[_as_float(c.strip()) if c.strip() else 0.0 for c in r] for r in rows]
    return from_matrix(matrix)


def parse_instance(document: str) -> TspInstance:
    """Parse an instance from JSON (``{"n", "start", "cost"}``) or CSV text."""
    stripped = document.lstrip()
    if not stripped:
        raise InstanceError("empty instance document")
    if stripped[0] in "{[":
        return _parse_json(document)
    return _parse_csv(document)


def load_instance(path: str | Path) -> TspInstance:
    return parse_instance(Path(path).read_text())


def instance_to_json(instance: TspInstance) -> str:
    """Serialize in original labels, so ``parse_instance`` round-trips."""
    n = instance.n
    inv = [0] * n
    for k, orig in enumerate(instance.labels):
        inv[orig] = k
    matrix = [[float(instance.cost[inv[i], inv[j]]) for j in range(n)] for i in range(n)]
    return json.dumps({"n": n, "start": instance.labels[instance.start], "cost": matrix})


def random_instance(n: int, seed: int | None = None, high: float = 1.0) -> TspInstance:
    rng = np.random.default_rng(seed)
    return TspInstance(n=n, cost=rng.uniform(0.0, high, size=(n, n)))


def check_labels(instance: TspInstance, order: Sequence[int]) -> Tour:
    order = tuple(int(c) for c in order)
    if len(order) != instance.n - 1:
        raise InstanceError(f"tour must have {instance.n - 1} entries, got {len(order)}")
    for c in order:
        if not 0 <= c < instance.n - 1:
            raise InstanceError(f"label {c} outside 0..{instance.n - 2}")
    return order


def tour_cost(instance: TspInstance, order: Sequence[int]) -> float:
    """Length of the closed route start -> order[0] -> ... -> order[-1] -> start.

    Repeated labels are allowed (the oracle costs invalid strings too); the
    diagonal is zero so staying put is free.
    """
    order = check_labels(instance, order)
    c = instance.cost
    s = instance.start
    total = c[s, order[0]]
    for a, b in zip(order, order[1:]):
        total += c[a, b]
    total += c[order[-1], s]
    return float(total)


def _guard(instance: TspInstance, limit: int | None) -> None:
    limit = BRUTE_FORCE_LIMIT if limit is None else limit
    if instance.n > limit:
        raise InstanceError(f"n={instance.n} exceeds brute-force limit {limit}")


def _all_tour_costs(instance: TspInstance):
    for order in itertools.permutations(range(instance.n - 1)):
        yield order, tour_cost(instance, order)


def brute_force_optimum(instance: TspInstance, limit: int | None = None) -> tuple[Tour, float]:
    """Exhaustive minimum; ties go to the lexicographically smallest order."""
    _guard(instance, limit)
    best: Tour | None = None
    best_cost = math.inf
    # permutations() yields in lexicographic order, so strict < keeps the first minimum.
    for order, cost in _all_tour_costs(instance):
        if cost < best_cost:
            best, best_cost = order, cost
    assert best is not None
    return best, best_cost


def longest_tour_cost(instance: TspInstance, limit: int | None = None) -> float:
    _guard(instance, limit)
    return max(cost for _, cost in _all_tour_costs(instance))


def lambda_bound(instance: TspInstance, mode: str = "tight", limit: int | None = None) -> float:
    """Phase scale: ``loose`` is max edge times n, ``tight`` the longest tour.

    Returns 1.0 for an all-zero instance so phases stay defined.
    """
    if mode == "loose":
        value = float(instance.cost.max()) * instance.n
    elif mode == "tight":
        value = longest_tour_cost(instance, limit)
    else:
        raise ValueError(f"unknown lambda mode {mode!r}")
    if value == 0.0:
        logger.debug("all-zero instance; using lambda=1")
        return 1.0
    return value


#: Directed weights of the five-city illustration (rows: from, cols: to); start is city 4.
FIGURE_COST = (
    (0.00, 0.95, 0.73, 0.60, 0.16),
    (0.16, 0.00, 0.87, 0.60, 0.71),
    (0.02, 0.97, 0.00, 0.21, 0.18),
    (0.18, 0.30, 0.53, 0.00, 0.29),
    (0.61, 0.14, 0.29, 0.37, 0.00),
)


def figure_instance() -> TspInstance:
    return from_matrix(FIGURE_COST, start=4)
