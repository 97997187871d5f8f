"""Golden rows of the five-city illustration: visiting order, phase, validity.

Phases are printed to two decimals. Orders omit the start city 4.
"""
from __future__ import annotations

FIGURE_ROWS: tuple[tuple[tuple[int, ...], float, int], ...] = (
    ((2, 3, 1, 0), 0.33, 1),
    ((1, 3, 2, 0), 0.42, 1),
    ((1, 0, 2, 3), 0.45, 1),
    ((1, 2, 3, 0), 0.46, 1),
    ((1, 0, 3, 2), 0.47, 1),
    ((3, 1, 2, 0), 0.50, 1),
    ((3, 1, 0, 2), 0.51, 1),
    ((1, 3, 0, 2), 0.54, 1),
    ((1, 2, 0, 3), 0.56, 1),
    ((2, 0, 3, 1), 0.56, 1),
    ((2, 0, 1, 3), 0.63, 1),
    ((3, 2, 1, 0), 0.64, 1),
    ((0, 3, 2, 1), 1.00, 1),
    ((2, 1, 3, 0), 0.65, 1),
    ((2, 1, 0, 3), 0.68, 1),
    ((2, 3, 0, 1), 0.69, 1),
    ((3, 0, 1, 2), 0.75, 1),
    ((0, 3, 1, 2), 0.75, 1),
    ((0, 2, 3, 1), 0.75, 1),
    ((3, 2, 0, 1), 0.75, 1),
    ((0, 1, 3, 2), 0.84, 1),
    ((0, 1, 2, 3), 0.86, 1),
    ((3, 0, 2, 1), 0.87, 1),
    ((0, 2, 1, 3), 0.94, 1),
    ((3, 3, 3, 2), 0.31, 0),
)

FIGURE_OPTIMUM = ((2, 3, 1, 0), 1.12)
PHI_TOLERANCE = 0.005
