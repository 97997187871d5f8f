"""Time-register quantum encoding of the TSP: circuits, simulation, amplification."""
from .circuit import Circuit, Gate, RegisterLayout, compose, gate_census, inverse, make_layout
from .encoding import (
    EncodingConfig,
    TourRecord,
    classify,
    cost_oracle,
    decode_basis_index,
    encode_labels,
    uniform_prep,
    validity_oracle,
    validity_phase_oracle,
)
from .instance import (
    TspInstance,
    brute_force_optimum,
    figure_instance,
    lambda_bound,
    longest_tour_cost,
    parse_instance,
    tour_cost,
)
from .sim import StateVector, apply_gate, init_state, run, subspace_probability

__version__ = "0.1.0"
