"""Exact correlation polytopes for the instrumental scenario."""

from ._core import (
    CapacityError,
    ConvergenceError,
    Correlation,
    Scenario,
    SignallingError,
    UnboundedError,
    bonet_born_table,
    bonet_quantum_value,
    bounds,
    chained_born_table,
    classical_vertices,
    classify_facets,
    deterministic_correlations,
    dummy_input_extension,
    evaluate,
    expression,
    extension_membership,
    facet_enumeration,
    gpt_box_search,
    gpt_projection,
    identity_residual,
    membership,
    postselect,
    pr_box,
    sample_nosignalling,
    tilted_search,
    uniform_box,
    wiring_box,
)

__all__ = [name for name in dir() if not name.startswith("_")]
