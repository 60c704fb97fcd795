"""Adaptive explicit time stepping for stiff ODEs."""

from ._stabex import (
    IntegrationFailure,
    benchmark_names,
    chebyshev_steps,
    dyadic_poly,
    dyadic_step_count,
    dyadic_steps,
    min_damping_steps,
    min_q_for_p,
    q_table,
    run_benchmark,
    solve,
)

__all__ = [
    "IntegrationFailure",
    "benchmark_names",
    "chebyshev_steps",
    "dyadic_poly",
    "dyadic_step_count",
    "dyadic_steps",
    "min_damping_steps",
    "min_q_for_p",
    "q_table",
    "run_benchmark",
    "solve",
]
