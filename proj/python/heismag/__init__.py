"""Killing magnetic curves in Lorentzian-Heisenberg spaces (C++ core)."""

from ._heismag import (
    DomainError,
    HeismagError,
    IntegratorOverflow,
    StepUnderflow,
    UnboundedOrbit,
    UnknownFamily,
    Unsupported,
    check_family,
    complete_K,
    eval_family,
    integrate,
    jacobi,
    killing_residual,
    run_cli,
    solve_reduced,
)

FAMILIES = (
    "g1-v1-linear",
    "g1-v1-exp",
    "g1-v4-special",
    "g2-v1-linear",
    "g2-v1-trig",
    "g2-v4-circular",
)

__all__ = [
    "FAMILIES",
    "DomainError",
    "HeismagError",
    "IntegratorOverflow",
    "StepUnderflow",
    "UnboundedOrbit",
    "UnknownFamily",
    "Unsupported",
    "check_family",
    "complete_K",
    "eval_family",
    "integrate",
    "jacobi",
    "killing_residual",
    "run_cli",
    "solve_reduced",
]
