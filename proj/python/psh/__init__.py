"""Hardy spaces over exhaustion functions on planar Jordan domains."""

from ._core import (
    BoundaryDensity,
    DomainError,
    Error,
    NonIntegrable,
    ParseError,
    UnknownCase,
    boundary_density,
    case_ids,
    compose_check,
    evaluate,
    factorize,
    find_zeros,
    ma_mass,
    membership,
    norm,
    run_case,
)

__all__ = [
    "BoundaryDensity",
    "DomainError",
    "Error",
    "NonIntegrable",
    "ParseError",
    "UnknownCase",
    "boundary_density",
    "case_ids",
    "compose_check",
    "evaluate",
    "factorize",
    "find_zeros",
    "ma_mass",
    "membership",
    "norm",
    "run_case",
]
