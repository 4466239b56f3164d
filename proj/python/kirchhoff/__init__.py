"""Ground states of the Kirchhoff equation and their linearised spectra."""

from ._kirchhoff import (
    GroundState,
    KirchhoffError,
    Params,
    Solution,
    build_solution,
    coefficient_c,
    fixed_point_c,
    kappa_closed,
    report_json,
    run,
    sector_eigenvalues,
    shoot,
    solve,
)

__all__ = [
    "GroundState",
    "KirchhoffError",
    "Params",
    "Solution",
    "build_solution",
    "coefficient_c",
    "fixed_point_c",
    "kappa_closed",
    "report_json",
    "run",
    "sector_eigenvalues",
    "shoot",
    "solve",
]
