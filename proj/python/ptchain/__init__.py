"""Spectra of a tight-binding chain with balanced gain and loss impurities."""

from ._core import (
    ChainSpec,
    ConvergenceError,
    CriticalResult,
    DomainError,
    NumericalError,
    ValidationError,
    all_eigenvalues,
    all_eigenvalues_dense,
    amplitude_phase,
    broken_count,
    build_hamiltonian,
    critical_gamma,
    eigenvector,
    eval_secular,
    find_real_roots,
    fit_fragility_scaling,
    odd_closest_threshold,
    pt_symmetry_check,
    sweep_phase_diagram,
    theta_gamma,
)

__all__ = [
    "ChainSpec",
    "ConvergenceError",
    "CriticalResult",
    "DomainError",
    "NumericalError",
    "ValidationError",
    "all_eigenvalues",
    "all_eigenvalues_dense",
    "amplitude_phase",
    "broken_count",
    "build_hamiltonian",
    "critical_gamma",
    "eigenvector",
    "eval_secular",
    "find_real_roots",
    "fit_fragility_scaling",
    "odd_closest_threshold",
    "pt_symmetry_check",
    "sweep_phase_diagram",
    "theta_gamma",
]
