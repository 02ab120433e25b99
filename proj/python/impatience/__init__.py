"""Decreasing impatience: detection, beta-delta decomposition, aggregation and parimutuel markets."""

from ._impatience import (
    ImpatienceError,
    axiom_report,
    compound_interest_convexity_holds,
    decompose,
    envelope_prices,
    find_convexity_violation,
    from_generalized_beta_delta,
    geometric_mean,
    impatience_ratios,
    is_decreasing_impatience,
    is_increasing_impatience,
    is_stationary,
    min_basis_weights,
    reconstruct,
    solve_equilibrium,
    synthesize_economy,
    uniqueness_probe,
    verify_equilibrium,
)

__all__ = [
    "ImpatienceError",
    "axiom_report",
    "compound_interest_convexity_holds",
    "decompose",
    "envelope_prices",
    "find_convexity_violation",
    "from_generalized_beta_delta",
    "geometric_mean",
    "impatience_ratios",
    "is_decreasing_impatience",
    "is_increasing_impatience",
    "is_stationary",
    "min_basis_weights",
    "reconstruct",
    "solve_equilibrium",
    "synthesize_economy",
    "uniqueness_probe",
    "verify_equilibrium",
]
