"""Quantum weak coin flipping and dice rolling: simulation and bias analysis."""

import json as _json

from ._qdice import (
    __version__,
    alice_optimal_value,
    alice_success_probability,
    alice_value_at_delta,
    bias_bound_check,
    bob_optimal_value,
    brute_force_alice,
    honest_dice_probs,
    honest_win_prob,
    optimize_three_sided,
    run_trials,
    simulate_dice,
    solve_balanced,
    three_sided_case1,
    three_sided_case2,
    worst_case_losing_prob,
)
from ._qdice import _run_command


def run_command(subcommand, **options):
    """Run a CLI subcommand in-process and return the report as a dict.

    Keyword arguments use the long flag names with '_' for '-'.
    """
    return _json.loads(_run_command(subcommand, _json.dumps(options)))


__all__ = [
    "__version__",
    "alice_optimal_value",
    "alice_success_probability",
    "alice_value_at_delta",
    "bias_bound_check",
    "bob_optimal_value",
    "brute_force_alice",
    "honest_dice_probs",
    "honest_win_prob",
    "optimize_three_sided",
    "run_command",
    "run_trials",
    "simulate_dice",
    "solve_balanced",
    "three_sided_case1",
    "three_sided_case2",
    "worst_case_losing_prob",
]
