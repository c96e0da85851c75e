"""Basis pursuit, weighted basis pursuit and iterative reweighting."""

from .models import (
    BpSolution,
    RecoveryCertificate,
    ReweightTrace,
    SensingProblem,
    SolverConfig,
    WeightVector,
)
from .solver import numerical_support, solve_bp, solve_weighted_bp
from .reweighting import (
    certify_exact_recovery,
    recovery_declared,
    reweight_iterate,
    unweighted_reweight_step,
)

__all__ = [
    'BpSolution',
    'RecoveryCertificate',
    'ReweightTrace',
    'SensingProblem',
    'SolverConfig',
    'WeightVector',
    'numerical_support',
    'solve_bp',
    'solve_weighted_bp',
    'certify_exact_recovery',
    'recovery_declared',
    'reweight_iterate',
    'unweighted_reweight_step',
]
