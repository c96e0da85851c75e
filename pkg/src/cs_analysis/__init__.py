"""Deterministic recovery conditions: weight condition, dual certificates, null-space test."""
from src.cs_analysis.certificate import dual_certificate, nullspace_check_1d
from src.cs_analysis.conditions import (
    a0_constant,
    complement,
    empirical_incoherence,
    empirical_rip_delta,
    weight_accuracy_implies_a0,
)
from src.cs_analysis.models import CertificateReport

__all__ = [
    "CertificateReport",
    "a0_constant",
    "complement",
    "dual_certificate",
    "empirical_incoherence",
    "empirical_rip_delta",
    "nullspace_check_1d",
    "weight_accuracy_implies_a0",
]
