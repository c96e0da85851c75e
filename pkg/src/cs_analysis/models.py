"""Data models for recovery certificates."""
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np


@dataclass
class CertificateReport:
    """Exact dual certificate for weighted basis pursuit and the constants around it.

    ``Y0`` holds the m-dimensional pre-image z; the certificate itself is
    A^T z, so it lies in (ker A)^perp by construction.
    """

    Y0: np.ndarray
    sign_match: bool
    strict_bound: float
    valid: bool
    delta_hat: float
    mu_hat: float
    a0_constant: float
    borderline: bool = False
    support_size: int = 0

    def __post_init__(self):
        if self.valid and not self.sign_match:
            raise ValueError("a valid certificate must match the signs on the support")

    def stability_condition(self) -> bool:
        """delta < 1 and C <= (1 - delta) / mu, the sufficient condition for a valid certificate."""
        if self.delta_hat >= 1.0:
            return False
        if self.mu_hat == 0.0:
            return True
        return self.a0_constant <= (1.0 - self.delta_hat) / self.mu_hat

    def to_dict(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "sign_match": self.sign_match,
            "strict_bound": self.strict_bound,
            "borderline": self.borderline,
            "delta_hat": self.delta_hat,
            "mu_hat": self.mu_hat,
            "a0_constant": self.a0_constant,
            "stability_condition": self.stability_condition(),
            "support_size": self.support_size,
        }
