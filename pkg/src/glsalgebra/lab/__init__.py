"""Verification campaigns for the convolution inequalities."""
from .algebra import HypothesisViolation, verify_banach_algebra
from .continuity import modulus_of_continuity, uc_convolution_bound
from .counterexample import counterexample_campaign
from .fourier import (FourierGrid, NotInAlgebra, check_fourier_multiplicativity, fourier_transform,
                      ideal_membership)
from .report import VerificationReport
from .scaling import expected_slope, scaling_exponent_probe
from .young import verify_young, young_exponent

__all__ = [
    "HypothesisViolation", "verify_banach_algebra", "modulus_of_continuity",
    "uc_convolution_bound", "counterexample_campaign", "FourierGrid", "NotInAlgebra",
    "check_fourier_multiplicativity", "fourier_transform", "ideal_membership",
    "VerificationReport", "expected_slope", "scaling_exponent_probe", "verify_young",
    "young_exponent",
]
