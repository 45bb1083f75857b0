"""Grand Lebesgue norms, convolutions on R and Z_n, and verification campaigns."""
from .convolution import (AliasingError, ConvolutionPlan, convolve_cyclic, convolve_direct,
                          convolve_grid, counterexample_h, power_tail_self_convolution,
                          truncated_counterexample_h)
from .functions import (Analytic, FamilySpec, GroupDomain, Sampled, dilate, make_gaussian,
                        make_indicator, make_power_tail, make_random_mixture, sample)
from .norms import (DegenerateSpace, GrandNormResult, PsiClass, PsiSpec, degenerate_psi_check,
                    grand_norm, lp_norm, psi_eval, small_lebesgue_norm)
from .quadrature import QuadratureError, beta_function, gamma, integrate

__version__ = "0.1.0"

__all__ = [
    "AliasingError", "ConvolutionPlan", "convolve_cyclic", "convolve_direct", "convolve_grid",
    "counterexample_h", "power_tail_self_convolution", "truncated_counterexample_h",
    "Analytic", "FamilySpec", "GroupDomain", "Sampled", "dilate", "make_gaussian",
    "make_indicator", "make_power_tail", "make_random_mixture", "sample",
    "DegenerateSpace", "GrandNormResult", "PsiClass", "PsiSpec", "degenerate_psi_check",
    "grand_norm", "lp_norm", "psi_eval", "small_lebesgue_norm",
    "QuadratureError", "beta_function", "gamma", "integrate",
]
