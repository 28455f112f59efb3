"""Numerical q-convolution on the lattices ``{±q^k γ}``: moments, the Gaussian
family, formal and kernel Fourier transforms, and a solver for
constant-coefficient q-differential equations."""

from .convolve import convolution_inverse, convolve, hermite_action, moments_any
from .errors import (DomainError, InsufficientDataError, MismatchError, NoRadiusError,
                     NotInvertibleError, PoleError, QConvError, RadiusError, TruncationError,
                     TypeGrowthError)
from .fourier import fourier_formal, fourier_formal_prime, fourier_inverse_G, fourier_kernel
from .gaussian import G_k, GaussianSeries, eq2_gaussian, g_m, reconstruct_from_moments, unit_u
from .lattice import DiscreteDelta, LatticeFunction, LatticePoint, q_integral
from .qcore import QContext, E_q, e_q, poch, q_binomial, q_factorial, q_number
from .qsolve import QDiffOperator, solve
from .series import MomentSeries, PowerSeries, moments_of

__all__ = [
    "QContext", "poch", "q_number", "q_factorial", "q_binomial", "e_q", "E_q",
    "LatticePoint", "LatticeFunction", "DiscreteDelta", "q_integral",
    "PowerSeries", "MomentSeries", "moments_of",
    "GaussianSeries", "eq2_gaussian", "g_m", "G_k", "unit_u", "reconstruct_from_moments",
    "convolve", "hermite_action", "moments_any", "convolution_inverse",
    "fourier_formal", "fourier_formal_prime", "fourier_kernel", "fourier_inverse_G",
    "QDiffOperator", "solve",
    "QConvError", "PoleError", "TruncationError", "DomainError", "MismatchError",
    "NotInvertibleError", "RadiusError", "InsufficientDataError", "TypeGrowthError",
    "NoRadiusError",
]
