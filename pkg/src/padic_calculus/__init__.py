"""Exact-at-desk-scale calculus on Q_p^n: test functions and their Fourier
transform, Lizorkin spaces, homogeneous distributions, fractional and
pseudo-differential operators, Kozyrev wavelets and Tauberian checks."""

__version__ = "0.1.0"

from .core import Grid, MultCharacter, NormedCharacter, PRational, PVector, chi, norm, valuation
from .distributions import Distribution, check_homogeneity, dilate, fourier_dist
from .errors import PadicError
from .lizorkin import LizorkinKind, is_phi, is_psi, project
from .operators import Symbol, apply, apply_dist, parse_symbol, solve, taibleson, vladimirov
from .schwartz import TestFunction, fourier, inverse_fourier
from .special import beta_p, gamma_p, gamma_p_char, gamma_p_n
from .wavelets import WaveletIndex, eigencheck, gram, kozyrev

__all__ = [
    "Grid", "MultCharacter", "NormedCharacter", "PRational", "PVector", "chi", "norm", "valuation",
    "Distribution", "check_homogeneity", "dilate", "fourier_dist", "PadicError",
    "LizorkinKind", "is_phi", "is_psi", "project",
    "Symbol", "apply", "apply_dist", "parse_symbol", "solve", "taibleson", "vladimirov",
    "TestFunction", "fourier", "inverse_fourier",
    "beta_p", "gamma_p", "gamma_p_char", "gamma_p_n",
    "WaveletIndex", "eigencheck", "gram", "kozyrev",
]
