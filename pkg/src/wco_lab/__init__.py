"""Weighted composition operators on weighted Bergman spaces of the polydisk.

Numerical construction of the operators, the conjugations ``C_{p,q}``, and
decision procedures for real symmetry, unitarity and complex symmetry,
each cross-checked against closed-form kernel identities.
"""

from .bergman import SpaceParams
from .conjugation import ConjugationParams
from .engine import SamplePlan
from .moebius import LFT
from .series import PowerSeries
from .symbols import SymbolPair

__version__ = "0.1.0"

__all__ = ["SpaceParams", "ConjugationParams", "SamplePlan", "LFT", "PowerSeries", "SymbolPair"]
