"""Spectra of invertible weighted composition operators f -> w * (f o phi)
on the smooth, Lipschitz and Sobolev function scales over [0,1].

Closed-form engine: :func:`compute_spectra` turns a :class:`Scenario` into
a :class:`SpectrumReport` of annuli, circles and isolated eigenvalues.
Independent numerical oracles live in :mod:`wcospec.numerics`; scenario
files and the command line are described in :mod:`wcospec.cli`.
"""

from .dynamics import (FixedPointAnalysis, PeriodTwoAnalysis,
                       analyze_period_two, find_fixed_points)
from .funcmodel import (FunctionSpec, HomeoModel, WeightModel, build_homeo,
                        build_weight, derivative_cocycle, evaluate, iterate,
                        weight_cocycle)
from .spectral_sets import SpectralPoint, SpectralSet
from .theorem_engine import (Eigenvalue, Scenario, SpectrumReport,
                             compute_spectra)

__all__ = [
    "FunctionSpec", "HomeoModel", "WeightModel", "build_homeo", "build_weight",
    "evaluate", "iterate", "weight_cocycle", "derivative_cocycle",
    "FixedPointAnalysis", "PeriodTwoAnalysis", "find_fixed_points",
    "analyze_period_two", "SpectralSet", "SpectralPoint",
    "Scenario", "SpectrumReport", "Eigenvalue", "compute_spectra",
]

__version__ = "0.1.0"
