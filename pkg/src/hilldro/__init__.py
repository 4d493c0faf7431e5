"""Analytic and numerical propagation of distant retrograde orbits in the Hill problem.

Submodules
----------
elliptic
    Complete and incomplete elliptic integrals at parameter 3/4.
hill
    Exact dynamics, numerical propagation and variational equations.
epicyclic
    Epicyclic variables and their geometry.
mean_model
    Averaged Hamiltonian and semi-analytic propagation of the mean flow.
lindstedt
    Time-explicit Lindstedt series of the mean flow.
short_period
    Mean to osculating corrections and back.
design
    Orbit design, resonance tuning and differential correction.
analysis
    Propagation modes and scaled error series.
"""

from .hill import CartesianState, HillContext, hamiltonian, propagate
from .epicyclic import EpicyclicState, from_epicyclic, to_epicyclic
from .lindstedt import build_model, evaluate, periods
from .short_period import mean_to_osculating, osculating_to_mean
from .design import DesignParams, differential_correct, tune_resonance

__version__ = "0.1.0"

__all__ = [
    "CartesianState",
    "HillContext",
    "hamiltonian",
    "propagate",
    "EpicyclicState",
    "from_epicyclic",
    "to_epicyclic",
    "build_model",
    "evaluate",
    "periods",
    "mean_to_osculating",
    "osculating_to_mean",
    "DesignParams",
    "differential_correct",
    "tune_resonance",
]
