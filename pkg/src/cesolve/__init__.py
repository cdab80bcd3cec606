"""Bound states of the potential V0 + V1/sqrt(x) + (8 m V2^2/hbar^2)/x + V2/x^(3/2).

Modules: specfun (1F1, Hermite functions of real order), model (parameters
and maps), spectrum (spectrum equation, root curves, approximations),
wavefunction (closed-form solution), oracle (independent ODE solver), cli.
"""
from .model import AuxPoint, EnergyLevel, Method, PhysicalParams, SpectralParams
from .spectrum import bound_states, solve_branch, spectral_function

__all__ = ["AuxPoint", "EnergyLevel", "Method", "PhysicalParams", "SpectralParams",
           "bound_states", "solve_branch", "spectral_function"]
__version__ = "0.1.0"
