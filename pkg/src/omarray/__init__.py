"""Collective phonon dynamics in driven optomechanical arrays.

The package covers four layers of the same physical system, all in units of
the mechanical frequency:

* mode structure: sinusoidal coupling profiles, their completion to an
  orthonormal similarity basis, and the excitation-exchange matrix
  (:mod:`omarray.modes`),
* fast-cavity effective dynamics: mediated coupling strengths, the diagonal
  phonon propagator, its triangular-mesh decomposition, and seeded
  randomized walks (:mod:`omarray.effective`, :mod:`omarray.mesh`,
  :mod:`omarray.walks`),
* exact Gaussian moments of the full open model: drift/diffusion
  construction, Lyapunov steady states, heat diffusion, and the
  adiabatic-elimination crosscheck (:mod:`omarray.gaussian`),
* slow-cavity coherent exchange: the closed-form single-excitation
  propagator, switching schedules, and dissipative validation
  (:mod:`omarray.excitation`).

The CLI (``omarray``) orchestrates seeded, bit-reproducible experiment runs.
"""

from .effective import (BetaSpectrum, beta_coefficient, beta_spectrum,
                        effective_hamiltonian, propagator)
from .errors import (AdiabaticRegimeWarning, ContractError, GoodCavityWarning,
                     InstabilityError, IntegrationError, ParameterError)
from .excitation import (AmplitudeState, DissipativeReport, Schedule, ScheduleResult,
                         Segment, dissipative_check, evolution_matrix, generator_oracle,
                         kappa_switch_amplitude, phonon_state, run_schedule)
from .gaussian import (AdiabaticRates, CovarianceState, CrosscheckReport, DriftDiffusion,
                       HeatResult, adiabatic_rates, build_drift_diffusion,
                       elimination_crosscheck, evolve_covariance, heat_experiment,
                       occupations, rise_times, steady_state, symplectic_defect,
                       thermal_covariance)
from .mesh import BeamSplitter, MeshNetwork, PhaseShifter, reck_compose, reck_decompose
from .modes import (CouplingBasis, LambdaMatrix, build_basis, coupling_matrix,
                    coupling_vector, independent_mode_count, lambda_from_g, lambda_matrix)
from .params import SystemParams
from .seeding import splitmix64, stream_rng, stream_seed
from .walks import WalkConfig, WalkResult, run_classical_walk, run_walk

__version__ = "0.1.0"

__all__ = [
    "AdiabaticRates", "AdiabaticRegimeWarning", "AmplitudeState", "BeamSplitter",
    "BetaSpectrum", "ContractError", "CouplingBasis", "CovarianceState",
    "CrosscheckReport", "DissipativeReport", "DriftDiffusion", "GoodCavityWarning",
    "HeatResult", "InstabilityError", "IntegrationError", "LambdaMatrix",
    "MeshNetwork", "ParameterError", "PhaseShifter", "Schedule", "ScheduleResult",
    "Segment", "SystemParams", "WalkConfig", "WalkResult", "adiabatic_rates",
    "beta_coefficient", "beta_spectrum", "build_basis", "build_drift_diffusion",
    "coupling_matrix", "coupling_vector", "dissipative_check", "effective_hamiltonian",
    "elimination_crosscheck", "evolution_matrix", "evolve_covariance",
    "generator_oracle", "heat_experiment", "independent_mode_count",
    "kappa_switch_amplitude", "lambda_from_g", "lambda_matrix", "occupations",
    "phonon_state", "propagator", "reck_compose", "reck_decompose", "rise_times",
    "run_classical_walk", "run_schedule", "run_walk", "splitmix64", "steady_state",
    "stream_rng", "stream_seed", "symplectic_defect", "thermal_covariance",
]
