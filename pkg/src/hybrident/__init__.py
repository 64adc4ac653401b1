"""Steady-state entanglement in a hybrid optomechanical / atomic-spin system
driven by two-mode squeezed vacuum."""

from .dynamics import (
    build_diffusion,
    build_drift,
    build_drift_optomech,
    build_drift_spin,
    check_stability,
    input_spectra,
    input_tmsv_covariance,
)
from .entanglement import (
    duan_quantity,
    duan_standard_form,
    eta_minus,
    log_negativity,
    reduce_pair,
)
from .errors import ConvergenceError, DomainError, NumericalError, StabilityError
from .model import (
    OperatingPoint,
    ParameterSet,
    derive_operating_point,
    spin_readout_rate,
    susceptibility,
    thermal_occupation,
)
from .steady_state import integrate_covariance_ode, solve_lyapunov, symplectic_eigenvalues
from .sweep import SweepSpec, figure_preset, run_point, run_sweep

__version__ = "0.1.0"
