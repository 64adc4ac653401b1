"""Linear Langevin model: drift, diffusion and input-beam statistics.

State vector ordering throughout is ``[X_c, Y_c, q_m, p_m, X_s, Y_s]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .model import ParameterSet

#: Eigenvalues with real part above this are not treated as decaying.
STABILITY_TOL = -1e-12


@dataclass(frozen=True)
class InputSpectra:
    """Symmetrized white-noise spectra of the two-mode squeezed input."""

    sxx_i: float
    syy_i: float
    sxx_s: float
    syy_s: float
    sxx_is: float
    syy_is: float


@dataclass(frozen=True)
class Stability:
    stable: bool
    max_real_part: float
    eigenvalues: np.ndarray

    def __iter__(self):
        # allows ``stable, margin = check_stability(A)``
        return iter((self.stable, self.max_real_part))


def _check_input(r, eta_i, eta_s):
    if not r >= 0:
        raise DomainError(f"r must be >= 0, got {r}")
    for name, eta in (("eta_i", eta_i), ("eta_s", eta_s)):
        if not 0.0 <= eta <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {eta}")


def build_drift_optomech(p: ParameterSet) -> np.ndarray:
    """4x4 drift of the linearized cavity + mechanics block."""
    s = p.g_om * math.sin(p.phi)
    c = p.g_om * math.cos(p.phi)
    return np.array(
        [
            [-p.kappa, -p.delta, -s, 0.0],
            [p.delta, -p.kappa, c, 0.0],
            [0.0, 0.0, 0.0, p.omega_m],
            [c, s, -p.omega_m, -p.gamma_m],
        ]
    )


def build_drift_spin(p: ParameterSet) -> np.ndarray:
    """2x2 drift of the collective spin oscillator.

    Uses the rotation form [[0, w], [-w, -gamma]], whose eigenvalues are
    -gamma/2 +/- sqrt(gamma^2/4 - w^2) and so always decay.
    """
    return np.array([[0.0, p.omega_s], [-p.omega_s, -p.gamma_s]])


def build_drift(p: ParameterSet) -> np.ndarray:
    """Block-diagonal 6x6 drift matrix; cavity and spin share only the input noise."""
    a = np.zeros((6, 6))
    a[:4, :4] = build_drift_optomech(p)
    a[4:, 4:] = build_drift_spin(p)
    return a


def input_spectra(r, eta_i=1.0, eta_s=1.0) -> InputSpectra:
    _check_input(r, eta_i, eta_s)
    sh2 = math.sinh(r) ** 2
    cross = 0.5 * math.sqrt(eta_i * eta_s) * math.sinh(2.0 * r)
    s_i = 0.5 + eta_i * sh2
    s_s = 0.5 + eta_s * sh2
    return InputSpectra(sxx_i=s_i, syy_i=s_i, sxx_s=s_s, syy_s=s_s, sxx_is=cross, syy_is=-cross)


def build_diffusion(p: ParameterSet) -> np.ndarray:
    """Symmetrized noise correlation matrix D of the Langevin forces.

    The spin is driven only through the amplitude quadrature of its input
    port, so the Y-Y input correlation never enters D.
    """
    s = input_spectra(p.r, p.eta_i, p.eta_s)
    d = np.zeros((6, 6))
    d[0, 0] = 2.0 * p.kappa * s.sxx_i
    d[1, 1] = 2.0 * p.kappa * s.syy_i
    d[3, 3] = 2.0 * p.gamma_m * (p.n_m + 0.5)
    d[5, 5] = 2.0 * p.gamma_s * (p.n_s + 0.5) + p.gamma_readout * s.sxx_s
    d[0, 5] = d[5, 0] = math.sqrt(2.0 * p.kappa * p.gamma_readout) * s.sxx_is
    return d


def input_tmsv_covariance(r, eta_i=1.0, eta_s=1.0) -> np.ndarray:
    """4x4 covariance of the input beams, ordering [X_I, Y_I, X_S, Y_S]."""
    s = input_spectra(r, eta_i, eta_s)
    return np.array(
        [
            [s.sxx_i, 0.0, s.sxx_is, 0.0],
            [0.0, s.syy_i, 0.0, s.syy_is],
            [s.sxx_is, 0.0, s.sxx_s, 0.0],
            [0.0, s.syy_is, 0.0, s.syy_s],
        ]
    )


def check_stability(a) -> Stability:
    """Hurwitz test: stable iff every eigenvalue has real part below -1e-12."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"drift matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("drift matrix has non-finite entries")
    try:
        eig = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration did not converge for drift matrix:\n{a}") from exc
    max_re = float(np.max(eig.real))
    return Stability(stable=max_re < STABILITY_TOL, max_real_part=max_re, eigenvalues=eig)
