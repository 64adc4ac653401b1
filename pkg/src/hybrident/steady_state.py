"""Steady-state covariance of the linear Langevin system.

The covariance convention is V_ij = <u_i u_j + u_j u_i> / 2, so the vacuum
has variance 1/2 in every quadrature.
"""

from __future__ import annotations

import logging
import warnings

import numpy as np

from .dynamics import check_stability
from .errors import ConvergenceError, DomainError, NumericalError, StabilityError

log = logging.getLogger(__name__)

PHYSICALITY_TOL = 1e-8


class PhysicalityWarning(UserWarning):
    """A covariance matrix violates the uncertainty principle beyond tolerance."""


def solve_lyapunov(a, d):
    """Solve A V + V A^T = -D for a Hurwitz-stable A.

    The equation is vectorized into (I (x) A + A (x) I) vec(V) = -vec(D) and
    solved densely with partial pivoting; the result is symmetrized.
    """
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    if a.shape != d.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"A and D must be square and of equal shape, got {a.shape} and {d.shape}")
    stab = check_stability(a)
    if not stab.stable:
        worst = stab.eigenvalues[np.argmax(stab.eigenvalues.real)]
        raise StabilityError(
            f"drift matrix is not Hurwitz: eigenvalue {worst:.6g} has real part {worst.real:.6g} >= 0",
            eigenvalue=complex(worst),
        )
    n = a.shape[0]
    eye = np.eye(n)
    op = np.kron(eye, a) + np.kron(a, eye)
    try:
        v = np.linalg.solve(op, -d.reshape(-1)).reshape(n, n)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("vectorized Lyapunov system is singular") from exc
    return 0.5 * (v + v.T)


def lyapunov_residual(a, v, d):
    """Frobenius norm of A V + V A^T + D."""
    return float(np.linalg.norm(a @ v + v @ a.T + d))


def integrate_covariance_ode(a, d, v0, dt=1e-3, t_max=200.0, settle_tol=1e-10):
    """Integrate dV/dt = A V + V A^T + D with classical RK4 until it settles.

    Arrays may carry leading batch dimensions (``(..., n, n)``), in which case
    every system is advanced in lockstep until all of them have settled.
    Settled means ||dV/dt||_F < settle_tol.

    Raises ConvergenceError (carrying the last residual) if some system has
    not settled by ``t_max``.
    """
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    v = np.array(v0, dtype=float)
    if dt <= 0:
        raise DomainError(f"dt must be > 0, got {dt}")
    if a.ndim < 2 or a.shape[-1] != a.shape[-2] or d.shape[-2:] != a.shape[-2:]:
        raise DomainError(f"A and D must be square and of equal shape, got {a.shape} and {d.shape}")
    for m in a.reshape(-1, *a.shape[-2:]):
        if not check_stability(m).stable:
            raise StabilityError("covariance ODE needs a stable drift matrix")

    at = np.swapaxes(a, -1, -2)

    def rhs(x):
        return a @ x + x @ at + d

    t = 0.0
    steps = 0
    residual = np.linalg.norm(rhs(v), axis=(-2, -1))
    while np.any(residual >= settle_tol):
        if t >= t_max:
            raise ConvergenceError(
                f"covariance ODE not settled by t={t_max}: max |dV/dt| = {np.max(residual):.3e}",
                residual=float(np.max(residual)),
            )
        k1 = rhs(v)
        k2 = rhs(v + 0.5 * dt * k1)
        k3 = rhs(v + 0.5 * dt * k2)
        k4 = rhs(v + dt * k3)
        v = v + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
        steps += 1
        residual = np.linalg.norm(rhs(v), axis=(-2, -1))
    log.debug("covariance ODE settled after %d steps (t=%.3f)", steps, t)
    return 0.5 * (v + np.swapaxes(v, -1, -2))


def symplectic_form(n_modes):
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(v):
    """Symplectic spectrum of a 2n x 2n covariance matrix, ascending."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
        raise DomainError(f"expected a 2n x 2n matrix, got shape {v.shape}")
    if not np.allclose(v, v.T, rtol=0.0, atol=1e-10 * max(1.0, np.max(np.abs(v)))):
        raise DomainError("covariance matrix is not symmetric")
    n = v.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ v)))
    return ev.reshape(n, 2).mean(axis=1)


def check_physical(v, tol=PHYSICALITY_TOL):
    """Return the smallest symplectic eigenvalue; warn if it is below 1/2 - tol."""
    nu = float(symplectic_eigenvalues(v)[0])
    if nu < 0.5 - tol:
        warnings.warn(
            f"covariance violates the uncertainty principle: min symplectic eigenvalue {nu:.12g} < 1/2",
            PhysicalityWarning,
            stacklevel=2,
        )
    return nu
