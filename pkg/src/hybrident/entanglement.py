"""Two-mode entanglement and separability measures for Gaussian states.

Covariances use vacuum variance 1/2. For a two-mode block matrix
V = [[V11, V12], [V12^T, V22]] the seralian is

    Sigma(V) = det V11 + det V22 - 2 det V12,

and the smallest symplectic eigenvalue of the partial transpose is

    eta_minus = sqrt((Sigma - sqrt(Sigma^2 - 4 det V)) / 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError

#: Index pairs of the three subsystems in the 6x6 ordering.
PAIRS = {
    "cavity-mechanics": (0, 1, 2, 3),
    "cavity-spin": (0, 1, 4, 5),
    "mechanics-spin": (2, 3, 4, 5),
}
PAIR_TAGS = {"cavity-mechanics": "cm", "cavity-spin": "cs", "mechanics-spin": "ms"}

DEGENERATE_EPS = 1e-9

#: Relative band around the vacuum value 1/2 inside which eta_minus is a
#: rounding artefact of a product of pure states; such values snap to 1/2.
VACUUM_SNAP = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class TwoModeCovariance:
    v11: np.ndarray
    v22: np.ndarray
    v12: np.ndarray

    @classmethod
    def from_matrix(cls, v4):
        v4 = np.asarray(v4, dtype=float)
        if v4.shape != (4, 4):
            raise DomainError(f"two-mode covariance must be 4x4, got shape {v4.shape}")
        return cls(v11=v4[:2, :2].copy(), v22=v4[2:, 2:].copy(), v12=v4[:2, 2:].copy())

    @property
    def matrix(self):
        return np.block([[self.v11, self.v12], [self.v12.T, self.v22]])


@dataclass(frozen=True)
class EntanglementReport:
    eta_minus: float
    log_neg: float
    entangled: bool
    simon_violated: bool


@dataclass(frozen=True)
class DuanReport:
    n: float
    m: float
    c: float
    cprime: float
    c0_sq: float
    lhs: float
    rhs: float
    ratio: float
    separable_consistent: bool
    degenerate: bool


def _as_two_mode(v4):
    if isinstance(v4, TwoModeCovariance):
        return v4
    return TwoModeCovariance.from_matrix(v4)


def reduce_pair(v, pair):
    """Two-mode reduction of a 6x6 covariance onto one subsystem pair."""
    try:
        idx = PAIRS[pair]
    except KeyError:
        raise DomainError(f"unknown pair {pair!r}; valid pairs: {', '.join(PAIRS)}") from None
    v = np.asarray(v, dtype=float)
    if v.shape != (6, 6):
        raise DomainError(f"expected a 6x6 covariance, got shape {v.shape}")
    return TwoModeCovariance.from_matrix(v[np.ix_(idx, idx)])


def seralian(v4):
    t = _as_two_mode(v4)
    return float(np.linalg.det(t.v11) + np.linalg.det(t.v22) - 2.0 * np.linalg.det(t.v12))


def eta_minus(v4):
    """Smallest symplectic eigenvalue of the partially transposed state."""
    t = _as_two_mode(v4)
    sigma = seralian(t)
    det_v = float(np.linalg.det(t.matrix))
    radicand = sigma**2 - 4.0 * det_v
    if radicand < -1e-12:
        raise DomainError(f"unphysical two-mode covariance: Sigma^2 - 4 det V = {radicand:.3e} < 0")
    if det_v < 0:
        raise DomainError(f"unphysical two-mode covariance: det V = {det_v:.3e} < 0")
    # conjugate form of (Sigma - sqrt(.)) / 2, free of cancellation when Sigma^2 >> det V
    denom = sigma + math.sqrt(max(radicand, 0.0))
    if denom <= 0:
        raise NumericalError(f"degenerate two-mode covariance: Sigma = {sigma:.3e}")
    inner = 2.0 * det_v / denom
    eta = math.sqrt(inner)
    if abs(2.0 * eta - 1.0) <= VACUUM_SNAP:
        eta = 0.5
    return eta


def log_negativity(v4):
    t = _as_two_mode(v4)
    eta = eta_minus(t)
    log_neg = max(0.0, -math.log(2.0 * eta)) if eta > 0 else math.inf
    simon = 4.0 * float(np.linalg.det(t.matrix)) < seralian(t) - 0.25
    return EntanglementReport(eta_minus=eta, log_neg=log_neg, entangled=log_neg > 0, simon_violated=simon)


def duan_standard_form(v4):
    """Standard-form invariants (n, m, c, c') from block determinants.

    With W = 2V: n^2 = det W11, m^2 = det W22, c c' = det W12 and
    (nm - c^2)(nm - c'^2) = det W. c^2 and c'^2 are the roots of
    t^2 - S t + P with P = (det W12)^2, S = (n^2 m^2 + P - det W) / (nm);
    c takes the larger root with positive sign, c' carries sign(det W12).
    """
    t = _as_two_mode(v4)
    w = 2.0 * t.matrix
    n2 = float(np.linalg.det(w[:2, :2]))
    m2 = float(np.linalg.det(w[2:, 2:]))
    if n2 < 1.0 - 1e-9 or m2 < 1.0 - 1e-9:
        raise DomainError(f"local states are unphysical: det(2V11) = {n2:.12g}, det(2V22) = {m2:.12g}")
    n = math.sqrt(n2)
    m = math.sqrt(m2)
    nm = n * m
    if nm == 0:
        raise DomainError("standard form undefined for nm = 0")
    det12 = float(np.linalg.det(w[:2, 2:]))
    p = det12**2
    s = (n2 * m2 + p - float(np.linalg.det(w))) / nm
    disc = s * s - 4.0 * p
    if disc < -1e-10 * max(1.0, s * s):
        raise NumericalError(f"standard form has negative discriminant {disc:.3e}")
    root = math.sqrt(max(disc, 0.0))
    c2 = 0.5 * (s + root)
    # smaller root from the product of roots, avoiding cancellation in s - root
    cp2 = p / c2 if c2 > 0 else 0.0
    c = math.sqrt(max(c2, 0.0))
    cprime = math.copysign(math.sqrt(cp2), det12)
    return n, m, c, cprime


def duan_quantity(v4):
    """Duan inequality in standard form, reported as the ratio lhs / rhs.

    lhs = c0^2 n + m / c0^2 - |c| - |c'| and rhs = c0^2 + 1 / c0^2 with
    c0^2 = sqrt((m - 1) / (n - 1)). Ratio below one certifies entanglement.

    When either local state is pure (n or m within 1e-9 of 1) the weight
    diverges or vanishes; such a mode is uncorrelated with anything and the
    ratio tends to exactly 1 along the weight's limit, so the report uses
    c0^2 = 1 and sets lhs = rhs = 2.
    """
    n, m, c, cprime = duan_standard_form(v4)
    degenerate = n <= 1.0 + DEGENERATE_EPS or m <= 1.0 + DEGENERATE_EPS
    if degenerate:
        c0_sq = 1.0
        rhs = 2.0
        lhs = 2.0
    else:
        c0_sq = math.sqrt((m - 1.0) / (n - 1.0))
        lhs = c0_sq * n + m / c0_sq - abs(c) - abs(cprime)
        rhs = c0_sq + 1.0 / c0_sq
    ratio = lhs / rhs
    return DuanReport(
        n=n,
        m=m,
        c=c,
        cprime=cprime,
        c0_sq=c0_sq,
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        separable_consistent=ratio >= 1.0,
        degenerate=degenerate,
    )
