"""Physical parameters of the hybrid cavity / mechanics / spin system.

All rates are measured in units of the reference cavity half-linewidth
kappa_0 = 1, and hbar = k_B = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import DomainError

#: Readout rate used for the reference parameter set.
GAMMA_READOUT_0 = 25.14


@dataclass(frozen=True)
class ParameterSet:
    """Dimensionless parameters of the linearized model.

    Defaults reproduce the reference working point: Delta = omega_m = 60,
    omega_s = -60, gamma_m = gamma_s = kappa = 1, Gamma_S = 25.14,
    n_m = 0.8, n_s = 0.5, unit efficiencies. The optomechanical coupling
    and the squeezing factor default to zero.
    """

    kappa: float = 1.0
    delta: float = 60.0
    omega_m: float = 60.0
    gamma_m: float = 1.0
    omega_s: float = -60.0
    gamma_s: float = 1.0
    g_om: float = 0.0
    gamma_readout: float = GAMMA_READOUT_0
    n_m: float = 0.8
    n_s: float = 0.5
    eta_i: float = 1.0
    eta_s: float = 1.0
    r: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or isinstance(value, bool):
                raise DomainError(f"{f.name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise DomainError(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, float(value))
        for name in ("kappa", "gamma_m", "gamma_s"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("g_om", "gamma_readout", "n_m", "n_s", "r"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("eta_i", "eta_s"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {getattr(self, name)}")

    @classmethod
    def field_names(cls):
        return tuple(f.name for f in fields(cls))

    def replace(self, **changes):
        """Return a copy with some fields changed (validated again)."""
        unknown = set(changes) - set(self.field_names())
        if unknown:
            raise DomainError(
                f"unknown parameter(s) {sorted(unknown)}; valid names: {', '.join(self.field_names())}"
            )
        return replace(self, **changes)

    def as_dict(self):
        return {name: getattr(self, name) for name in self.field_names()}

    @property
    def phi(self):
        """Phase of the intracavity field, arctan(Delta / kappa)."""
        return math.atan(self.delta / self.kappa)


@dataclass(frozen=True)
class OperatingPoint:
    """One self-consistent steady state of the driven optomechanical cavity."""

    drive_amp: float
    delta_laser: float
    g0: float
    q_zpf: float
    alpha_s: float  # modulus of the intracavity amplitude
    q_s: float
    delta_eff: float
    g_lin: float
    phi: float

    def to_parameters(self, base: ParameterSet | None = None, kappa: float | None = None) -> ParameterSet:
        """Copy ``base`` with Delta and G taken from this operating point."""
        base = base or ParameterSet()
        changes = {"delta": self.delta_eff, "g_om": self.g_lin}
        if kappa is not None:
            changes["kappa"] = kappa
        return base.replace(**changes)


def _require_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


def _real_cubic_roots(coeffs):
    """Real roots of a cubic from its companion-matrix eigenvalues."""
    roots = np.roots(coeffs)
    real = []
    for z in roots:
        if abs(z.imag) <= 1e-9 * max(1.0, abs(z)):
            real.append(z.real)
    if not real:
        # a real cubic always has a real root; keep the least imaginary one
        real.append(roots[np.argmin(np.abs(roots.imag))].real)
    return real


def _polish(root, coeffs):
    """A few Newton steps on the cubic to reach full double precision."""
    p = np.poly1d(coeffs)
    dp = p.deriv()
    x = root
    for _ in range(4):
        d = dp(x)
        if d == 0:
            break
        step = p(x) / d
        x -= step
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return float(x)


def derive_operating_point(drive_amp, delta_laser, g0, q_zpf, kappa, omega_m):
    """Solve the radiation-pressure self-consistency for the effective detuning.

    The effective detuning obeys the cubic

        (Delta - Delta_L) (kappa^2 + Delta^2) = beta |E|^2,
        beta = g0^2 q_zpf^2 / omega_m,

    which has one or three real roots (optical bistability). Every real root
    is returned, sorted ascending, together with the derived intracavity
    amplitude, static displacement, linearized coupling and field phase.
    Selecting the physically realized branch (a stable one) is up to the
    caller.
    """
    _require_finite(
        drive_amp=drive_amp, delta_laser=delta_laser, g0=g0, q_zpf=q_zpf, kappa=kappa, omega_m=omega_m
    )
    if kappa <= 0:
        raise DomainError(f"kappa must be > 0, got {kappa}")
    if omega_m <= 0:
        raise DomainError(f"omega_m must be > 0, got {omega_m}")

    drive2 = float(drive_amp) ** 2
    beta = g0**2 * q_zpf**2 / omega_m
    coeffs = [1.0, -delta_laser, kappa**2, -delta_laser * kappa**2 - beta * drive2]
    if beta * drive2 == 0.0:
        roots = [float(delta_laser)]
    else:
        roots = sorted({_polish(x, coeffs) for x in _real_cubic_roots(coeffs)})

    points = []
    for delta in roots:
        alpha2 = drive2 / (kappa**2 + delta**2)
        alpha = math.sqrt(alpha2)
        q_s = g0 / omega_m * alpha2 * q_zpf**2
        points.append(
            OperatingPoint(
                drive_amp=float(drive_amp),
                delta_laser=float(delta_laser),
                g0=float(g0),
                q_zpf=float(q_zpf),
                alpha_s=alpha,
                q_s=q_s,
                delta_eff=delta,
                g_lin=math.sqrt(2.0) * abs(g0) * alpha * abs(q_zpf),
                phi=math.atan(delta / kappa),
            )
        )
    return points


def spin_readout_rate(alpha_coupling, photon_flux, jz_mag):
    """Readout rate Gamma_S = (alpha^2 / 2) * Phi * |<J_z>|."""
    if photon_flux < 0:
        raise DomainError(f"photon_flux must be >= 0, got {photon_flux}")
    if jz_mag < 0:
        raise DomainError(f"jz_mag must be >= 0, got {jz_mag}")
    return 0.5 * alpha_coupling**2 * photon_flux * jz_mag


def thermal_occupation(omega, temperature):
    """Bose-Einstein occupation 1 / (exp(omega / T) - 1)."""
    if not omega > 0:
        raise DomainError(f"omega must be > 0, got {omega}")
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0:
        return 0.0
    x = omega / temperature
    # written in exp(-x) so large omega / T underflows to 0 instead of overflowing
    return math.exp(-x) / -math.expm1(-x)


@dataclass(frozen=True)
class Susceptibility:
    value: complex
    kind: str


def susceptibility(kind, omega, resonance, damping):
    """Oscillator response resonance / (resonance^2 - omega^2 - 2 i omega damping).

    ``omega`` may be a scalar or an array; ``kind`` is ``"mechanical"`` or
    ``"spin"`` and only labels the result.
    """
    if kind not in ("mechanical", "spin"):
        raise DomainError(f"kind must be 'mechanical' or 'spin', got {kind!r}")
    if resonance == 0:
        raise DomainError("resonance frequency must be nonzero")
    omega = np.asarray(omega, dtype=float)
    value = resonance / (resonance**2 - omega**2 - 2j * omega * damping)
    if value.ndim == 0:
        value = complex(value)
    return Susceptibility(value=value, kind=kind)


def susceptibility_mismatch(params: ParameterSet, omegas):
    """Largest pointwise |chi_m - chi_s| over ``omegas``.

    Returns ``(signed, magnitude)``: the first compares the spin response at
    the signed Larmor frequency, the second at |omega_s|.
    """
    chi_m = susceptibility("mechanical", omegas, params.omega_m, params.gamma_m).value
    chi_signed = susceptibility("spin", omegas, params.omega_s, params.gamma_s).value
    chi_mag = susceptibility("spin", omegas, abs(params.omega_s), params.gamma_s).value
    return float(np.max(np.abs(chi_m - chi_signed))), float(np.max(np.abs(chi_m - chi_mag)))
