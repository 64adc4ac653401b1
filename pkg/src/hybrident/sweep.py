"""Point evaluation, grid sweeps and figure presets."""

from __future__ import annotations

import itertools
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, entanglement, steady_state
from .entanglement import PAIRS, DuanReport, EntanglementReport
from .errors import DomainError
from .model import GAMMA_READOUT_0, ParameterSet

#: Optomechanical coupling of the "with mechanics" reference curve.
G_ON = 1.0

#: Squeezing grid shared by all presets: 0 to 3 in steps of 0.05.
R_GRID = tuple(round(0.05 * k, 10) for k in range(61))

ALL_PAIRS = tuple(PAIRS)


@dataclass(frozen=True)
class PairReport:
    entanglement: EntanglementReport
    duan: DuanReport


@dataclass(frozen=True)
class PointReport:
    parameters: ParameterSet
    stable: bool
    max_real_part: float
    input_log_neg: float
    pairs: dict = field(default_factory=dict)
    min_symplectic: float = math.nan
    covariance: np.ndarray | None = None

    def log_neg(self, pair):
        return self.pairs[pair].entanglement.log_neg if self.stable else math.nan

    def duan_ratio(self, pair):
        return self.pairs[pair].duan.ratio if self.stable else math.nan

    def eta_minus(self, pair):
        return self.pairs[pair].entanglement.eta_minus if self.stable else math.nan


@dataclass(frozen=True)
class SweepSpec:
    base: ParameterSet
    axes: tuple  # ((name, (v1, v2, ...)), ...)
    r_grid: tuple = R_GRID
    pairs: tuple = ALL_PAIRS
    name: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        axes = tuple((str(name), tuple(float(v) for v in values)) for name, values in dict(self.axes).items())
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "r_grid", tuple(float(r) for r in self.r_grid))
        object.__setattr__(self, "pairs", tuple(self.pairs))
        validate_spec(self)

    @property
    def axis_names(self):
        return tuple(name for name, _ in self.axes)

    def grid(self):
        """Parameter sets in lexicographic order, squeezing varying fastest."""
        value_lists = [values for _, values in self.axes] + [self.r_grid]
        names = list(self.axis_names) + ["r"]
        for combo in itertools.product(*value_lists):
            yield self.base.replace(**dict(zip(names, combo)))


def validate_spec(spec: SweepSpec):
    valid = ParameterSet.field_names()
    if not 1 <= len(spec.axes) <= 2:
        raise DomainError(f"a sweep needs one or two axes, got {len(spec.axes)}")
    for name, values in spec.axes:
        if name not in valid or name == "r":
            raise DomainError(f"invalid axis {name!r}; valid axes: {', '.join(n for n in valid if n != 'r')}")
        if not values:
            raise DomainError(f"axis {name!r} has no values")
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"axis {name!r} has non-finite values")
    if not spec.r_grid or not all(math.isfinite(r) for r in spec.r_grid):
        raise DomainError("r_grid must be a non-empty list of finite values")
    for pair in spec.pairs:
        if pair not in PAIRS:
            raise DomainError(f"unknown pair {pair!r}; valid pairs: {', '.join(PAIRS)}")


def run_point(params: ParameterSet, pairs=ALL_PAIRS, keep_covariance=False) -> PointReport:
    """Steady state and pair measures at one parameter point.

    Unstable points are reported with ``stable=False`` and no state results.
    """
    a = dynamics.build_drift(params)
    stab = dynamics.check_stability(a)
    input_en = entanglement.log_negativity(
        dynamics.input_tmsv_covariance(params.r, params.eta_i, params.eta_s)
    ).log_neg
    if not stab.stable:
        return PointReport(params, False, stab.max_real_part, input_en)
    v = steady_state.solve_lyapunov(a, dynamics.build_diffusion(params))
    nu = steady_state.check_physical(v)
    results = {}
    for pair in pairs:
        v4 = entanglement.reduce_pair(v, pair)
        results[pair] = PairReport(entanglement.log_negativity(v4), entanglement.duan_quantity(v4))
    return PointReport(
        params,
        True,
        stab.max_real_part,
        input_en,
        pairs=results,
        min_symplectic=nu,
        covariance=v if keep_covariance else None,
    )


def _worker_count(n_tasks):
    env = os.environ.get("HYBRIDENT_THREADS", "0").strip() or "0"
    try:
        n = int(env)
    except ValueError:
        raise DomainError(f"HYBRIDENT_THREADS must be an integer, got {env!r}") from None
    if n < 0:
        raise DomainError(f"HYBRIDENT_THREADS must be >= 0, got {n}")
    if n == 0:
        n = os.cpu_count() or 1
    return max(1, min(n, n_tasks))


def run_sweep(spec: SweepSpec, workers=None):
    """Evaluate every grid point; rows come back in grid order."""
    validate_spec(spec)
    points = list(spec.grid())
    workers = workers or _worker_count(len(points))

    def evaluate(p):
        return run_point(p, spec.pairs)

    with warnings.catch_warnings():
        warnings.simplefilter("default", steady_state.PhysicalityWarning)
        if workers == 1:
            return [evaluate(p) for p in points]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(evaluate, points))


# Preset axes bracket each default by factors 1/4 .. 4, except the detuning
# and Larmor frequency (additive steps of 15 around 60), the readout rate
# (log-spaced over two decades) and the efficiencies (capped at 1).
_BRACKET = (0.25, 0.5, 1.0, 2.0, 4.0)


def _scaled(center):
    return tuple(center * f for f in _BRACKET)


def _readout_decades():
    return tuple(float(x) for x in GAMMA_READOUT_0 * np.logspace(-1.0, 1.0, 5))


_FIG3_AXES = {
    "fig3_Ia": ("delta", (30.0, 45.0, 60.0, 75.0, 90.0)),
    "fig3_Ib": ("kappa", _scaled(1.0)),
    "fig3_IIa": ("omega_s", (-90.0, -75.0, -60.0, -45.0, -30.0)),
    "fig3_IIb": ("gamma_s", _scaled(1.0)),
    "fig3_IIIa": ("omega_m", _scaled(60.0)),
    "fig3_IIIb": ("gamma_m", _scaled(1.0)),
    "fig3_IVa": ("g_om", _scaled(G_ON)),
    "fig3_IVb": ("gamma_readout", _readout_decades()),
    "fig3_Va": ("n_m", _scaled(0.8)),
    "fig3_Vb": ("n_s", _scaled(0.5)),
    "fig3_VIa": ("eta_i", (0.2, 0.4, 0.6, 0.8, 1.0)),
    "fig3_VIb": ("eta_s", (0.2, 0.4, 0.6, 0.8, 1.0)),
}

PRESET_NAMES = ("fig2", *_FIG3_AXES, "fig4_I", "fig4_II")


def figure_preset(name, g_on=G_ON) -> SweepSpec:
    """Sweep definition behind one of the reference figures."""
    base = ParameterSet()
    meta = {"preset": name, "g_on": g_on}
    if name == "fig2":
        return SweepSpec(base, (("g_om", (0.0, g_on)),), name=name, metadata=meta)
    if name in _FIG3_AXES:
        axis, values = _FIG3_AXES[name]
        if axis == "g_om":
            values = tuple(g_on * f for f in _BRACKET)
        return SweepSpec(base.replace(g_om=g_on), ((axis, values),), name=name, metadata=meta)
    if name in ("fig4_I", "fig4_II"):
        cold = base.replace(n_m=0.0, n_s=0.0)
        if name == "fig4_I":
            axis = ("g_om", (0.0,) + tuple(g_on * f for f in _BRACKET))
        else:
            cold = cold.replace(g_om=g_on)
            axis = ("gamma_readout", (0.0,) + _scaled(GAMMA_READOUT_0))
        return SweepSpec(cold, (axis,), name=name, metadata=meta)
    raise DomainError(f"unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}")
