import numpy as np
import pytest

from hybrident import ParameterSet


@pytest.fixture
def defaults():
    return ParameterSet()


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def perturbed_parameters(rng, count, base=None, spread=0.5):
    """Parameter sets with every rate drawn uniformly within +/- spread of ``base``."""
    base = base or ParameterSet(g_om=1.0, r=1.0)
    names = ("kappa", "delta", "omega_m", "gamma_m", "omega_s", "gamma_s", "g_om", "gamma_readout", "n_m", "n_s", "r")
    out = []
    for _ in range(count):
        changes = {n: getattr(base, n) * rng.uniform(1 - spread, 1 + spread) for n in names}
        changes["eta_i"] = rng.uniform(0.5, 1.0)
        changes["eta_s"] = rng.uniform(0.5, 1.0)
        out.append(base.replace(**changes))
    return out
