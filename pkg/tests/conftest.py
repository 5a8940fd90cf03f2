import numpy as np
import pytest

from mchoeffding import contraction, make_family, validate_chain


def random_chain(rng, n_states, min_entry=0.05):
    """Strictly positive row-stochastic matrix with its computed stationary vector."""
    A = rng.random((n_states, n_states)) + min_entry
    A /= A.sum(axis=1, keepdims=True)
    return validate_chain(A)


def random_contractive_chain(rng, n_states, lam_cap=0.95):
    """Resample until the contraction parameter is below lam_cap."""
    for _ in range(200):
        chain = random_chain(rng, n_states)
        if contraction(chain) < lam_cap:
            return chain
    raise RuntimeError("could not draw a contractive chain")


def random_lattice_family(rng, chain, n, span=2):
    """Mean-zero family whose within-step value differences are integers."""
    rows = []
    while len(rows) < n:
        g = rng.integers(-span, span + 1, size=chain.n_states).astype(float)
        if np.ptp(g) > 0:
            rows.append(g)
    g = np.array(rows)
    centered = g - (g @ chain.stationary)[:, None]
    return make_family(centered, chain=chain)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
