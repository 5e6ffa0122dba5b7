import numpy as np
import pytest

from nlslab import spectral as sp


@pytest.fixture(scope="session")
def grid16():
    return sp.SpectralGrid(2.0 * np.pi, 16)


@pytest.fixture(scope="session")
def grid8():
    return sp.SpectralGrid(2.0 * np.pi, 8)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def banded_random_field(grid, rng, band, amplitude=1.0):
    """Random field supported on |k| <= band (spectral headroom for tests)."""
    c = np.zeros(grid.n_coeff, dtype=np.complex128)
    for k in range(-band, band + 1):
        c[grid.n + k] = rng.standard_normal() + 1j * rng.standard_normal()
    u = sp.Field(grid, c)
    n = sp.norm(u, "l2")
    return u * (amplitude / n) if n > 0 else u


def three_mode_forcing(grid, weights=((0, 1.0), (1, 0.05), (-1, 0.05)), norm_l2=1.0):
    """The acceptance forcing: modes {0, +1, -1}, weights (1, 0.05, 0.05)."""
    c = np.zeros(grid.n_coeff, dtype=np.complex128)
    for k, w in weights:
        c[grid.n + k] = w
    f = sp.Field(grid, c)
    return f * (norm_l2 / sp.norm(f, "l2"))
