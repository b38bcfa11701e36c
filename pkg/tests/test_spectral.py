"""Eigendecomposition and single-particle propagator elements."""

import numpy as np
import pytest

from spinbus import (
    amplitude_1p,
    amplitude_row,
    build_chain,
    decompose_chain,
    propagator_minor,
    propagator_minor_grid,
)


def test_uniform_open_chain_spectrum():
    """Barrier-free uniform chain has the textbook cosine band."""
    for n in (3, 5, 8):
        dec = decompose_chain(build_chain(n))
        expected = np.sort([-4.0 * np.cos(k * np.pi / (n + 1)) for k in range(1, n + 1)])
        np.testing.assert_allclose(dec.eigenvalues, expected, atol=1e-12)


def test_eigenvectors_orthonormal():
    dec = decompose_chain(build_chain(9, 2, 17.0))
    gram = dec.eigenvectors.T @ dec.eigenvectors
    np.testing.assert_allclose(gram, np.eye(9), atol=1e-12)


def test_two_site_oscillation():
    # smallest chain: coupling -2 gives f_21(t) = i sin 2t
    dec = decompose_chain(build_chain(2))
    for t in (0.0, 0.3, 1.1, 2.9):
        f = amplitude_1p(dec, 2, 1, t)
        assert abs(f - 1j * np.sin(2 * t)) < 1e-12
        assert abs(amplitude_1p(dec, 1, 1, t) - np.cos(2 * t)) < 1e-12


def test_propagator_unitarity():
    rng = np.random.default_rng(0)
    dec = decompose_chain(build_chain(8, 2, 6.5))
    for _ in range(5):
        t = rng.uniform(0.0, 40.0)
        u = propagator_minor(dec, range(1, 9), range(1, 9), t)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(8), atol=1e-12)


def test_amplitude_row_matches_scalar():
    dec = decompose_chain(build_chain(6, 1, 3.0))
    row = amplitude_row(dec, 2, 7.7)
    for j in range(1, 7):
        assert abs(row[j - 1] - amplitude_1p(dec, j, 2, 7.7)) < 1e-14


def test_minor_grid_matches_single_times():
    dec = decompose_chain(build_chain(7, 2, 4.0))
    ts = np.array([0.0, 1.5, 12.0])
    grid = propagator_minor_grid(dec, (6, 7), (1, 2), ts)
    assert grid.shape == (3, 2, 2)
    for k, t in enumerate(ts):
        np.testing.assert_allclose(grid[k], propagator_minor(dec, (6, 7), (1, 2), t),
                                   atol=1e-14)


def test_site_index_validation():
    dec = decompose_chain(build_chain(5))
    with pytest.raises(ValueError):
        amplitude_1p(dec, 0, 1, 1.0)
    with pytest.raises(ValueError):
        amplitude_1p(dec, 6, 1, 1.0)


def test_time_reversal_symmetry():
    """Real symmetric H makes G(-t) the conjugate of G(t)."""
    dec = decompose_chain(build_chain(7, 2, 9.0))
    g_fwd = propagator_minor(dec, (3, 6), (1, 2), 4.2)
    g_bwd = propagator_minor(dec, (3, 6), (1, 2), -4.2)
    np.testing.assert_allclose(g_bwd, g_fwd.conj(), atol=1e-13)
