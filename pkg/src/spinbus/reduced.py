"""Receiver-pair reduced density matrix from determinant amplitudes.

The sender pair occupies sites (1, 2) and the receiver pair sites (N-1, N).
Writing f for single-excitation amplitudes and g for two-excitation
determinants, the evolved state sorts into sectors that share a bulk
configuration (sites 1..N-2):

    bulk empty   : a00, plus arrivals A_{N-1}, A_N and the pair term B_{N-1,N}
    bulk at m    : A_m, plus B_{m,N-1} and B_{m,N}
    bulk pair    : B_{r,s} with r < s <= N-2

where A_m = a10*f_{m,1} + a01*f_{m,2} and B_{r,s} = a11*g_{(r,s)<-(1,2)}.
Tracing the bulk gives a 4 x 4 matrix in the receiver basis
(|11>, |10>, |01>, |00>), |10> meaning site N-1 excited.  The weight of bulk
pair configurations enters only the |00> population and follows from
two-excitation unitarity, so no O(N^2) determinant sweep is needed.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .spectral import SpectralDecomposition, amplitude_row
from .states import TwoQubitState

RECEIVER_BASIS = ("11", "10", "01", "00")


class PairAmplitudes(NamedTuple):
    """Time-t amplitude ingredients shared by the reduced state and averages.

    f1, f2: arrival amplitudes from sites 1 and 2 on all N sites.
    g_bulk_u, g_bulk_v: pair amplitudes g_{(m,N-1)} and g_{(m,N)} for bulk m.
    g_uv: pair amplitude onto the receiver pair (N-1, N).
    bulk_pair_weight: total weight of pair configurations inside the bulk.
    """

    f1: np.ndarray
    f2: np.ndarray
    g_bulk_u: np.ndarray
    g_bulk_v: np.ndarray
    g_uv: complex
    bulk_pair_weight: float


def pair_amplitudes(dec: SpectralDecomposition, t: float) -> PairAmplitudes:
    """All amplitude ingredients for a sender pair (1, 2) at time t."""
    n = dec.n_sites
    if n < 4:
        raise ValueError(f"receiver pair needs at least 4 sites, got {n}")
    f1 = amplitude_row(dec, 1, t)
    f2 = amplitude_row(dec, 2, t)
    iu, iv = n - 2, n - 1  # 0-based receiver sites N-1, N
    g_bulk_u = f1[:iu] * f2[iu] - f2[:iu] * f1[iu]
    g_bulk_v = f1[:iu] * f2[iv] - f2[:iu] * f1[iv]
    g_uv = f1[iu] * f2[iv] - f2[iu] * f1[iv]
    weight = 1.0 - float(np.sum(np.abs(g_bulk_u) ** 2 + np.abs(g_bulk_v) ** 2)) \
        - abs(g_uv) ** 2
    return PairAmplitudes(f1, f2, g_bulk_u, g_bulk_v, complex(g_uv), weight)


def evolve_receiver_pair(dec: SpectralDecomposition, state: TwoQubitState,
                         t: float) -> np.ndarray:
    """Receiver-pair density matrix at time t, basis (|11>, |10>, |01>, |00>)."""
    pa = pair_amplitudes(dec, t)
    n = dec.n_sites
    iu, iv = n - 2, n - 1

    arrive = state.a10 * pa.f1 + state.a01 * pa.f2
    a_bulk, a_u, a_v = arrive[:iu], arrive[iu], arrive[iv]
    b_u = state.a11 * pa.g_bulk_u
    b_v = state.a11 * pa.g_bulk_v
    b_uv = state.a11 * pa.g_uv

    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = abs(b_uv) ** 2
    rho[0, 1] = b_uv * np.conj(a_u)
    rho[0, 2] = b_uv * np.conj(a_v)
    rho[0, 3] = b_uv * np.conj(state.a00)
    rho[1, 1] = abs(a_u) ** 2 + np.sum(np.abs(b_u) ** 2)
    rho[1, 2] = a_u * np.conj(a_v) + np.sum(b_u * np.conj(b_v))
    rho[1, 3] = a_u * np.conj(state.a00) + np.sum(b_u * np.conj(a_bulk))
    rho[2, 2] = abs(a_v) ** 2 + np.sum(np.abs(b_v) ** 2)
    rho[2, 3] = a_v * np.conj(state.a00) + np.sum(b_v * np.conj(a_bulk))
    rho[3, 3] = (abs(state.a00) ** 2 + np.sum(np.abs(a_bulk) ** 2)
                 + abs(state.a11) ** 2 * pa.bulk_pair_weight)
    for i in range(4):
        for j in range(i):
            rho[i, j] = np.conj(rho[j, i])
    return rho


def _target_vector(state: TwoQubitState) -> np.ndarray:
    # sender slot 1 (site 1) maps onto receiver slot 1 (site N-1)
    return np.array([state.a11, state.a10, state.a01, state.a00])


def fidelity_against(rho: np.ndarray, state: TwoQubitState) -> float:
    """Transfer fidelity <psi|rho|psi> of the received state against psi.

    This is the squared overlap convention: for a pure target it equals 1
    exactly at perfect transfer.  See fidelity_sqrt for the square-root form.
    """
    w = _target_vector(state)
    val = float(np.real(w.conj() @ rho @ w))
    return val


def fidelity_sqrt(rho: np.ndarray, state: TwoQubitState) -> float:
    """Square-root (Uhlmann) form sqrt(<psi|rho|psi>) for pure targets."""
    return float(np.sqrt(max(fidelity_against(rho, state), 0.0)))


def pair_amplitude_grid(dec: SpectralDecomposition, ts: np.ndarray):
    """Vectorized PairAmplitudes over a time grid.

    Returns (f1, f2, g_bulk_u, g_bulk_v, g_uv, bulk_pair_weight) with leading
    time axis; f arrays have shape (T, N), g_bulk arrays (T, N-2).
    """
    n = dec.n_sites
    if n < 4:
        raise ValueError(f"receiver pair needs at least 4 sites, got {n}")
    ts = np.asarray(ts, dtype=float)
    u = dec.eigenvectors
    phases = np.exp(-1j * np.outer(ts, dec.eigenvalues))
    f1 = (phases * u[0]) @ u.T
    f2 = (phases * u[1]) @ u.T
    iu, iv = n - 2, n - 1
    g_bulk_u = f1[:, :iu] * f2[:, iu:iu + 1] - f2[:, :iu] * f1[:, iu:iu + 1]
    g_bulk_v = f1[:, :iu] * f2[:, iv:iv + 1] - f2[:, :iu] * f1[:, iv:iv + 1]
    g_uv = f1[:, iu] * f2[:, iv] - f2[:, iu] * f1[:, iv]
    weight = 1.0 - np.sum(np.abs(g_bulk_u) ** 2 + np.abs(g_bulk_v) ** 2, axis=1) \
        - np.abs(g_uv) ** 2
    return f1, f2, g_bulk_u, g_bulk_v, g_uv, weight


def fidelity_via_rdm_batch(dec: SpectralDecomposition, states: np.ndarray,
                           t: float) -> np.ndarray:
    """Transfer fidelities for a batch of sender states at one time.

    states has shape (k, 4) with rows [a00, a01, a10, a11]; the result is the
    length-k vector of <psi|rho(t)|psi> values, each identical to running
    evolve_receiver_pair and fidelity_against per state.
    """
    states = np.asarray(states, dtype=complex)
    if states.ndim != 2 or states.shape[1] != 4:
        raise ValueError(f"states must have shape (k, 4), got {states.shape}")
    pa = pair_amplitudes(dec, t)
    n = dec.n_sites
    iu, iv = n - 2, n - 1
    a00, a01, a10, a11 = states[:, 0], states[:, 1], states[:, 2], states[:, 3]

    arrive = np.outer(a10, pa.f1) + np.outer(a01, pa.f2)
    a_bulk, a_u, a_v = arrive[:, :iu], arrive[:, iu], arrive[:, iv]
    b_u = a11[:, None] * pa.g_bulk_u[None, :]
    b_v = a11[:, None] * pa.g_bulk_v[None, :]
    b_uv = a11 * pa.g_uv

    rho = np.empty((states.shape[0], 4, 4), dtype=complex)
    rho[:, 0, 0] = np.abs(b_uv) ** 2
    rho[:, 0, 1] = b_uv * np.conj(a_u)
    rho[:, 0, 2] = b_uv * np.conj(a_v)
    rho[:, 0, 3] = b_uv * np.conj(a00)
    rho[:, 1, 1] = np.abs(a_u) ** 2 + np.sum(np.abs(b_u) ** 2, axis=1)
    rho[:, 1, 2] = a_u * np.conj(a_v) + np.sum(b_u * np.conj(b_v), axis=1)
    rho[:, 1, 3] = a_u * np.conj(a00) + np.sum(b_u * np.conj(a_bulk), axis=1)
    rho[:, 2, 2] = np.abs(a_v) ** 2 + np.sum(np.abs(b_v) ** 2, axis=1)
    rho[:, 2, 3] = a_v * np.conj(a00) + np.sum(b_v * np.conj(a_bulk), axis=1)
    rho[:, 3, 3] = (np.abs(a00) ** 2 + np.sum(np.abs(a_bulk) ** 2, axis=1)
                    + np.abs(a11) ** 2 * pa.bulk_pair_weight)
    for i in range(4):
        for j in range(i):
            rho[:, i, j] = np.conj(rho[:, j, i])

    w = states[:, [3, 2, 1, 0]]
    return np.real(np.einsum("ki,kij,kj->k", w.conj(), rho, w))
