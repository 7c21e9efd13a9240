"""Deterministic random-object factories shared by the test modules."""

import numpy as np


def random_pure(rng, dim=4):
    """Haar-ish random pure state: normalized complex Gaussian vector."""
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def ginibre_rho(rng, dim=4, rank=None):
    """Random full-rank (or rank-limited) density matrix, G G† normalized."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / rho.trace()


def random_unitary(rng, dim=2):
    """Haar-distributed unitary via QR with phase-corrected diagonal."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_jones(rng, scale=1.0):
    """Random invertible 2x2 complex matrix (generic, not unitary)."""
    while True:
        mat = scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        if abs(np.linalg.det(mat)) > 0.1 * scale**2:
            return mat
