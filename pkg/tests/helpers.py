"""Shared oracles and generators for the test suite."""

from __future__ import annotations

import math

import numpy as np

from entkit import DensityMatrix


def binary_entropy_oracle(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def haar_unitary(dim: int, rng) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def separable_two_qubit(seed: int, n_terms: int) -> DensityMatrix:
    """A mixture of random product pure states (entanglement is exactly 0)."""
    rng = np.random.default_rng(seed)
    mat = np.zeros((4, 4), dtype=complex)
    weights = rng.dirichlet(np.ones(n_terms))
    for t in range(n_terms):
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        a /= np.linalg.norm(a)
        b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b /= np.linalg.norm(b)
        v = np.kron(a, b)
        mat += weights[t] * np.outer(v, v.conj())
    return DensityMatrix(mat, (2, 2))


def hamiltonian_cycle_dp(adj) -> int:
    """Independent Hamiltonian-cycle check by subset dynamic programming."""
    adj = np.asarray(adj)
    n = adj.shape[0]
    if n < 3:
        return 0
    full = (1 << n) - 1
    dp = [[False] * n for _ in range(1 << n)]
    dp[1][0] = True
    for mask in range(1 << n):
        if not mask & 1:
            continue
        for v in range(n):
            if not dp[mask][v]:
                continue
            for w in range(n):
                if not mask >> w & 1 and adj[v, w]:
                    dp[mask | 1 << w][w] = True
    return int(any(dp[full][v] and adj[v, 0] for v in range(1, n)))
