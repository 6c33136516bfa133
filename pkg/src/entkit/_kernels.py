"""Hot numeric kernels: convex-roof refinement and circuit-overlap descent.

The kernels are written as plain numpy functions and compiled with numba's
``@njit`` when it is available.  Setting the environment variable
``ENTKIT_NO_NUMBA=1`` (before import) selects the pure-numpy fallback, which
runs the very same source uncompiled.  ``benchmarks/bench_kernels.py``
compares the two paths.

All randomness is generated by callers and passed in as arrays, so results
are deterministic for a given seed on either path.
"""

from __future__ import annotations

import cmath
import math
import os

import numpy as np

_LN2 = math.log(2.0)
_ENT_CUTOFF = 1e-15
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def numba_disabled_by_env() -> bool:
    return os.environ.get("ENTKIT_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


def _ensemble_avg_ent(W, dim_a, dim_b):
    """Average output entanglement of an ensemble of unnormalized pure rows.

    Row i of W is an unnormalized state on (dim_a x dim_b); its weight is its
    squared norm.  Returns sum_i p_i * S(reduced state of row i) in bits.
    """
    total = 0.0
    m = W.shape[0]
    for i in range(m):
        M = W[i].reshape(dim_a, dim_b)
        if dim_a <= dim_b:
            G = M @ np.ascontiguousarray(M.conj().T)
        else:
            G = np.ascontiguousarray(M.conj().T) @ M
        ev = np.linalg.eigvalsh(G)
        p = 0.0
        for k in range(ev.shape[0]):
            if ev[k] > 0.0:
                p += ev[k]
        if p < 1e-300:
            continue
        ent = 0.0
        for k in range(ev.shape[0]):
            q = ev[k] / p
            if q > _ENT_CUTOFF:
                ent -= q * math.log(q)
        total += p * (ent / _LN2)
    return total


def _refine_isometry(T0, B, dim_a, dim_b, noise, step0, grow, shrink, step_floor):
    """Greedy hill climb over isometries T (orthonormal columns).

    Proposes T + step*noise re-orthonormalized by QR, accepts on improvement
    of the ensemble average entanglement of W = T @ B, and adapts the step
    size.  Stops when the step drops below ``step_floor`` or the proposal
    budget (noise.shape[0]) is exhausted.  Returns (best value, best T).
    """
    T = T0.copy()
    best = ensemble_avg_ent(T @ B, dim_a, dim_b)
    step = step0
    for it in range(noise.shape[0]):
        if step < step_floor:
            break
        C = T + step * noise[it]
        Q, _ = np.linalg.qr(C)
        val = ensemble_avg_ent(np.ascontiguousarray(Q) @ B, dim_a, dim_b)
        if val < best - 1e-15:
            best = val
            T = np.ascontiguousarray(Q)
            step = min(step * grow, 0.5)
        else:
            step *= shrink
    return best, T


def _circuit_overlap(angles, cz_pairs, n_qubits, target):
    """|<target| C |0..0>|^2 for a layered circuit on n_qubits.

    The circuit alternates full layers of single-qubit gates with the CZ
    gates listed in ``cz_pairs`` (one per layer gap).  Each single-qubit gate
    is parametrized by 4 angles (a, b, c, d) as exp(ia) Rz(b) Ry(c) Rz(d), so
    ``angles`` has length 4 * n_qubits * (len(cz_pairs) + 1).  Qubit 0 is the
    most significant bit.
    """
    dim = 1 << n_qubits
    state = np.zeros(dim, dtype=np.complex128)
    state[0] = 1.0
    k = cz_pairs.shape[0]
    idx = 0
    for layer in range(k + 1):
        for q in range(n_qubits):
            a = angles[idx]
            b = angles[idx + 1]
            c = angles[idx + 2]
            d = angles[idx + 3]
            idx += 4
            cos_c = math.cos(0.5 * c)
            sin_c = math.sin(0.5 * c)
            u00 = cmath.exp(1j * (a - 0.5 * (b + d))) * cos_c
            u01 = -cmath.exp(1j * (a - 0.5 * (b - d))) * sin_c
            u10 = cmath.exp(1j * (a + 0.5 * (b - d))) * sin_c
            u11 = cmath.exp(1j * (a + 0.5 * (b + d))) * cos_c
            bit = 1 << (n_qubits - 1 - q)
            for s in range(dim):
                if s & bit == 0:
                    t = s | bit
                    x0 = state[s]
                    x1 = state[t]
                    state[s] = u00 * x0 + u01 * x1
                    state[t] = u10 * x0 + u11 * x1
        if layer < k:
            mask = (1 << (n_qubits - 1 - cz_pairs[layer, 0])) | (1 << (n_qubits - 1 - cz_pairs[layer, 1]))
            for s in range(dim):
                if s & mask == mask:
                    state[s] = -state[s]
    ov = 0.0 + 0.0j
    for s in range(dim):
        ov += np.conj(target[s]) * state[s]
    return ov.real * ov.real + ov.imag * ov.imag


def _golden_descent(angles0, cz_pairs, n_qubits, target, max_sweeps, sweep_tol, window0, stop_at):
    """Cyclic coordinate ascent of the circuit overlap with golden sections.

    Each coordinate is line-searched over a window around its current value;
    a move is kept only if it improves the overlap.  The window halves when a
    full sweep stalls.  Stops early once ``stop_at`` is reached.  Returns
    (best overlap, angles).
    """
    angles = angles0.copy()
    best = circuit_overlap(angles, cz_pairs, n_qubits, target)
    n_par = angles.shape[0]
    window = window0
    for _ in range(max_sweeps):
        if best >= stop_at:
            break
        gained = 0.0
        for p in range(n_par):
            center = angles[p]
            a = center - window
            b = center + window
            c = b - _GOLDEN * (b - a)
            d = a + _GOLDEN * (b - a)
            angles[p] = c
            fc = circuit_overlap(angles, cz_pairs, n_qubits, target)
            angles[p] = d
            fd = circuit_overlap(angles, cz_pairs, n_qubits, target)
            it = 0
            while b - a > 1e-9 and it < 60:
                if fc > fd:
                    b = d
                    d = c
                    fd = fc
                    c = b - _GOLDEN * (b - a)
                    angles[p] = c
                    fc = circuit_overlap(angles, cz_pairs, n_qubits, target)
                else:
                    a = c
                    c = d
                    fc = fd
                    d = a + _GOLDEN * (b - a)
                    angles[p] = d
                    fd = circuit_overlap(angles, cz_pairs, n_qubits, target)
                it += 1
            x = 0.5 * (a + b)
            angles[p] = x
            fx = circuit_overlap(angles, cz_pairs, n_qubits, target)
            if fx > best:
                gained += fx - best
                best = fx
            else:
                angles[p] = center
        if gained < sweep_tol:
            window *= 0.5
            if window < 1e-6:
                break
    return best, angles


_numba = None
if not numba_disabled_by_env():
    try:
        import numba as _numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _numba = None

NUMBA_ENABLED = _numba is not None

if NUMBA_ENABLED:
    _jit = _numba.njit(cache=True, nogil=True)
    ensemble_avg_ent = _jit(_ensemble_avg_ent)
    refine_isometry = _jit(_refine_isometry)
    circuit_overlap = _jit(_circuit_overlap)
    golden_descent = _jit(_golden_descent)
else:
    ensemble_avg_ent = _ensemble_avg_ent
    refine_isometry = _refine_isometry
    circuit_overlap = _circuit_overlap
    golden_descent = _golden_descent


def warm_up() -> None:
    """Trigger JIT compilation of all kernels (no-op on the numpy path)."""
    W = np.eye(2, 4, dtype=np.complex128)
    ensemble_avg_ent(W, 2, 2)
    T0 = np.eye(3, 1, dtype=np.complex128)
    B = np.eye(1, 4, dtype=np.complex128)
    noise = np.zeros((2, 3, 1), dtype=np.complex128)
    refine_isometry(T0, B, 2, 2, noise, 0.1, 1.1, 0.9, 1e-3)
    angles = np.zeros(16, dtype=np.float64)  # 4 angles x 2 qubits x 2 layers
    czs = np.zeros((1, 2), dtype=np.int64)
    czs[0, 1] = 1
    target = np.zeros(4, dtype=np.complex128)
    target[0] = 1.0
    circuit_overlap(angles, czs, 2, target)
    golden_descent(angles, czs, 2, target, 2, 1e-9, 0.5, 2.0)
