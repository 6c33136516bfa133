"""Computable entanglement quantities.

Exact values exist only for pure states (reduced entropy) and for two-qubit
mixed states (the concurrence closed form).  For everything else this module
reports bounds: a convex-roof upper bound found by numerical search over
ensemble decompositions, and an optional hashing (coherent-information)
lower bound on the distillable side.  Mixed-state distillable entanglement
is always reported as an interval, never a point value.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .states import (
    Cut,
    DensityMatrix,
    PureState,
    ValidationError,
    partial_trace,
    reduced_density,
    side_dims,
    von_neumann_entropy,
)

RANK_EIGVAL_CUTOFF = 1e-10
MIX_TOL = 1e-8
WEIGHT_TOL = 1e-9

_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class MeasureValue:
    """An entanglement value in ebits, tagged with how it was obtained."""

    value: float
    kind: str  # "exact" | "upper_bound" | "lower_bound"
    method: str
    tolerance: float = 0.0

    def __post_init__(self):
        if self.kind not in ("exact", "upper_bound", "lower_bound"):
            raise ValidationError("measure-kind", f"unknown kind {self.kind!r}")
        if self.value < -1e-12:
            raise ValidationError("measure-nonnegative", f"value {self.value} is negative")
        object.__setattr__(self, "value", max(0.0, float(self.value)))


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def eof_from_concurrence(c: float) -> float:
    c = min(max(c, 0.0), 1.0)
    return binary_entropy((1.0 + math.sqrt(1.0 - c * c)) / 2.0)


def pure_state_entanglement(psi: PureState, cut: Cut) -> MeasureValue:
    """Entropy of the reduced state across the cut (exact for pure states)."""
    value = von_neumann_entropy(reduced_density(psi, cut, keep="a"))
    return MeasureValue(value=value, kind="exact", method="pure-state-entropy")


def _require_two_qubit(rho: DensityMatrix) -> None:
    if rho.dims != (2, 2):
        raise ValidationError("dims-two-qubit", f"operation requires dims (2, 2), got {rho.dims}")


def concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence via the spin-flip construction.

    lambda_i are the square roots, in decreasing order, of the eigenvalues of
    rho @ (sy x sy) rho* (sy x sy).  They equal the singular values of the
    complex symmetric matrix L^(1/2) V^T (sy x sy) V L^(1/2) built from the
    spectral decomposition rho = V L V†, which is the numerically stable form
    used here (exact for rank-1 input).
    """
    _require_two_qubit(rho)
    ev, vec = np.linalg.eigh(rho.matrix)
    root = np.sqrt(np.clip(ev, 0.0, None))
    a = (root[:, None] * vec.T) @ _SPIN_FLIP @ (vec * root[None, :])
    lam = np.zeros(4)
    sing = np.linalg.svd(a, compute_uv=False)
    lam[: sing.size] = sing
    lam = np.sort(lam)[::-1]
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(c, 0.0), 1.0))


def eof_two_qubit(rho: DensityMatrix) -> MeasureValue:
    """Closed-form two-qubit entanglement of formation."""
    return MeasureValue(
        value=eof_from_concurrence(concurrence(rho)),
        kind="exact",
        method="two-qubit-closed-form",
    )


# ---------------------------------------------------------------------------
# convex roof


@dataclass(frozen=True)
class RoofOptions:
    """Search options for the convex-roof optimizer.

    ``ensemble_size`` defaults to rank + 2.  ``tol`` is the step-size floor of
    the hill climb (also the tolerance at which the witness must reproduce
    the reported value).  Restart i draws its own child seed from ``seed``,
    so results are identical regardless of ``workers``.
    """

    ensemble_size: int | None = None
    restarts: int = 12
    max_iters: int = 4000
    tol: float = 1e-7
    seed: int = 0
    step0: float = 0.25
    grow: float = 1.2
    shrink: float = 0.92
    workers: int = 1


@dataclass(frozen=True)
class Decomposition:
    """An ensemble of pure states mixing to a target density matrix."""

    weights: np.ndarray
    components: tuple[PureState, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w <= 0):
            raise ValidationError("weights-positive", "all ensemble weights must be > 0")
        if abs(float(np.sum(w)) - 1.0) > WEIGHT_TOL:
            raise ValidationError("weights-sum", "ensemble weights must sum to 1")

    def mixture(self) -> DensityMatrix:
        mat = sum(w * c.projector() for w, c in zip(self.weights, self.components))
        return DensityMatrix(mat, self.components[0].dims)

    def average_entanglement(self, cut: Cut) -> float:
        return float(
            sum(w * pure_state_entanglement(c, cut).value for w, c in zip(self.weights, self.components))
        )


@dataclass(frozen=True)
class RoofResult:
    value: MeasureValue
    decomposition: Decomposition
    restarts_used: int


def _spectral_factor(rho: DensityMatrix) -> tuple[np.ndarray, int]:
    """Rows of B are sqrt(mu_j) e_j for the eigen-ensemble of rho."""
    ev, vec = np.linalg.eigh(rho.matrix)
    keep = ev > RANK_EIGVAL_CUTOFF
    mu = ev[keep]
    e = vec[:, keep]
    b = (e * np.sqrt(mu)).T
    return np.ascontiguousarray(b), int(mu.size)


def _permutation_indices(dims, cut: Cut) -> np.ndarray:
    d = int(np.prod(dims))
    perm = cut.side_a + cut.side_b
    return np.arange(d).reshape(dims).transpose(perm).reshape(d)


def convex_roof_eof(rho: DensityMatrix, cut: Cut, opts: RoofOptions | None = None) -> RoofResult:
    """Upper-bound the entanglement of formation by ensemble search.

    Decompositions are parametrized as W = T @ B where the rows of B form the
    eigen-ensemble of rho and T has orthonormal columns; every such W mixes
    back to rho exactly.  The search runs seeded random restarts, each refined
    by a step-adaptive random-perturbation hill climb (QR retraction).
    """
    if opts is None:
        opts = RoofOptions()
    if rho.dim > 64:
        raise ValidationError("desk-scale", f"total dimension {rho.dim} exceeds 64")
    if cut.n_subsystems != len(rho.dims):
        raise ValidationError("cut-range", "cut does not match state dims")

    b_rows, rank = _spectral_factor(rho)
    m = opts.ensemble_size if opts.ensemble_size is not None else rank + 2
    if m < rank:
        raise ValidationError("insufficient ensemble", f"insufficient ensemble: size {m} < rank {rank}")

    perm_idx = _permutation_indices(rho.dims, cut)
    b_perm = np.ascontiguousarray(b_rows[:, perm_idx])
    dim_a = side_dims(rho.dims, cut.side_a)
    dim_b = side_dims(rho.dims, cut.side_b)

    children = np.random.SeedSequence(opts.seed).spawn(opts.restarts)

    def _one_restart(child):
        rng = np.random.default_rng(child)
        g = rng.standard_normal((m, rank)) + 1j * rng.standard_normal((m, rank))
        t0, _ = np.linalg.qr(g)
        noise = rng.standard_normal((opts.max_iters, m, rank)) + 1j * rng.standard_normal(
            (opts.max_iters, m, rank)
        )
        return _kernels.refine_isometry(
            np.ascontiguousarray(t0),
            b_perm,
            dim_a,
            dim_b,
            noise,
            opts.step0,
            opts.grow,
            opts.shrink,
            opts.tol,
        )

    if opts.workers > 1:
        with ThreadPoolExecutor(max_workers=opts.workers) as pool:
            outcomes = list(pool.map(_one_restart, children))
    else:
        outcomes = [_one_restart(child) for child in children]

    best_val, best_t = outcomes[0]
    for val, t in outcomes[1:]:
        if val < best_val:
            best_val, best_t = val, t

    w = best_t @ b_rows  # original subsystem ordering
    weights = np.sum(np.abs(w) ** 2, axis=1)
    keep = weights > 1e-12
    weights = weights[keep]
    rows = w[keep]
    components = tuple(PureState(row / math.sqrt(p), rho.dims) for p, row in zip(weights, rows))
    weights = weights / float(np.sum(weights))
    decomposition = Decomposition(weights=weights, components=components)

    mix_dev = float(np.max(np.abs(decomposition.mixture().matrix - rho.matrix)))
    if mix_dev > MIX_TOL:
        raise RuntimeError(f"decomposition failed to remix to the target ({mix_dev} > {MIX_TOL})")

    value = MeasureValue(
        value=float(best_val),
        kind="upper_bound",
        method="convex-roof",
        tolerance=opts.tol,
    )
    return RoofResult(value=value, decomposition=decomposition, restarts_used=opts.restarts)


# ---------------------------------------------------------------------------
# distillable bounds


@dataclass(frozen=True)
class DistillableBounds:
    lower: MeasureValue
    upper: MeasureValue

    def __post_init__(self):
        if self.lower.value > self.upper.value + 1e-12:
            raise ValidationError("bounds-order", "lower bound exceeds upper bound")


def distillable_bounds(
    rho,
    cut: Cut,
    hashing: bool = False,
    roof_opts: RoofOptions | None = None,
) -> DistillableBounds:
    """Interval bounds on distillable entanglement.

    Pure input: both endpoints equal the reduced entropy (exact).  Mixed
    input: the upper endpoint is the best available formation value (closed
    form for two qubits, otherwise the convex-roof upper bound); the lower
    endpoint is the hashing bound max(0, S(rho_B) - S(rho)) when enabled,
    else 0.
    """
    if isinstance(rho, PureState):
        value = pure_state_entanglement(rho, cut).value
        return DistillableBounds(
            lower=MeasureValue(value, "exact", "pure-state-entropy"),
            upper=MeasureValue(value, "exact", "pure-state-entropy"),
        )

    if rho.dims == (2, 2):
        upper = eof_two_qubit(rho)
        upper = MeasureValue(upper.value, "upper_bound", upper.method)
    else:
        if roof_opts is None:
            raise ValidationError(
                "roof-opts-required", "mixed states beyond two qubits need explicit RoofOptions"
            )
        upper = convex_roof_eof(rho, cut, roof_opts).value

    if hashing:
        s_b = von_neumann_entropy(partial_trace(rho, cut, keep="b"))
        low = max(0.0, s_b - von_neumann_entropy(rho))
        lower = MeasureValue(low, "lower_bound", "hashing")
    else:
        lower = MeasureValue(0.0, "lower_bound", "trivial-zero")
    return DistillableBounds(lower=lower, upper=upper)
