"""Validated quantum states and the linear-algebra primitives built on them.

Conventions used throughout the package:

* Subsystem 0 indexes the most significant digit of a flattened index
  (big-endian), so the two-qubit basis order is 00, 01, 10, 11.
* Entropies are base 2; a Bell pair carries exactly one ebit.
* ``fidelity`` uses the squared (transition-probability) convention
  F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))**2, so pure-state
  fidelity equals |<psi|phi>|**2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-9
HERMITICITY_TOL = 1e-9
TRACE_TOL = 1e-9
PSD_EIGENVALUE_FLOOR = -1e-9
ENTROPY_EIGENVALUE_CUTOFF = 1e-12
SCHMIDT_COEFF_CUTOFF = 1e-12


class ValidationError(ValueError):
    """An input violates one of the documented state invariants.

    ``invariant`` carries a short machine-readable name of the violated
    invariant so callers (notably the CLI) can report it.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) == 0:
        raise ValidationError("dims-nonempty", "dims must be a nonempty list")
    if any(d < 2 for d in dims):
        raise ValidationError("dims-min-2", f"every subsystem dimension must be >= 2, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized state vector over an explicit list of subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, amplitudes, dims):
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.ndim != 1:
            raise ValidationError("vector-shape", "amplitudes must be a 1-D vector")
        dims = _check_dims(dims)
        if int(np.prod(dims)) != amps.shape[0]:
            raise ValidationError(
                "dims-product",
                f"product of dims {dims} does not equal vector length {amps.shape[0]}",
            )
        nrm2 = float(np.vdot(amps, amps).real)
        if abs(nrm2 - 1.0) > NORM_TOL:
            raise ValidationError("norm", f"squared norm {nrm2} deviates from 1 by more than {NORM_TOL}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.projector(), self.dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, positive-semidefinite, unit-trace matrix with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, matrix, dims):
        mat = np.asarray(matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValidationError("matrix-shape", "matrix must be square")
        dims = _check_dims(dims)
        if int(np.prod(dims)) != mat.shape[0]:
            raise ValidationError(
                "dims-product",
                f"product of dims {dims} does not equal matrix size {mat.shape[0]}",
            )
        herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_dev > HERMITICITY_TOL:
            raise ValidationError("hermitian", f"max deviation from Hermiticity {herm_dev} exceeds {HERMITICITY_TOL}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError("trace", f"trace {tr} deviates from 1 by more than {TRACE_TOL}")
        min_eig = float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0])
        if min_eig < PSD_EIGENVALUE_FLOOR:
            raise ValidationError("psd", f"minimum eigenvalue {min_eig} below floor {PSD_EIGENVALUE_FLOOR}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True)
class Cut:
    """A bipartition of the subsystem indices into side A and side B."""

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]

    def __post_init__(self):
        a = tuple(sorted(int(i) for i in self.side_a))
        b = tuple(sorted(int(i) for i in self.side_b))
        if not a or not b:
            raise ValidationError("cut-nonempty", "both sides of a cut must be nonempty")
        n = len(a) + len(b)
        if set(a) & set(b):
            raise ValidationError("cut-disjoint", "cut sides must be disjoint")
        if set(a) | set(b) != set(range(n)):
            raise ValidationError("cut-cover", f"cut sides must cover indices 0..{n - 1} exactly")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @property
    def n_subsystems(self) -> int:
        return len(self.side_a) + len(self.side_b)

    @classmethod
    def bipartition(cls, side_a, n_subsystems: int) -> "Cut":
        a = sorted(set(int(i) for i in side_a))
        if any(i < 0 or i >= n_subsystems for i in a):
            raise ValidationError("cut-range", f"cut indices must lie in 0..{n_subsystems - 1}")
        b = [i for i in range(n_subsystems) if i not in a]
        return cls(tuple(a), tuple(b))

    @classmethod
    def from_string(cls, spec: str, n_subsystems: int) -> "Cut":
        """Parse ``"0,1/2,3"``; indices left of the single ``/`` form side A."""
        if spec.count("/") != 1 or " " in spec:
            raise ValidationError("cut-syntax", f"cut spec {spec!r} must be 'i,j,../k,..' with one '/'")
        left, right = spec.split("/")
        try:
            a = [int(tok) for tok in left.split(",") if tok != ""]
            b = [int(tok) for tok in right.split(",") if tok != ""]
        except ValueError as exc:
            raise ValidationError("cut-syntax", f"cut spec {spec!r}: {exc}") from exc
        cut = cls.bipartition(a, n_subsystems)
        if tuple(sorted(b)) != cut.side_b:
            raise ValidationError("cut-cover", f"cut spec {spec!r} does not list the complement on the right")
        return cut

    def label(self) -> str:
        return ",".join(map(str, self.side_a)) + "|" + ",".join(map(str, self.side_b))


def _validate_cut_for(state, cut: Cut) -> None:
    if cut.n_subsystems != len(state.dims):
        raise ValidationError(
            "cut-range", f"cut over {cut.n_subsystems} subsystems applied to dims {state.dims}"
        )


def side_dims(dims, indices) -> int:
    out = 1
    for i in indices:
        out *= dims[i]
    return out


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Bi-orthogonal expansion of a pure state across a cut.

    ``coefficients`` are real, descending, and their squares sum to one.
    ``left_vectors[k]`` / ``right_vectors[k]`` live on side A / side B in the
    subsystem ordering given by the (sorted) cut sides.
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    cut: Cut
    dims: tuple[int, ...]

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        if np.any(np.diff(coeffs) > 1e-12) or np.any(coeffs < 0):
            raise ValidationError("schmidt-order", "coefficients must be descending and nonnegative")
        if abs(float(np.sum(coeffs**2)) - 1.0) > NORM_TOL:
            raise ValidationError("schmidt-norm", "squared coefficients must sum to 1")
        for vecs in (self.left_vectors, self.right_vectors):
            gram = vecs.conj() @ vecs.T
            if float(np.max(np.abs(gram - np.eye(len(coeffs))))) > NORM_TOL:
                raise ValidationError("schmidt-orthonormal", "basis vectors must be orthonormal")

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def entropy(self) -> float:
        p = self.coefficients**2
        p = p[p > ENTROPY_EIGENVALUE_CUTOFF]
        return float(-np.sum(p * np.log2(p))) if p.size else 0.0

    def reconstruct(self) -> PureState:
        d_a = side_dims(self.dims, self.cut.side_a)
        d_b = side_dims(self.dims, self.cut.side_b)
        mat = np.einsum("k,ka,kb->ab", self.coefficients, self.left_vectors, self.right_vectors)
        perm = self.cut.side_a + self.cut.side_b
        perm_dims = [self.dims[i] for i in perm]
        inverse = np.argsort(perm)
        amps = mat.reshape(perm_dims).transpose(inverse).reshape(d_a * d_b)
        return PureState(amps, self.dims)


# ---------------------------------------------------------------------------
# operations


def tensor_product(a, b):
    """Kronecker product of two states of the same kind; dims concatenate."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix), a.dims + b.dims)
    raise ValidationError(
        "kind mismatch",
        "kind mismatch: tensor_product needs two states of the same kind; promote with .to_density() first",
    )


def _permuted_matrix(psi: PureState, cut: Cut) -> np.ndarray:
    """Amplitudes as a (dim_A, dim_B) matrix with side-A subsystems first."""
    perm = cut.side_a + cut.side_b
    d_a = side_dims(psi.dims, cut.side_a)
    d_b = side_dims(psi.dims, cut.side_b)
    return psi.amplitudes.reshape(psi.dims).transpose(perm).reshape(d_a, d_b)


def partial_trace(rho: DensityMatrix, cut: Cut, keep: str = "a") -> DensityMatrix:
    """Trace out one side of the cut, keeping ``keep`` ("a" or "b")."""
    _validate_cut_for(rho, cut)
    if keep not in ("a", "b"):
        raise ValidationError("keep-side", "keep must be 'a' or 'b'")
    kept = cut.side_a if keep == "a" else cut.side_b
    traced = cut.side_b if keep == "a" else cut.side_a
    n = rho.n_subsystems
    perm = list(kept) + list(traced)
    d_k = side_dims(rho.dims, kept)
    d_t = side_dims(rho.dims, traced)
    tens = rho.matrix.reshape(rho.dims + rho.dims)
    tens = tens.transpose(perm + [p + n for p in perm]).reshape(d_k, d_t, d_k, d_t)
    reduced = np.einsum("ijkj->ik", tens)
    return DensityMatrix(reduced, tuple(rho.dims[i] for i in kept))


def reduced_density(psi: PureState, cut: Cut, keep: str = "a") -> DensityMatrix:
    """Reduced density matrix of a pure state (via the outer product of blocks)."""
    _validate_cut_for(psi, cut)
    mat = _permuted_matrix(psi, cut)
    if keep == "a":
        red = mat @ mat.conj().T
    elif keep == "b":
        red = mat.T @ mat.conj()
    else:
        raise ValidationError("keep-side", "keep must be 'a' or 'b'")
    kept = cut.side_a if keep == "a" else cut.side_b
    return DensityMatrix(red, tuple(psi.dims[i] for i in kept))


def schmidt_decompose(psi: PureState, cut: Cut) -> SchmidtDecomposition:
    _validate_cut_for(psi, cut)
    mat = _permuted_matrix(psi, cut)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    keep = max(1, int(np.sum(s > SCHMIDT_COEFF_CUTOFF)))
    return SchmidtDecomposition(
        coefficients=s[:keep].copy(),
        left_vectors=u[:, :keep].T.copy(),
        right_vectors=vh[:keep].copy(),
        cut=cut,
        dims=psi.dims,
    )


def schmidt_rank(psi: PureState, cut: Cut, threshold: float = 1e-7) -> int:
    """Number of singular values >= threshold across the cut."""
    _validate_cut_for(psi, cut)
    s = np.linalg.svd(_permuted_matrix(psi, cut), compute_uv=False)
    return int(np.sum(s >= threshold))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Base-2 von Neumann entropy; eigenvalues below 1e-12 contribute zero."""
    ev = rho.eigenvalues()
    ev = ev[ev > ENTROPY_EIGENVALUE_CUTOFF]
    return float(-np.sum(ev * np.log2(ev))) if ev.size else 0.0


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    ev, vec = np.linalg.eigh(mat)
    ev = np.clip(ev, 0.0, None)
    return (vec * np.sqrt(ev)) @ vec.conj().T


def _as_density(state) -> DensityMatrix:
    return state.to_density() if isinstance(state, PureState) else state


def fidelity(rho, sigma) -> float:
    """Squared-convention fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))**2.

    Evaluated as the squared nuclear norm of sqrt(rho) @ sqrt(sigma), which
    has the same value and is numerically symmetric in its arguments.
    """
    rho = _as_density(rho)
    sigma = _as_density(sigma)
    if rho.dims != sigma.dims:
        raise ValidationError("dims-match", f"fidelity requires equal dims, got {rho.dims} vs {sigma.dims}")
    cross = _psd_sqrt(rho.matrix) @ _psd_sqrt(sigma.matrix)
    val = float(np.sum(np.linalg.svd(cross, compute_uv=False)) ** 2)
    return min(val, 1.0)


def apply_unitary(psi: PureState, u: np.ndarray, targets) -> PureState:
    """Apply a unitary acting on the listed subsystems (in the given order)."""
    targets = list(targets)
    n = psi.n_subsystems
    if len(set(targets)) != len(targets) or any(t < 0 or t >= n for t in targets):
        raise ValidationError("targets", f"invalid target subsystems {targets}")
    d_t = side_dims(psi.dims, targets)
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (d_t, d_t):
        raise ValidationError("gate-shape", f"gate shape {u.shape} does not match targets of dim {d_t}")
    rest = [i for i in range(n) if i not in targets]
    perm = targets + rest
    tens = psi.amplitudes.reshape(psi.dims).transpose(perm).reshape(d_t, -1)
    tens = u @ tens
    perm_dims = [psi.dims[i] for i in perm]
    amps = tens.reshape(perm_dims).transpose(np.argsort(perm)).reshape(psi.dim)
    return PureState(amps, psi.dims)


def completion_unitary(first_column: np.ndarray) -> np.ndarray:
    """A deterministic unitary whose first column is the given unit vector."""
    v = np.asarray(first_column, dtype=np.complex128).reshape(-1)
    d = v.shape[0]
    basis = np.eye(d, dtype=np.complex128)
    cols = [v]
    for k in range(d):
        w = basis[:, k]
        for c in cols:
            w = w - c * np.vdot(c, w)
        nrm = np.linalg.norm(w)
        if nrm > 1e-8:
            cols.append(w / nrm)
        if len(cols) == d:
            break
    return np.stack(cols, axis=1)


# ---------------------------------------------------------------------------
# named states

BELL_AMPLITUDES = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2.0)


def bell_state() -> PureState:
    return PureState(BELL_AMPLITUDES, (2, 2))


def ghz_state(n: int) -> PureState:
    if n < 2:
        raise ValidationError("parameter-range", "ghz requires n >= 2")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return PureState(amps, (2,) * n)


def werner_state(p: float) -> DensityMatrix:
    if not 0.0 <= p <= 1.0:
        raise ValidationError("parameter-range", "werner requires 0 <= p <= 1")
    mat = p * bell_state().projector() + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix(mat, (2, 2))


def random_pure_state(dims, seed) -> PureState:
    dims = _check_dims(dims)
    rng = np.random.default_rng(seed)
    d = int(np.prod(dims))
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v), dims)


def random_mixed_state(dims, rank: int, seed) -> DensityMatrix:
    dims = _check_dims(dims)
    d = int(np.prod(dims))
    if rank < 1 or rank > d:
        raise ValidationError("parameter-range", f"rank must be in 1..{d}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    mat = g @ g.conj().T
    return DensityMatrix(mat / np.trace(mat), dims)


def _parse_dims(token: str) -> tuple[int, ...]:
    return tuple(int(t) for t in token.split(",") if t != "")


def named_state(spec: str):
    """Build a state from a name spec.

    Supported: ``bell``, ``ghz:n``, ``werner:p``, ``random_pure:dims:seed``,
    ``random_mixed:dims:rank:seed`` where ``dims`` is comma-separated, e.g.
    ``random_pure:2,2:7``.
    """
    parts = spec.split(":")
    name = parts[0]
    try:
        if name == "bell" and len(parts) == 1:
            return bell_state()
        if name == "ghz" and len(parts) == 2:
            return ghz_state(int(parts[1]))
        if name == "werner" and len(parts) == 2:
            return werner_state(float(parts[1]))
        if name == "random_pure" and len(parts) == 3:
            return random_pure_state(_parse_dims(parts[1]), int(parts[2]))
        if name == "random_mixed" and len(parts) == 4:
            return random_mixed_state(_parse_dims(parts[1]), int(parts[2]), int(parts[3]))
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError("named-state", f"cannot parse state spec {spec!r}: {exc}") from exc
    raise ValidationError("named-state", f"unknown state spec {spec!r}")
