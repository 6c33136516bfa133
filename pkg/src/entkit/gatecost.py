"""Certified bounds on the number of CZ gates needed to prepare a pure state.

Single-qubit gates are free; every controlled-phase (CZ) gate costs one.
Bounds are for single-copy exact preparation starting from |0..0> with no
ancilla qubits; multi-copy asymptotic rates are out of scope and the reports
say so.

Lower bound lemma: a CZ acting across a bipartition at most doubles the
Schmidt rank across that bipartition, and local gates never change it.  A
state of Schmidt rank R across a cut therefore needs at least ceil(log2 R)
CZ gates crossing that cut, and the minimal total count is the optimum of an
integer covering program over all bipartitions.

The upper bound is a verified witness circuit: recognized structures
(product factors, generalized GHZ supports, two-qubit factors) get hand
counts, everything else goes through a uniformly-controlled-rotation
disentangler.  Witnesses are always re-simulated; a witness that fails to
reproduce the target raises instead of returning silently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from . import _kernels
from .states import (
    Cut,
    PureState,
    ValidationError,
    _permuted_matrix,
    apply_unitary,
    partial_trace,
    schmidt_decompose,
    schmidt_rank,
    von_neumann_entropy,
)

CZ_MATRIX = np.diag([1.0, 1.0, 1.0, -1.0]).astype(np.complex128)
H_MATRIX = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
WITNESS_FIDELITY_TOL = 1e-6
DEFAULT_RANK_THRESHOLD = 1e-7


class SynthesisError(RuntimeError):
    """Witness construction failed; no circuit is returned in that case."""


# ---------------------------------------------------------------------------
# circuits


@dataclass(frozen=True, eq=False)
class LocalGate:
    qubit: int
    matrix: np.ndarray
    name: str = "u"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValidationError("gate-shape", "local gates must be 2x2")
        if float(np.max(np.abs(m.conj().T @ m - np.eye(2)))) > 1e-9:
            raise ValidationError("gate-unitary", f"local gate {self.name!r} is not unitary")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class CZGate:
    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise ValidationError("gate-qubits", "cz needs two distinct qubits")


@dataclass(frozen=True, eq=False)
class Circuit:
    n_qubits: int
    gates: tuple

    def __post_init__(self):
        for g in self.gates:
            qs = (g.qubit,) if isinstance(g, LocalGate) else (g.a, g.b)
            if any(q < 0 or q >= self.n_qubits for q in qs):
                raise ValidationError("gate-qubits", f"gate acts outside 0..{self.n_qubits - 1}")
        object.__setattr__(self, "gates", tuple(self.gates))

    @property
    def cz_count(self) -> int:
        return sum(1 for g in self.gates if isinstance(g, CZGate))

    def simulate(self) -> PureState:
        amps = np.zeros(2**self.n_qubits, dtype=np.complex128)
        amps[0] = 1.0
        state = PureState(amps, (2,) * self.n_qubits)
        for g in self.gates:
            if isinstance(g, LocalGate):
                state = apply_unitary(state, g.matrix, [g.qubit])
            else:
                state = apply_unitary(state, CZ_MATRIX, [g.a, g.b])
        return state

    def dagger(self) -> "Circuit":
        out = []
        for g in reversed(self.gates):
            if isinstance(g, LocalGate):
                out.append(LocalGate(g.qubit, g.matrix.conj().T, g.name))
            else:
                out.append(g)
        return Circuit(self.n_qubits, tuple(out))

    def to_json_dict(self) -> dict:
        gates = []
        for g in self.gates:
            if isinstance(g, LocalGate):
                gates.append(
                    {
                        "gate": "local",
                        "name": g.name,
                        "qubit": g.qubit,
                        "unitary": [[[float(v.real), float(v.imag)] for v in row] for row in g.matrix],
                    }
                )
            else:
                gates.append({"gate": "cz", "qubits": [g.a, g.b]})
        return {"n_qubits": self.n_qubits, "cz_count": self.cz_count, "gates": gates}


# ---------------------------------------------------------------------------
# lower bound


@dataclass(frozen=True)
class CutRequirement:
    rank: int
    min_crossings: int


@dataclass(frozen=True)
class LowerBoundResult:
    value: int
    per_cut: dict[str, CutRequirement] = field(default_factory=dict)


def _all_bipartitions(n: int):
    """Every bipartition once, as the side containing qubit 0."""
    for mask in range(2 ** (n - 1) - 1):
        side_a = [0] + [i + 1 for i in range(n - 1) if mask >> i & 1]
        yield Cut.bipartition(side_a, n)


def cut_rank_table(psi: PureState, threshold: float = DEFAULT_RANK_THRESHOLD) -> dict[str, CutRequirement]:
    table = {}
    for cut in _all_bipartitions(psi.n_subsystems):
        r = schmidt_rank(psi, cut, threshold)
        table[cut.label()] = CutRequirement(rank=r, min_crossings=(r - 1).bit_length())
    return table


def _entangled_blocks(n: int, requirements: dict[tuple, int]) -> list[set]:
    """Finest partition of the qubits generated by the zero-requirement cuts."""
    blocks = [set(range(n))]
    for side, req in requirements.items():
        if int(req) != 0:
            continue
        s = set(side)
        refined = []
        for b in blocks:
            inner, outer = b & s, b - s
            if inner and outer:
                refined.extend([inner, outer])
            else:
                refined.append(b)
        blocks = refined
    return blocks


def minimum_crossing_cover(n: int, requirements: dict[tuple, int]) -> int:
    """Minimal total count of pair edges meeting every cut's crossing demand.

    ``requirements`` maps a side-A tuple to the number of edges that must
    cross the bipartition it defines.  Solved exactly as an integer program.
    When every bipartition is listed, Steiner connectivity inequalities are
    added for each block of qubits whose mutual cuts all demand a crossing;
    they are implied by the cut constraints but close most of the LP
    integrality gap, which otherwise stalls branch and bound beyond 8 qubits.
    """
    reqs = {tuple(sorted(side)): int(r) for side, r in requirements.items() if r > 0}
    if not reqs:
        return 0
    pairs = list(itertools.combinations(range(n), 2))
    rows = []
    lbs = []
    for side, req in sorted(reqs.items()):
        in_a = set(side)
        rows.append([1.0 if ((i in in_a) != (j in in_a)) else 0.0 for (i, j) in pairs])
        lbs.append(float(req))
    if len(requirements) == 2 ** (n - 1) - 1:
        for block in _entangled_blocks(n, requirements):
            if len(block) >= 2:
                rows.append([1.0 if (i in block or j in block) else 0.0 for (i, j) in pairs])
                lbs.append(float(len(block) - 1))
    res = milp(
        c=np.ones(len(pairs)),
        constraints=LinearConstraint(np.array(rows), lb=np.array(lbs), ub=np.inf),
        integrality=np.ones(len(pairs)),
        bounds=Bounds(lb=0, ub=np.inf),
    )
    if res.status != 0:
        raise RuntimeError(f"covering program failed: {res.message}")
    x = np.round(res.x).astype(int)
    for row, lb in zip(rows, lbs):
        if float(np.dot(row, x)) < lb - 1e-9:
            raise RuntimeError("covering program returned an infeasible integer point")
    return int(x.sum())


def cz_lower_bound(psi: PureState, rank_threshold: float = DEFAULT_RANK_THRESHOLD) -> LowerBoundResult:
    """Exact optimum of the per-cut crossing covering program."""
    n = psi.n_subsystems
    if n > 10:
        raise ValidationError("desk-scale", "lower bound enumerates cuts only up to 10 qubits")
    if any(d != 2 for d in psi.dims):
        raise ValidationError("dims-qubits", "gate-cost bounds are defined for qubit registers")
    table = cut_rank_table(psi, rank_threshold)
    if n == 1 or all(req.min_crossings == 0 for req in table.values()):
        return LowerBoundResult(value=0, per_cut=table)
    requirements = {
        cut.side_a: table[cut.label()].min_crossings for cut in _all_bipartitions(n)
    }
    return LowerBoundResult(value=minimum_crossing_cover(n, requirements), per_cut=table)


# ---------------------------------------------------------------------------
# witness synthesis


def _prep_gate(vec: np.ndarray) -> np.ndarray:
    """Determinant-1 single-qubit unitary with U|0> = vec."""
    return np.array([[vec[0], -np.conj(vec[1])], [vec[1], np.conj(vec[0])]], dtype=np.complex128)


def _rotation(axis: str, theta: float) -> np.ndarray:
    if axis == "y":
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    return np.array(
        [[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]], dtype=np.complex128
    )


def _zyz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """Angles with u = Rz(alpha) Ry(beta) Rz(gamma) for u in SU(2)."""
    a, b = u[0, 0], u[0, 1]
    beta = 2.0 * math.atan2(abs(b), abs(a))
    if abs(b) < 1e-12:
        return -2.0 * float(np.angle(a)), beta, 0.0
    if abs(a) < 1e-12:
        return -2.0 * float(np.angle(-b)), beta, 0.0
    phi_a = float(np.angle(a))
    phi_b = float(np.angle(-b))
    return -(phi_a + phi_b), beta, phi_b - phi_a


def _emit_cnot(control: int, target: int, gates: list) -> None:
    gates.append(LocalGate(target, H_MATRIX, "h"))
    gates.append(CZGate(control, target))
    gates.append(LocalGate(target, H_MATRIX, "h"))


def _emit_ucr(axis: str, angles, controls, target: int, gates: list) -> None:
    """Uniformly controlled rotation: pattern x of the controls applies R(angles[x]).

    Recursive halving over the last control; branches whose angles all vanish
    are pruned, so unconditioned structure costs nothing.
    """
    if max(abs(t) for t in angles) < 1e-12:
        return
    if not controls:
        gates.append(LocalGate(target, _rotation(axis, angles[0]), f"r{axis}"))
        return
    theta0 = angles[0::2]
    theta1 = angles[1::2]
    alpha = [(t0 + t1) / 2.0 for t0, t1 in zip(theta0, theta1)]
    beta = [(t0 - t1) / 2.0 for t0, t1 in zip(theta0, theta1)]
    if max(abs(t) for t in beta) < 1e-12:
        _emit_ucr(axis, alpha, controls[:-1], target, gates)
        return
    _emit_ucr(axis, alpha, controls[:-1], target, gates)
    _emit_cnot(controls[-1], target, gates)
    _emit_ucr(axis, beta, controls[:-1], target, gates)
    _emit_cnot(controls[-1], target, gates)


def _apply_gates(state: PureState, gates) -> PureState:
    for g in gates:
        if isinstance(g, LocalGate):
            state = apply_unitary(state, g.matrix, [g.qubit])
        else:
            state = apply_unitary(state, CZ_MATRIX, [g.a, g.b])
    return state


def _disentangler_gates(psi: PureState) -> list:
    """Gates mapping psi to |0..0> exactly, one qubit at a time."""
    n = psi.n_subsystems
    state = psi
    gates: list = []
    for q in range(n - 1, 0, -1):
        tens = state.amplitudes.reshape((2,) * n)
        sub = tens[(slice(None),) * (q + 1) + (0,) * (n - 1 - q)]
        block = np.ascontiguousarray(sub).reshape(2**q, 2)
        alphas, betas, gammas = [], [], []
        for x in range(2**q):
            a0, a1 = block[x, 0], block[x, 1]
            r = math.hypot(abs(a0), abs(a1))
            if r < 1e-15:
                al = be = ga = 0.0
            else:
                u = np.array([[np.conj(a0), np.conj(a1)], [-a1, a0]], dtype=np.complex128) / r
                al, be, ga = _zyz_angles(u)
            alphas.append(al)
            betas.append(be)
            gammas.append(ga)
        step: list = []
        controls = list(range(q))
        _emit_ucr("z", gammas, controls, q, step)
        _emit_ucr("y", betas, controls, q, step)
        _emit_ucr("z", alphas, controls, q, step)
        gates.extend(step)
        state = _apply_gates(state, step)
    a0 = state.amplitudes[0]
    a1 = state.amplitudes[1 << (n - 1)] if n >= 1 else 0.0
    r = math.hypot(abs(a0), abs(a1))
    u = np.array([[np.conj(a0), np.conj(a1)], [-a1, a0]], dtype=np.complex128) / r
    gates.append(LocalGate(0, u, "u"))
    state = _apply_gates(state, [gates[-1]])
    if abs(abs(state.amplitudes[0]) - 1.0) > 1e-9:
        raise SynthesisError("disentangler failed to reach |0..0>")
    return gates


def _mutual_information_components(psi: PureState) -> list[list[int]]:
    """Connected components of the pairwise mutual-information graph."""
    n = psi.n_subsystems
    rho = psi.to_density()
    s_single = {}
    for i in range(n):
        s_single[i] = von_neumann_entropy(partial_trace(rho, Cut.bipartition([i], n), "a")) if n > 1 else 0.0
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(n), 2):
        if n == 2:
            s_pair = von_neumann_entropy(rho)
        else:
            s_pair = von_neumann_entropy(partial_trace(rho, Cut.bipartition([i, j], n), "a"))
        if s_single[i] + s_single[j] - s_pair > 1e-9:
            parent[find(i)] = find(j)
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values())


def _factor_state(psi: PureState, component: list[int]) -> PureState | None:
    """The pure factor on `component`, or None if the cut is not rank 1."""
    if len(component) == psi.n_subsystems:
        return psi
    cut = Cut.bipartition(component, psi.n_subsystems)
    mat = _permuted_matrix(psi, cut)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size > 1 and s[1] > 1e-8:
        return None
    return PureState(u[:, 0], tuple(psi.dims[i] for i in component))


def _ghz_support(amps: np.ndarray) -> tuple[int, int] | None:
    """Indices (p, q) if the support is two basis states differing in every bit."""
    nz = np.flatnonzero(np.abs(amps) > 1e-12)
    if nz.size != 2:
        return None
    p, q = int(nz[0]), int(nz[1])
    if p ^ q == amps.size - 1:
        return (p, q)
    return None


def _synthesize_factor(factor: PureState) -> list:
    """Preparation gates (local qubit indices) for one entangled factor."""
    k = factor.n_subsystems
    if k == 1:
        return [LocalGate(0, _prep_gate(factor.amplitudes), "prep")]

    support = _ghz_support(factor.amplitudes)
    if support is not None:
        p, _ = support
        alpha = factor.amplitudes[p]
        beta = factor.amplitudes[p ^ (factor.dim - 1)]
        gates: list = [LocalGate(0, _prep_gate(np.array([alpha, beta])), "prep")]
        for q in range(1, k):
            _emit_cnot(q - 1, q, gates)
        x_gate = np.array([[0, 1], [1, 0]], dtype=np.complex128)
        for q in range(k):
            if p >> (k - 1 - q) & 1:
                gates.append(LocalGate(q, x_gate, "x"))
        return gates

    if k == 2:
        dec = schmidt_decompose(factor, Cut.bipartition([0], 2))
        lam = np.zeros(2)
        lam[: dec.rank] = dec.coefficients
        u_a = np.eye(2, dtype=np.complex128)
        u_b = np.eye(2, dtype=np.complex128)
        u_a[:, : dec.rank] = dec.left_vectors.T
        u_b[:, : dec.rank] = dec.right_vectors.T
        if dec.rank == 2:
            gates = [LocalGate(0, _prep_gate(lam.astype(np.complex128)), "prep")]
            _emit_cnot(0, 1, gates)
        else:
            gates = [LocalGate(0, _prep_gate(lam.astype(np.complex128)), "prep")]
        gates.append(LocalGate(0, _complete_column_pair(u_a), "basis"))
        gates.append(LocalGate(1, _complete_column_pair(u_b), "basis"))
        return gates

    return Circuit(k, tuple(_disentangler_gates(factor))).dagger().gates


def _complete_column_pair(u: np.ndarray) -> np.ndarray:
    """Fix the second column when only one Schmidt vector was kept."""
    c0 = u[:, 0]
    c1 = u[:, 1]
    overlap = np.vdot(c0, c1)
    c1 = c1 - overlap * c0
    nrm = np.linalg.norm(c1)
    if nrm < 1e-12:
        c1 = np.array([-np.conj(c0[1]), np.conj(c0[0])])
        nrm = 1.0
    out = np.stack([c0, c1 / nrm], axis=1)
    return out


@dataclass(frozen=True)
class UpperBoundWitness:
    upper: int
    circuit: Circuit
    method: str
    fidelity: float


def cz_upper_bound(psi: PureState, strategy: str = "auto") -> UpperBoundWitness:
    """A verified preparation circuit; its CZ count is the upper bound."""
    n = psi.n_subsystems
    if any(d != 2 for d in psi.dims):
        raise ValidationError("dims-qubits", "gate-cost bounds are defined for qubit registers")
    if strategy not in ("auto", "generic"):
        raise ValidationError("strategy", f"unknown strategy {strategy!r}")
    if n > 8:
        raise ValidationError("desk-scale", "synthesis handles at most 8 qubits")

    method = "generic-disentangler"
    if strategy == "generic":
        gates = list(Circuit(n, tuple(_disentangler_gates(psi))).dagger().gates)
    else:
        components = _mutual_information_components(psi)
        factors = []
        ok = True
        for comp in components:
            factor = _factor_state(psi, comp)
            if factor is None:
                ok = False
                break
            factors.append((comp, factor))
        if not ok:
            gates = list(Circuit(n, tuple(_disentangler_gates(psi))).dagger().gates)
        else:
            gates = []
            labels = []
            for comp, factor in factors:
                local = _synthesize_factor(factor)
                for g in local:
                    if isinstance(g, LocalGate):
                        gates.append(LocalGate(comp[g.qubit], g.matrix, g.name))
                    else:
                        gates.append(CZGate(comp[g.a], comp[g.b]))
                if len(comp) == 1:
                    labels.append("product")
                elif _ghz_support(factor.amplitudes) is not None:
                    labels.append("ghz-chain")
                elif len(comp) == 2:
                    labels.append("schmidt-pair")
                else:
                    labels.append("generic-disentangler")
            method = "+".join(labels)

    circuit = Circuit(n, tuple(gates))
    produced = circuit.simulate()
    fid = float(abs(np.vdot(psi.amplitudes, produced.amplitudes)) ** 2)
    if fid < 1.0 - WITNESS_FIDELITY_TOL:
        raise SynthesisError(f"witness fidelity {fid} below 1 - {WITNESS_FIDELITY_TOL}")
    return UpperBoundWitness(upper=circuit.cz_count, circuit=circuit, method=method, fidelity=fid)


# ---------------------------------------------------------------------------
# exact search at tiny scale


@dataclass(frozen=True)
class SearchOptions:
    restarts: int = 10
    max_sweeps: int = 80
    sweep_tol: float = 1e-10
    window: float = math.pi
    seed: int = 0
    fidelity_target: float = 1.0 - 1e-6


@dataclass(frozen=True)
class SearchResult:
    min_cz: int | None
    fidelity: float | None
    certified: bool
    lower_bound: int
    skeleton: tuple | None
    diagnostics: dict


def exact_min_cz_search(psi: PureState, max_k: int, opts: SearchOptions | None = None) -> SearchResult:
    """Smallest CZ count whose best circuit reaches the fidelity target.

    Enumerates CZ skeletons of length k = lower..max_k and optimizes the
    interleaved single-qubit layers (4 angles each) by seeded random restarts
    plus golden-section coordinate descent.  The result is certified exact
    when it matches the covering lower bound; otherwise it is only a
    numerical upper bound on the true minimum.
    """
    if opts is None:
        opts = SearchOptions()
    n = psi.n_subsystems
    if n > 3:
        raise ValidationError("desk-scale", "exact search handles at most 3 qubits")
    if max_k > 4:
        raise ValidationError("desk-scale", "exact search handles at most 4 CZ gates")
    lower = cz_lower_bound(psi).value
    target = np.ascontiguousarray(psi.amplitudes, dtype=np.complex128)
    pairs = list(itertools.combinations(range(n), 2))
    best_per_k: dict[int, float] = {}

    for k in range(lower, max_k + 1):
        skeletons = list(itertools.product(pairs, repeat=k)) if k else [()]
        for si, skel in enumerate(skeletons):
            czs = np.array(skel, dtype=np.int64).reshape(k, 2)
            for ridx in range(opts.restarts):
                ss = np.random.SeedSequence(entropy=opts.seed, spawn_key=(k, si, ridx))
                rng = np.random.default_rng(ss)
                angles0 = rng.uniform(0.0, 2.0 * math.pi, 4 * n * (k + 1))
                fid, _ = _kernels.golden_descent(
                    angles0,
                    czs,
                    n,
                    target,
                    opts.max_sweeps,
                    opts.sweep_tol,
                    opts.window,
                    opts.fidelity_target,
                )
                best_per_k[k] = max(best_per_k.get(k, 0.0), fid)
                if fid >= opts.fidelity_target:
                    return SearchResult(
                        min_cz=k,
                        fidelity=fid,
                        certified=(k == lower),
                        lower_bound=lower,
                        skeleton=skel,
                        diagnostics={"best_fidelity_per_k": best_per_k},
                    )
    return SearchResult(
        min_cz=None,
        fidelity=None,
        certified=False,
        lower_bound=lower,
        skeleton=None,
        diagnostics={"best_fidelity_per_k": best_per_k, "max_k": max_k, "reason": "budget exceeded"},
    )


# ---------------------------------------------------------------------------
# combined report


@dataclass(frozen=True)
class CZBoundReport:
    label: str
    lower: int
    upper: int
    witness: Circuit
    witness_fidelity: float
    per_cut: dict[str, CutRequirement]
    method: str
    notes: tuple[str, ...]

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValidationError("bounds-order", "lower bound exceeds upper bound")
        if self.witness.cz_count != self.upper:
            raise ValidationError("witness-cost", "witness cost must equal the reported upper bound")


REPORT_NOTES = (
    "bounds count CZ gates for single-copy exact preparation; asymptotic multi-copy rates are not modeled",
    "ancilla-assisted preparation is excluded from both bounds",
)


def cz_bound_report(
    psi: PureState,
    label: str = "state",
    strategy: str = "auto",
    rank_threshold: float = DEFAULT_RANK_THRESHOLD,
) -> CZBoundReport:
    low = cz_lower_bound(psi, rank_threshold)
    up = cz_upper_bound(psi, strategy)
    return CZBoundReport(
        label=label,
        lower=low.value,
        upper=up.upper,
        witness=up.circuit,
        witness_fidelity=up.fidelity,
        per_cut=low.per_cut,
        method=up.method,
        notes=REPORT_NOTES,
    )
