import numpy as np
import pytest

from entkit import (
    Cut,
    DensityMatrix,
    PureState,
    RoofOptions,
    ValidationError,
    bell_state,
    concurrence,
    convex_roof_eof,
    distillable_bounds,
    eof_from_concurrence,
    eof_two_qubit,
    pure_state_entanglement,
    random_mixed_state,
    random_pure_state,
    tensor_product,
    von_neumann_entropy,
    werner_state,
)
from helpers import binary_entropy_oracle, separable_two_qubit

CUT01 = Cut.bipartition([0], 2)

H_TENTH = 0.4689955935892812  # binary entropy at 0.1


# ---------------------------------------------------------------------------
# pure-state entanglement


def test_bell_is_one_ebit():
    assert abs(pure_state_entanglement(bell_state(), CUT01).value - 1.0) < 1e-12


def test_product_state_is_zero():
    zero = PureState([1, 0], (2,))
    psi = tensor_product(zero, random_pure_state((2,), 5))
    assert pure_state_entanglement(psi, CUT01).value < 1e-9


def test_skewed_superposition_binary_entropy():
    amps = np.zeros(4, dtype=complex)
    amps[0] = np.sqrt(0.9)
    amps[3] = np.sqrt(0.1)
    psi = PureState(amps, (2, 2))
    got = pure_state_entanglement(psi, CUT01).value
    assert abs(got - H_TENTH) < 1e-12
    assert abs(got - binary_entropy_oracle(0.1)) < 1e-12


# ---------------------------------------------------------------------------
# concurrence and the closed form


def test_concurrence_bell():
    assert abs(concurrence(bell_state().to_density()) - 1.0) < 1e-9


def test_concurrence_maximally_mixed():
    assert concurrence(DensityMatrix(np.eye(4) / 4, (2, 2))) < 1e-9


def test_concurrence_werner_two_thirds():
    # closed form for this family: max(0, (3p - 1) / 2)
    assert abs(concurrence(werner_state(2 / 3)) - 0.5) < 1e-9


def test_concurrence_rejects_wrong_dims():
    with pytest.raises(ValidationError):
        concurrence(random_mixed_state((2, 3), 2, 0))


def test_eof_bell_and_separable_werner():
    assert abs(eof_two_qubit(bell_state().to_density()).value - 1.0) < 1e-9
    assert eof_two_qubit(werner_state(1 / 3)).value < 1e-9


def test_eof_pure_two_qubit_matches_entropy():
    # 500 random trials, closed form against the reduced entropy
    for i in range(500):
        psi = random_pure_state((2, 2), 7000 + i)
        closed = eof_two_qubit(psi.to_density()).value
        exact = pure_state_entanglement(psi, CUT01).value
        assert abs(closed - exact) < 1e-8


def test_eof_monotone_in_concurrence():
    grid = np.linspace(0.0, 1.0, 101)
    vals = [eof_from_concurrence(c) for c in grid]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert abs(vals[0]) < 1e-12 and abs(vals[-1] - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# convex roof


def test_roof_pure_state_recovers_exact():
    psi = random_pure_state((2, 2), 21)
    res = convex_roof_eof(psi.to_density(), CUT01, RoofOptions(restarts=4, max_iters=500, seed=0))
    assert abs(res.value.value - pure_state_entanglement(psi, CUT01).value) < 1e-6
    assert res.value.kind == "upper_bound"


def test_roof_separable_mixture_near_zero():
    for i in range(3):
        rho = separable_two_qubit(300 + i, 2 + i)
        res = convex_roof_eof(rho, CUT01)
        assert res.value.value <= 1e-4


def test_roof_within_closed_form_window():
    for i, rank in enumerate([2, 3, 4]):
        rho = random_mixed_state((2, 2), rank, 40 + i)
        closed = eof_two_qubit(rho).value
        res = convex_roof_eof(rho, CUT01, RoofOptions(seed=2))
        assert closed - 1e-9 <= res.value.value <= closed + 5e-3


def test_roof_insufficient_ensemble():
    rho = random_mixed_state((2, 2), 3, 1)
    with pytest.raises(ValidationError, match="insufficient ensemble"):
        convex_roof_eof(rho, CUT01, RoofOptions(ensemble_size=2, seed=0))


def test_roof_rejects_large_systems():
    rho = random_mixed_state((2, 2, 2, 2, 2, 2, 2), 1, 0)
    with pytest.raises(ValidationError, match="64"):
        convex_roof_eof(rho, Cut.bipartition([0], 7), RoofOptions(seed=0))


def test_roof_deterministic_and_worker_independent():
    rho = random_mixed_state((2, 2), 3, 77)
    a = convex_roof_eof(rho, CUT01, RoofOptions(restarts=4, max_iters=800, seed=5))
    b = convex_roof_eof(rho, CUT01, RoofOptions(restarts=4, max_iters=800, seed=5))
    c = convex_roof_eof(rho, CUT01, RoofOptions(restarts=4, max_iters=800, seed=5, workers=3))
    assert a.value.value == b.value.value == c.value.value


def test_roof_monotone_in_restarts():
    rho = random_mixed_state((2, 2), 4, 55)
    small = convex_roof_eof(rho, CUT01, RoofOptions(restarts=2, max_iters=600, seed=9))
    large = convex_roof_eof(rho, CUT01, RoofOptions(restarts=8, max_iters=600, seed=9))
    assert large.value.value <= small.value.value + 1e-15


def test_roof_decomposition_witness():
    rho = random_mixed_state((2, 2), 3, 91)
    res = convex_roof_eof(rho, CUT01, RoofOptions(seed=4))
    dec = res.decomposition
    assert abs(float(np.sum(dec.weights)) - 1.0) < 1e-9
    assert np.max(np.abs(dec.mixture().matrix - rho.matrix)) < 1e-8
    assert abs(dec.average_entanglement(CUT01) - res.value.value) < res.value.tolerance + 1e-9


def test_roof_beats_closed_form_at_werner():
    rho = werner_state(2 / 3)
    closed = eof_two_qubit(rho).value
    res = convex_roof_eof(rho, CUT01, RoofOptions(seed=6))
    assert res.value.value >= closed - 1e-9


def test_roof_handles_qubit_qutrit():
    rho = random_mixed_state((2, 3), 2, 3)
    res = convex_roof_eof(rho, Cut.bipartition([0], 2), RoofOptions(restarts=6, max_iters=1500, seed=1))
    assert 0.0 <= res.value.value <= np.log2(2) + 1e-9
    assert np.max(np.abs(res.decomposition.mixture().matrix - rho.matrix)) < 1e-8


# ---------------------------------------------------------------------------
# distillable bounds


def test_distillable_bell_tight():
    b = distillable_bounds(bell_state(), CUT01)
    assert abs(b.lower.value - 1.0) < 1e-12 and abs(b.upper.value - 1.0) < 1e-12


def test_distillable_maximally_mixed_zero():
    b = distillable_bounds(DensityMatrix(np.eye(4) / 4, (2, 2)), CUT01, hashing=True)
    assert b.lower.value < 1e-12 and b.upper.value < 1e-9


def test_distillable_werner_hashing():
    rho = werner_state(0.9)
    b = distillable_bounds(rho, CUT01, hashing=True)
    expected_lower = max(0.0, 1.0 - von_neumann_entropy(rho))
    assert abs(b.lower.value - expected_lower) < 1e-12
    assert abs(b.upper.value - eof_two_qubit(rho).value) < 1e-12
    assert b.lower.value <= b.upper.value
    assert b.lower.method == "hashing" and b.upper.kind == "upper_bound"


def test_distillable_pure_equal_bounds():
    psi = random_pure_state((2, 2), 13)
    b = distillable_bounds(psi, CUT01)
    assert b.lower.value == b.upper.value
    assert b.lower.kind == "exact"


def test_distillable_lower_never_exceeds_upper():
    for i in range(25):
        rho = random_mixed_state((2, 2), 2 + i % 3, 500 + i)
        b = distillable_bounds(rho, CUT01, hashing=True)
        assert b.lower.value <= b.upper.value + 1e-12


def test_distillable_beyond_two_qubits_needs_roof_opts():
    rho = random_mixed_state((2, 3), 2, 2)
    with pytest.raises(ValidationError):
        distillable_bounds(rho, Cut.bipartition([0], 2))
    b = distillable_bounds(
        rho, Cut.bipartition([0], 2), hashing=True,
        roof_opts=RoofOptions(restarts=6, max_iters=1500, seed=0),
    )
    assert b.lower.value <= b.upper.value + 1e-9
