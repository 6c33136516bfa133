import numpy as np
import pytest

from entkit import (
    Cut,
    DensityMatrix,
    PureState,
    ValidationError,
    apply_unitary,
    bell_state,
    fidelity,
    ghz_state,
    named_state,
    partial_trace,
    random_mixed_state,
    random_pure_state,
    reduced_density,
    schmidt_decompose,
    schmidt_rank,
    tensor_product,
    von_neumann_entropy,
    werner_state,
)
from entkit.states import completion_unitary
from helpers import haar_unitary

H_ONE_EIGHTH = 0.5435644431995964  # -sum p log2 p for diag(7/8, 1/8)


def ket(*bits):
    amps = np.zeros(2 ** len(bits), dtype=complex)
    idx = 0
    for b in bits:
        idx = idx * 2 + b
    amps[idx] = 1.0
    return PureState(amps, (2,) * len(bits))


# ---------------------------------------------------------------------------
# construction and validation


def test_pure_state_rejects_bad_norm():
    with pytest.raises(ValidationError) as err:
        PureState([1.0, 1.0], (2,))
    assert err.value.invariant == "norm"


def test_pure_state_rejects_bad_dims():
    with pytest.raises(ValidationError):
        PureState([1.0, 0.0], ())
    with pytest.raises(ValidationError):
        PureState([1.0, 0.0], (1, 2))
    with pytest.raises(ValidationError):
        PureState([1.0, 0.0, 0.0], (2,))


def test_density_matrix_rejects_non_hermitian():
    mat = np.array([[0.5, 0.5], [0.0, 0.5]])
    with pytest.raises(ValidationError) as err:
        DensityMatrix(mat, (2,))
    assert err.value.invariant == "hermitian"


def test_density_matrix_rejects_negative_eigenvalue():
    mat = np.array([[1.5, 0.0], [0.0, -0.5]])
    with pytest.raises(ValidationError) as err:
        DensityMatrix(mat, (2,))
    assert err.value.invariant == "psd"


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(ValidationError) as err:
        DensityMatrix(np.eye(2), (2,))
    assert err.value.invariant == "trace"


def test_cut_validation():
    with pytest.raises(ValidationError):
        Cut((), (0, 1))
    with pytest.raises(ValidationError):
        Cut((0,), (0, 1))
    with pytest.raises(ValidationError):
        Cut.bipartition([5], 2)
    cut = Cut.from_string("0,2/1", 3)
    assert cut.side_a == (0, 2) and cut.side_b == (1,)
    with pytest.raises(ValidationError):
        Cut.from_string("0/1/2", 3)
    with pytest.raises(ValidationError):
        Cut.from_string("0/2", 3)


# ---------------------------------------------------------------------------
# tensor product


def test_tensor_product_basis_states():
    out = tensor_product(ket(0), ket(1))
    assert out.dims == (2, 2)
    np.testing.assert_allclose(out.amplitudes, [0, 1, 0, 0], atol=1e-15)


def test_tensor_product_preserves_trace():
    rho = random_mixed_state((2,), 2, 1)
    out = tensor_product(rho, ket(0).to_density())
    assert abs(np.trace(out.matrix) - 1) < 1e-12


def test_tensor_product_maximally_mixed():
    half = DensityMatrix(np.eye(2) / 2, (2,))
    out = tensor_product(half, half)
    np.testing.assert_allclose(out.matrix, np.eye(4) / 4, atol=1e-15)
    assert out.dims == (2, 2)


def test_tensor_product_kind_mismatch():
    with pytest.raises(ValidationError, match="kind mismatch"):
        tensor_product(ket(0), ket(0).to_density())


# ---------------------------------------------------------------------------
# partial trace


def test_partial_trace_bell_is_maximally_mixed():
    rho = bell_state().to_density()
    red = partial_trace(rho, Cut.bipartition([0], 2), keep="a")
    np.testing.assert_allclose(red.matrix, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_product():
    rho_b = random_mixed_state((2,), 2, 3)
    joint = tensor_product(ket(0).to_density(), rho_b)
    red = partial_trace(joint, Cut.bipartition([0], 2), keep="a")
    np.testing.assert_allclose(red.matrix, ket(0).projector(), atol=1e-12)


def test_partial_trace_matches_schmidt_reduction():
    # two independent code paths: einsum partial trace vs SVD-weighted projectors
    psi = random_pure_state((2, 2), 11)
    cut = Cut.bipartition([0], 2)
    red = partial_trace(psi.to_density(), cut, keep="a")
    dec = schmidt_decompose(psi, cut)
    rebuilt = sum(
        c**2 * np.outer(v, v.conj()) for c, v in zip(dec.coefficients, dec.left_vectors)
    )
    assert np.max(np.abs(red.matrix - rebuilt)) < 1e-10


def test_partial_trace_preserves_trace_and_psd():
    rng = np.random.default_rng(5)
    for _ in range(20):
        rho = random_mixed_state((2, 2, 2), 3, rng.integers(0, 2**31))
        red = partial_trace(rho, Cut.bipartition([0, 2], 3), keep="a")
        assert abs(np.trace(red.matrix) - 1) < 1e-12
        assert np.linalg.eigvalsh(red.matrix)[0] > -1e-9


def test_partial_trace_invalid_cut():
    rho = bell_state().to_density()
    with pytest.raises(ValidationError):
        partial_trace(rho, Cut.bipartition([0], 3), keep="a")


# ---------------------------------------------------------------------------
# schmidt decomposition


def test_schmidt_bell_coefficients():
    dec = schmidt_decompose(bell_state(), Cut.bipartition([0], 2))
    np.testing.assert_allclose(dec.coefficients, [1 / np.sqrt(2)] * 2, atol=1e-12)


def test_schmidt_product_state_single_coefficient():
    plus = PureState(np.array([1, 1]) / np.sqrt(2), (2,))
    psi = tensor_product(ket(0), plus)
    dec = schmidt_decompose(psi, Cut.bipartition([0], 2))
    assert dec.rank == 1
    np.testing.assert_allclose(dec.coefficients, [1.0], atol=1e-12)


def test_schmidt_squared_coefficients_match_eigenvalues():
    psi = random_pure_state((2, 2, 2), 23)
    cut = Cut.bipartition([0], 3)
    dec = schmidt_decompose(psi, cut)
    ev = np.sort(np.linalg.eigvalsh(reduced_density(psi, cut, "a").matrix))[::-1]
    padded = np.zeros_like(ev)
    padded[: dec.rank] = dec.coefficients**2
    assert np.max(np.abs(padded - ev)) < 1e-10


def test_schmidt_reconstruction():
    rng = np.random.default_rng(7)
    for dims, side in [((2, 2), [0]), ((2, 3), [1]), ((2, 2, 2), [0, 2]), ((2, 2, 3), [1])]:
        psi = random_pure_state(dims, rng.integers(0, 2**31))
        dec = schmidt_decompose(psi, Cut.bipartition(side, len(dims)))
        rebuilt = dec.reconstruct()
        assert abs(np.vdot(psi.amplitudes, rebuilt.amplitudes)) ** 2 > 1 - 1e-10


def test_schmidt_invariant_under_local_unitaries():
    rng = np.random.default_rng(13)
    psi = random_pure_state((2, 2), 4)
    cut = Cut.bipartition([0], 2)
    base = schmidt_decompose(psi, cut).coefficients
    for _ in range(25):
        u = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
        rotated = PureState(u @ psi.amplitudes, (2, 2))
        coeffs = schmidt_decompose(rotated, cut).coefficients
        assert np.max(np.abs(coeffs - base)) < 1e-9


def test_schmidt_rank_threshold():
    psi = ghz_state(3)
    assert schmidt_rank(psi, Cut.bipartition([0], 3)) == 2


# ---------------------------------------------------------------------------
# entropy


def test_entropy_maximally_mixed():
    assert abs(von_neumann_entropy(DensityMatrix(np.eye(2) / 2, (2,))) - 1.0) < 1e-12


def test_entropy_pure_projector():
    assert von_neumann_entropy(random_pure_state((2, 2), 2).to_density()) < 1e-9


def test_entropy_binary_diagonal():
    rho = DensityMatrix(np.diag([7 / 8, 1 / 8]), (2,))
    assert abs(von_neumann_entropy(rho) - H_ONE_EIGHTH) < 1e-12


def test_entropy_symmetry_across_cut():
    rng = np.random.default_rng(17)
    for dims, side in [((2, 2), [0]), ((2, 3), [0]), ((2, 2, 2), [1])]:
        for _ in range(10):
            psi = random_pure_state(dims, rng.integers(0, 2**31))
            cut = Cut.bipartition(side, len(dims))
            sa = von_neumann_entropy(reduced_density(psi, cut, "a"))
            sb = von_neumann_entropy(reduced_density(psi, cut, "b"))
            assert abs(sa - sb) < 1e-9


# ---------------------------------------------------------------------------
# fidelity


def test_fidelity_orthogonal_and_overlap():
    assert fidelity(ket(0), ket(1)) < 1e-12
    plus = PureState(np.array([1, 1]) / np.sqrt(2), (2,))
    assert abs(fidelity(ket(0), plus) - 0.5) < 1e-10


def test_fidelity_self_is_one():
    rho = random_mixed_state((2, 2), 3, 9)
    assert fidelity(rho, rho) > 1 - 1e-10


def test_fidelity_symmetric_and_pure_overlap():
    rng = np.random.default_rng(31)
    for _ in range(10):
        rho = random_mixed_state((2, 2), 2, rng.integers(0, 2**31))
        sig = random_mixed_state((2, 2), 3, rng.integers(0, 2**31))
        assert abs(fidelity(rho, sig) - fidelity(sig, rho)) < 1e-10
        a = random_pure_state((2, 2), rng.integers(0, 2**31))
        b = random_pure_state((2, 2), rng.integers(0, 2**31))
        assert abs(fidelity(a, b) - abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2) < 1e-10


def test_fidelity_dim_mismatch():
    with pytest.raises(ValidationError):
        fidelity(ket(0), bell_state())


# ---------------------------------------------------------------------------
# named states


def test_bell_amplitudes():
    np.testing.assert_allclose(
        bell_state().amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-15
    )


def test_werner_extremes():
    np.testing.assert_allclose(werner_state(1.0).matrix, bell_state().projector(), atol=1e-12)
    np.testing.assert_allclose(werner_state(0.0).matrix, np.eye(4) / 4, atol=1e-12)


def test_random_states_deterministic():
    a = random_pure_state((2, 2), 7)
    b = random_pure_state((2, 2), 7)
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
    m1 = random_mixed_state((2, 2), 2, 7)
    m2 = random_mixed_state((2, 2), 2, 7)
    np.testing.assert_array_equal(m1.matrix, m2.matrix)


def test_named_state_parsing():
    assert named_state("ghz:3").dims == (2, 2, 2)
    assert named_state("werner:0.5").dims == (2, 2)
    assert named_state("random_pure:2,3:5").dims == (2, 3)
    assert named_state("random_mixed:2,2:2:5").dims == (2, 2)
    with pytest.raises(ValidationError):
        named_state("nope")
    with pytest.raises(ValidationError):
        named_state("werner:1.5")
    with pytest.raises(ValidationError):
        named_state("ghz:1")


# ---------------------------------------------------------------------------
# gate application helpers


def test_apply_unitary_matches_kron():
    rng = np.random.default_rng(3)
    psi = random_pure_state((2, 2, 2), 6)
    u = haar_unitary(2, rng)
    out = apply_unitary(psi, u, [1])
    expected = np.kron(np.kron(np.eye(2), u), np.eye(2)) @ psi.amplitudes
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-12)


def test_apply_unitary_two_qubit_ordering():
    rng = np.random.default_rng(4)
    psi = random_pure_state((2, 2), 8)
    u = haar_unitary(4, rng)
    out = apply_unitary(psi, u, [0, 1])
    np.testing.assert_allclose(out.amplitudes, u @ psi.amplitudes, atol=1e-12)
    # reversed target order permutes the gate basis
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    out_rev = apply_unitary(psi, u, [1, 0])
    np.testing.assert_allclose(out_rev.amplitudes, swap @ u @ swap @ psi.amplitudes, atol=1e-12)


def test_completion_unitary():
    rng = np.random.default_rng(12)
    for d in (2, 4):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
        u = completion_unitary(v)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(d), atol=1e-10)
        np.testing.assert_allclose(u[:, 0], v, atol=1e-12)
