import numpy as np
import pytest

from entkit import (
    ChannelMatrix,
    PureState,
    ValidationError,
    bell_state,
    channel_from_apply,
    channel_process_fidelity,
    fidelity,
    nonlocal_cz,
    nonlocal_cz_branches,
    nonlocal_cz_channel,
    random_pure_state,
    reduction_demo,
    teleport,
    teleport_branches,
    teleport_channel,
)
from entkit.locc import (
    ALICE,
    BOB,
    CZ_GATE,
    LoccViolation,
    LocalUnitaryStep,
    MeasurementStep,
    ResourceStep,
    bob_output_density,
    compose_apply,
    creation_demo_branches,
    nonlocal_cz_apply,
    shared_pair_density,
    teleport_apply,
    verify_locc_structure,
)

PLUS = PureState(np.array([1, 1]) / np.sqrt(2), (2,))


# ---------------------------------------------------------------------------
# teleportation


def test_teleport_plus_state_all_branches():
    for tr in teleport_branches(PLUS):
        assert fidelity(bob_output_density(tr), PLUS.to_density()) > 1 - 1e-10


def test_teleport_random_input_branches_and_probabilities():
    psi = random_pure_state((2,), 3)
    branches = teleport_branches(psi)
    assert len(branches) == 4
    total = sum(tr.branch_probability for tr in branches)
    assert abs(total - 1.0) < 1e-10
    for tr in branches:
        assert abs(tr.branch_probability - 0.25) < 1e-10
        assert fidelity(bob_output_density(tr), psi.to_density()) > 1 - 1e-10


def test_teleport_resource_totals():
    tr = teleport(random_pure_state((2,), 5), seed=0)
    t = tr.resource_totals
    assert (t.ebits_consumed, t.cbits_alice_to_bob, t.cbits_bob_to_alice, t.qubits_transmitted) == (1, 2, 0, 0)


def test_teleport_sampling_deterministic():
    psi = random_pure_state((2,), 9)
    a = teleport(psi, seed=42)
    b = teleport(psi, seed=42)
    assert a.outcomes == b.outcomes
    np.testing.assert_array_equal(a.final_state.amplitudes, b.final_state.amplitudes)


def test_teleport_requires_one_qubit():
    with pytest.raises(ValidationError):
        teleport(bell_state(), seed=0)


def test_teleport_channel_is_identity():
    chan = teleport_channel()
    assert channel_process_fidelity(chan, np.eye(2)) > 1 - 1e-10


def test_teleport_identity_on_complete_input_set():
    # |0>, |1>, |+>, |+i> each come out exactly, branch by branch
    inputs = [
        PureState([1, 0], (2,)),
        PureState([0, 1], (2,)),
        PLUS,
        PureState(np.array([1, 1j]) / np.sqrt(2), (2,)),
    ]
    for psi in inputs:
        for p, out in teleport_apply(psi):
            assert abs(p - 0.25) < 1e-12
            assert abs(np.vdot(psi.amplitudes, out.amplitudes)) ** 2 > 1 - 1e-10


# ---------------------------------------------------------------------------
# nonlocal controlled-phase


def test_nonlocal_cz_plus_plus_oracle():
    plus_plus = PureState(np.full(4, 0.5, dtype=complex), (2, 2))
    expected = CZ_GATE @ plus_plus.amplitudes
    for p, out in nonlocal_cz_apply(plus_plus):
        assert abs(np.vdot(expected, out.amplitudes)) ** 2 > 1 - 1e-10


def test_nonlocal_cz_control_off_is_identity():
    psi_t = random_pure_state((2,), 8)
    joint = PureState(np.kron([1, 0], psi_t.amplitudes), (2, 2))
    for _, out in nonlocal_cz_apply(joint):
        assert abs(np.vdot(joint.amplitudes, out.amplitudes)) ** 2 > 1 - 1e-10


def test_nonlocal_cz_resources():
    tr = nonlocal_cz(random_pure_state((2, 2), 4), seed=1)
    t = tr.resource_totals
    assert (t.ebits_consumed, t.cbits_alice_to_bob, t.cbits_bob_to_alice, t.qubits_transmitted) == (1, 1, 1, 0)
    assert abs(sum(b.branch_probability for b in nonlocal_cz_branches(random_pure_state((2, 2), 4))) - 1) < 1e-10


def test_nonlocal_cz_channel_matches_ideal():
    chan = nonlocal_cz_channel()
    assert channel_process_fidelity(chan, CZ_GATE) > 1 - 1e-10
    vs_identity = channel_process_fidelity(chan, np.eye(4))
    assert vs_identity < 1.0
    assert abs(vs_identity - 0.25) < 1e-9  # |tr CZ|^2 / d^2


def test_nonlocal_cz_twice_is_identity():
    twice = channel_from_apply(compose_apply(nonlocal_cz_apply, nonlocal_cz_apply), (2, 2))
    assert channel_process_fidelity(twice, np.eye(4)) > 1 - 1e-9


# ---------------------------------------------------------------------------
# channel matrix validation


def test_channel_matrix_rejects_non_tp():
    bad = np.eye(4, dtype=complex) / 2.0  # trace of output blocks is wrong
    bad[0, 0] = 1.0
    with pytest.raises(ValidationError):
        ChannelMatrix(choi=bad / np.trace(bad), d=2)


def test_channel_matrix_rejects_non_cp():
    # swap-like Hermitian matrix with a negative eigenvalue, correctly normalized marginal
    choi = np.eye(4, dtype=complex) / 4.0
    choi[1, 2] = choi[2, 1] = -0.4
    with pytest.raises(ValidationError):
        ChannelMatrix(choi=choi, d=2)


# ---------------------------------------------------------------------------
# LOCC structure enforcement


def test_sim_blocks_cross_boundary_unitary():
    psi = random_pure_state((2,), 1)
    from entkit.locc import _Sim

    amps = np.kron(psi.amplitudes, [1, 0])
    sim = _Sim(amps, owners=(ALICE, BOB))
    with pytest.raises(LoccViolation):
        sim.unitary(ALICE, (0, 1), np.eye(4), "joint")


def test_verify_locc_structure_rejects_bad_transcript():
    steps = (LocalUnitaryStep(party=ALICE, qubits=(0, 1), name="joint"),)
    with pytest.raises(LoccViolation):
        verify_locc_structure(steps, (ALICE, BOB))
    # after a transmission the receiving party may act
    steps = (
        ResourceStep(kind="qubit_transmit", count=1, qubits=(1,)),
        LocalUnitaryStep(party=BOB, qubits=(1,), name="u"),
    )
    verify_locc_structure(steps, (ALICE, ALICE))
    steps = (MeasurementStep(party=BOB, qubit=0, basis="Z", outcome=0, probability=1.0),)
    with pytest.raises(LoccViolation):
        verify_locc_structure(steps, (ALICE, BOB))


def test_measure_without_seed_or_outcomes_rejected():
    with pytest.raises(ValidationError, match="seed"):
        from entkit.locc import _run_teleport

        _run_teleport(PLUS)


# ---------------------------------------------------------------------------
# reduction demos


def test_reduction_ebits_via_qubit_channel():
    demo = reduction_demo("ebits_via_qubit_channel", k=3)
    assert demo.totals.qubits_transmitted == 3
    assert demo.totals.ebits_consumed == 0
    assert all(f > 1 - 1e-10 for f in demo.summary["pair_fidelities"])
    assert demo.summary["pairs_created"] == 3


def test_reduction_creation_via_ebits():
    amps = np.zeros(4, dtype=complex)
    amps[0] = np.sqrt(0.9)
    amps[3] = np.sqrt(0.1)
    target = PureState(amps, (2, 2))
    demo = reduction_demo("creation_via_ebits", target=target, seed=7)
    assert demo.totals.ebits_consumed == 1
    assert demo.totals.cbits_alice_to_bob == 2
    assert demo.summary["final_fidelity"] > 1 - 1e-10
    # the single-copy demo spends a full ebit even though the target carries less
    assert demo.summary["ebits_per_copy"] == 1.0
    assert demo.summary["asymptotic_cost"] < 1.0
    for tr in creation_demo_branches(target):
        assert fidelity(shared_pair_density(tr), target.to_density()) > 1 - 1e-10


def test_reduction_communication_via_distilled_ebits():
    demo = reduction_demo("communication_via_distilled_ebits", k=2, seed=11)
    assert demo.totals.ebits_consumed == 2
    assert demo.totals.cbits_alice_to_bob == 4
    assert demo.totals.qubits_transmitted == 0
    assert demo.summary["qubits_conveyed"] == 2
    assert all(f > 1 - 1e-10 for f in demo.summary["fidelities"])


def test_reduction_unknown_direction():
    with pytest.raises(ValidationError):
        reduction_demo("nope")
