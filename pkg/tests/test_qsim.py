import math

import numpy as np
import pytest

from conftest import CZ, H, X, Z, random_unitary
from qpd import qsim


def test_basis_state_examples():
    assert np.allclose(qsim.basis_state(1, 0).amplitudes, [1, 0])
    assert np.allclose(qsim.basis_state(2, 0).amplitudes, [1, 0, 0, 0])
    assert np.allclose(qsim.basis_state(2, 3).amplitudes, [0, 0, 0, 1])


def test_basis_state_rejects_out_of_range():
    with pytest.raises(ValueError):
        qsim.basis_state(2, 4)
    with pytest.raises(ValueError):
        qsim.basis_state(2, -1)


def test_apply_single_hadamard_and_x():
    s = qsim.basis_state(1, 0)
    assert np.allclose(qsim.apply_single(s, qsim.HADAMARD, 0).amplitudes,
                       [1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert np.allclose(qsim.apply_single(s, qsim.PAULI_X, 0).amplitudes, [0, 1])


def test_rx_pi_matches_matrix_exponential():
    # oracle: exp(-i pi sigma_x / 2) via eigendecomposition of sigma_x
    evals, evecs = np.linalg.eigh(X)
    expm = evecs @ np.diag(np.exp(-1j * math.pi * evals / 2)) @ evecs.conj().T
    assert np.allclose(qsim.rx(math.pi), expm, atol=1e-12)
    out = qsim.apply_single(qsim.basis_state(1, 0), qsim.rx(math.pi), 0)
    assert np.allclose(out.amplitudes, [0, -1j], atol=1e-12)


def test_apply_single_acts_on_correct_wire():
    s = qsim.basis_state(3, 0)
    out = qsim.apply_single(s, qsim.PAULI_X, 0)
    assert np.argmax(np.abs(out.amplitudes)) == 4  # qubit 0 is the MSB
    out = qsim.apply_single(s, qsim.PAULI_X, 2)
    assert np.argmax(np.abs(out.amplitudes)) == 1


def test_norm_preserved_under_random_unitaries():
    rng = np.random.default_rng(7)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    s = qsim.PureState(3, amps / np.linalg.norm(amps))
    for _ in range(20):
        s = qsim.apply_single(s, random_unitary(rng), int(rng.integers(3)))
        norm = np.vdot(s.amplitudes, s.amplitudes).real
        assert abs(norm - 1) <= 1e-12


def test_apply_cz_examples():
    s11 = qsim.basis_state(2, 3)
    assert np.allclose(qsim.apply_cz(s11, 0, 1).amplitudes, [0, 0, 0, -1])
    s00 = qsim.basis_state(2, 0)
    assert np.allclose(qsim.apply_cz(s00, 0, 1).amplitudes, [1, 0, 0, 0])


def test_cz_after_hadamards_gives_entangled_resource():
    # oracle: CZ (H x H) |00> computed as an explicit 4-vector
    expected = CZ @ np.kron(H, H) @ np.array([1, 0, 0, 0], dtype=complex)
    s = qsim.basis_state(2, 0)
    s = qsim.apply_single(s, qsim.HADAMARD, 0)
    s = qsim.apply_single(s, qsim.HADAMARD, 1)
    s = qsim.apply_cz(s, 0, 1)
    assert np.allclose(s.amplitudes, expected, atol=1e-12)
    assert np.allclose(s.amplitudes, [0.5, 0.5, 0.5, -0.5], atol=1e-12)


def test_cz_is_symmetric_exactly():
    rng = np.random.default_rng(3)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    s = qsim.PureState(3, amps / np.linalg.norm(amps))
    a = qsim.apply_cz(s, 0, 2)
    b = qsim.apply_cz(s, 2, 0)
    assert np.array_equal(a.amplitudes, b.amplitudes)


def test_cz_rejects_bad_wires():
    s = qsim.basis_state(2, 0)
    with pytest.raises(ValueError):
        qsim.apply_cz(s, 0, 0)
    with pytest.raises(ValueError):
        qsim.apply_cz(s, 0, 2)


def test_project_plus_onto_zero():
    plus = qsim.apply_single(qsim.basis_state(1, 0), qsim.HADAMARD, 0)
    out, prob = qsim.project_onto(plus, 0, np.array([1, 0]))
    assert abs(prob - 0.5) <= 1e-12
    assert np.allclose(out.amplitudes, [1, 0], atol=1e-12)


def test_project_impossible_branch():
    with pytest.raises(qsim.ImpossibleBranchError):
        qsim.project_onto(qsim.basis_state(1, 0), 0, np.array([0, 1]))


def test_project_stage_output_on_plus():
    s = qsim.PureState(2, np.array([0.5, 0.5, 0.5, -0.5], dtype=complex))
    _, prob = qsim.project_onto(s, 1, np.array([1, 1]) / math.sqrt(2))
    assert abs(prob - 0.5) <= 1e-12


def test_projector_completeness():
    rng = np.random.default_rng(11)
    amps = rng.normal(size=16) + 1j * rng.normal(size=16)
    s = qsim.PureState(4, amps / np.linalg.norm(amps))
    for wire in range(4):
        u = random_unitary(rng)
        _, p0 = qsim.project_onto(s, wire, u[:, 0])
        _, p1 = qsim.project_onto(s, wire, u[:, 1])
        assert abs(p0 + p1 - 1) <= 1e-10


def test_computational_distribution_examples():
    assert qsim.computational_distribution(qsim.basis_state(2, 0), [0, 1]) == {
        "00": 1.0, "01": 0.0, "10": 0.0, "11": 0.0
    }
    bell = qsim.PureState(2, np.array([1, 0, 0, 1]) / math.sqrt(2))
    dist = qsim.computational_distribution(bell, [0])
    assert abs(dist["0"] - 0.5) <= 1e-12 and abs(dist["1"] - 0.5) <= 1e-12


def test_distribution_wire_order_matters():
    s = qsim.basis_state(2, 1)  # |01>
    assert qsim.computational_distribution(s, [0, 1])["01"] == 1.0
    assert qsim.computational_distribution(s, [1, 0])["10"] == 1.0


def test_full_round_identity_strategies():
    # oracle: (HxH) CZ CZ (HxH) |00> = |00> by direct matrix product
    hh = np.kron(H, H)
    expected = hh @ CZ @ CZ @ hh @ np.array([1, 0, 0, 0], dtype=complex)
    assert np.allclose(expected, [1, 0, 0, 0], atol=1e-12)
    s = qsim.basis_state(2, 0)
    for w in (0, 1):
        s = qsim.apply_single(s, qsim.HADAMARD, w)
    s = qsim.apply_cz(s, 0, 1)
    s = qsim.apply_cz(s, 0, 1)
    for w in (0, 1):
        s = qsim.apply_single(s, qsim.HADAMARD, w)
    dist = qsim.computational_distribution(s, [0, 1])
    assert abs(dist["00"] - 1) <= 1e-12


def test_pure_to_density_and_mix():
    rho = qsim.pure_to_density(qsim.basis_state(1, 0))
    assert np.allclose(rho.matrix, np.diag([1, 0]))
    mixed = qsim.mix([(0.5, qsim.pure_to_density(qsim.basis_state(1, 0))),
                      (0.5, qsim.pure_to_density(qsim.basis_state(1, 1)))])
    assert np.allclose(mixed.matrix, np.diag([0.5, 0.5]))
    x = 0.29
    single = qsim.mix([(1 - x, qsim.pure_to_density(qsim.basis_state(1, 0))),
                       (x, qsim.pure_to_density(qsim.basis_state(1, 1)))])
    assert np.allclose(single.matrix, np.diag([0.71, 0.29]))


def test_mix_validates_weights():
    rho = qsim.pure_to_density(qsim.basis_state(1, 0))
    with pytest.raises(ValueError):
        qsim.mix([(-0.1, rho), (1.1, rho)])
    with pytest.raises(ValueError):
        qsim.mix([(0.5, rho), (0.4, rho)])


def test_partial_transpose_product_state():
    rng = np.random.default_rng(5)
    ua, ub = random_unitary(rng), random_unitary(rng)
    rho_a = ua @ np.diag([0.7, 0.3]) @ ua.conj().T
    rho_b = ub @ np.diag([0.9, 0.1]) @ ub.conj().T
    rho = qsim.DensityMatrix(2, np.kron(rho_a, rho_b))
    pt = qsim.partial_transpose(rho, [1])
    assert np.allclose(pt, np.kron(rho_a, rho_b.T), atol=1e-12)
    assert np.linalg.eigvalsh(pt)[0] >= -1e-12


def test_partial_transpose_bell_eigenvalues():
    bell = qsim.pure_to_density(
        qsim.PureState(2, np.array([1, 0, 0, 1]) / math.sqrt(2))
    )
    ev = np.linalg.eigvalsh(qsim.partial_transpose(bell, [1]))
    assert np.allclose(sorted(ev), [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_partial_transpose_diagonal_invariant():
    rho = qsim.DensityMatrix(2, np.diag([0.5, 0, 0, 0.5]).astype(complex))
    assert np.allclose(qsim.partial_transpose(rho, [1]), rho.matrix)


def test_partial_transpose_rejects_other_sizes():
    rho = qsim.pure_to_density(qsim.basis_state(1, 0))
    with pytest.raises(ValueError):
        qsim.partial_transpose(rho, [0])


def test_negativity_examples():
    rng = np.random.default_rng(9)
    ua, ub = random_unitary(rng), random_unitary(rng)
    prod = qsim.PureState(2, np.kron(ua[:, 0], ub[:, 0]))
    assert qsim.negativity(qsim.pure_to_density(prod)) == 0.0
    bell = qsim.pure_to_density(
        qsim.PureState(2, np.array([1, 0, 0, 1]) / math.sqrt(2))
    )
    assert abs(qsim.negativity(bell) - 0.5) <= 1e-12
    resource = qsim.pure_to_density(
        qsim.PureState(2, np.array([0.5, 0.5, 0.5, -0.5], dtype=complex))
    )
    assert abs(qsim.negativity(resource) - 0.5) <= 1e-12


def test_is_ppt_examples():
    bell = qsim.pure_to_density(
        qsim.PureState(2, np.array([1, 0, 0, 1]) / math.sqrt(2))
    )
    assert not qsim.is_ppt(bell)
    assert qsim.is_ppt(qsim.DensityMatrix(2, np.eye(4) / 4))


def test_negativity_bounds_and_ppt_equivalence():
    rng = np.random.default_rng(13)
    for _ in range(50):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        mat = a @ a.conj().T
        rho = qsim.DensityMatrix(2, mat / np.trace(mat).real)
        n = qsim.negativity(rho)
        assert 0 <= n <= 0.5 + 1e-12
        assert (n <= 1e-10) == qsim.is_ppt(rho)


def test_gate_algebra_identities():
    assert np.abs(H @ X @ H - Z).max() <= 1e-12
    for theta in (0.3, 1.1, math.pi / 2):
        assert np.abs(H @ qsim.rx(theta) @ H - qsim.rz(theta)).max() <= 1e-12


def test_states_equal_ignores_global_phase():
    s = qsim.basis_state(2, 2)
    t = qsim.PureState(2, np.exp(0.7j) * s.amplitudes)
    assert qsim.states_equal(s, t)
    assert not qsim.states_equal(s, qsim.basis_state(2, 1))


def test_json_dumps():
    s = qsim.basis_state(1, 1)
    assert s.to_json_dict() == {"num_qubits": 1, "amplitudes": [[0.0, 0.0], [1.0, 0.0]]}
    rho = qsim.pure_to_density(s)
    dump = rho.to_json_dict()
    assert dump["num_qubits"] == 1
    assert dump["entries"][1][1] == [1.0, 0.0]


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        qsim.DensityMatrix(1, np.array([[0.5, 0.5], [0.4, 0.5]]))  # not Hermitian
    with pytest.raises(ValueError):
        qsim.DensityMatrix(1, np.diag([0.7, 0.7]).astype(complex))  # trace 1.4
    with pytest.raises(ValueError):
        qsim.DensityMatrix(1, np.diag([1.5, -0.5]).astype(complex))  # negative


def test_states_are_immutable():
    s = qsim.basis_state(1, 0)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0
