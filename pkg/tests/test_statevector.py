"""Gate-level checks for the statevector simulator."""

import numpy as np
import pytest

from vqcinit.statevector import (apply_gate, basis_state, gate_matrix,
                                 n_qubits_of, norm_error, zero_state)

GATE_CASES = [
    ("rx", 1, 0.7),
    ("ry", 1, -1.3),
    ("cz", 2, None),
    ("givens_single", 2, 0.9),
    ("givens_double", 4, 2.1),
]


def test_zero_state():
    state = zero_state(3)
    assert state.shape == (8,)
    assert state[0] == 1.0
    assert np.count_nonzero(state) == 1


def test_basis_state_indexing_is_big_endian():
    # qubit 0 is the most significant bit: |100> lives at index 4
    state = basis_state(3, 4)
    assert state[4] == 1.0
    assert n_qubits_of(state) == 3


def test_ry_pi_flips_zero():
    out = apply_gate(zero_state(1), "ry", (0,), np.pi)
    np.testing.assert_allclose(out, [0.0, 1.0], atol=1e-15)


def test_rx_pi_gives_minus_i_one():
    out = apply_gate(zero_state(1), "rx", (0,), np.pi)
    np.testing.assert_allclose(out, [0.0, -1.0j], atol=1e-15)


def test_cz_phases():
    for index in range(3):
        out = apply_gate(basis_state(2, index), "cz", (0, 1))
        np.testing.assert_array_equal(out, basis_state(2, index))
    out = apply_gate(basis_state(2, 3), "cz", (0, 1))
    np.testing.assert_array_equal(out, -basis_state(2, 3))


def test_givens_single_rotates_the_right_pair():
    theta = 0.8
    out = apply_gate(basis_state(2, 1), "givens_single", (0, 1), theta)
    np.testing.assert_allclose(out[1], np.cos(theta / 2))
    np.testing.assert_allclose(out[2], np.sin(theta / 2))
    # |00> and |11> are untouched
    for index in (0, 3):
        out = apply_gate(basis_state(2, index), "givens_single", (0, 1), theta)
        np.testing.assert_array_equal(out, basis_state(2, index))


def test_givens_double_rotates_0011_1100():
    theta = 1.1
    out = apply_gate(basis_state(4, 0b0011), "givens_double", (0, 1, 2, 3), theta)
    np.testing.assert_allclose(out[0b0011], np.cos(theta / 2))
    np.testing.assert_allclose(out[0b1100], np.sin(theta / 2))
    out = apply_gate(basis_state(4, 0b0101), "givens_double", (0, 1, 2, 3), theta)
    np.testing.assert_array_equal(out, basis_state(4, 0b0101))


def test_input_state_is_not_mutated():
    state = zero_state(2)
    apply_gate(state, "ry", (1,), 0.3)
    np.testing.assert_array_equal(state, zero_state(2))


@pytest.mark.parametrize("gate,arity,angle", GATE_CASES)
def test_gate_matrices_are_unitary(gate, arity, angle):
    matrix = gate_matrix(gate, angle)
    dim = 2**arity
    assert matrix.shape == (dim, dim)
    deviation = np.max(np.abs(matrix.conj().T @ matrix - np.eye(dim)))
    assert deviation < 1e-12


@pytest.mark.parametrize("gate,arity,angle", GATE_CASES)
def test_kernels_match_dense_matrices(gate, arity, angle):
    """Strided kernels against plain matrix multiplication on random states.

    The gate acts on the first `arity` qubits of a 5-qubit register, so the
    kernel has to get both the strides and the bystander enumeration right.
    """
    rng = np.random.default_rng(42)
    n = 5
    state = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    state /= np.linalg.norm(state)
    qubits = tuple(range(arity))
    got = apply_gate(state, gate, qubits, angle)
    expanded = np.kron(gate_matrix(gate, angle), np.eye(2**(n - arity)))
    np.testing.assert_allclose(got, expanded @ state, atol=1e-14)


def test_kernels_match_dense_on_scattered_qubits():
    rng = np.random.default_rng(7)
    state = rng.normal(size=2**6) + 1j * rng.normal(size=2**6)
    state /= np.linalg.norm(state)
    got = apply_gate(state, "givens_double", (5, 1, 4, 2), 0.77)
    # permute qubits (5,1,4,2,0,3) to the front, apply, permute back
    perm = (5, 1, 4, 2, 0, 3)
    tensor = state.reshape((2,) * 6).transpose(perm)
    matrix = np.kron(gate_matrix("givens_double", 0.77), np.eye(4))
    rotated = (matrix @ tensor.reshape(64)).reshape((2,) * 6)
    want = rotated.transpose(np.argsort(perm)).reshape(64)
    np.testing.assert_allclose(got, want, atol=1e-14)


def test_norm_preserved_over_random_sequences():
    rng = np.random.default_rng(11)
    for n in (2, 5, 10):
        state = zero_state(n)
        for _ in range(100):
            kind = rng.choice(["rx", "ry", "cz", "givens_single"])
            qubits = tuple(rng.choice(n, size=2, replace=False))
            if kind in ("rx", "ry"):
                state = apply_gate(state, kind, qubits[:1], rng.uniform(0, 2 * np.pi))
            elif kind == "cz":
                state = apply_gate(state, "cz", qubits)
            else:
                state = apply_gate(state, kind, qubits, rng.uniform(0, 2 * np.pi))
        assert norm_error(state) < 1e-10


def test_gate_validation_errors():
    state = zero_state(2)
    with pytest.raises(ValueError):
        apply_gate(state, "rx", (2,), 0.1)  # out of range
    with pytest.raises(ValueError):
        apply_gate(state, "cz", (0, 0))  # duplicate
    with pytest.raises(ValueError):
        apply_gate(state, "rx", (0,))  # missing angle
    with pytest.raises(ValueError):
        apply_gate(state, "cz", (0, 1), 0.5)  # extra angle
    with pytest.raises(ValueError):
        apply_gate(state, "hadamard", (0,))  # unknown kind
    with pytest.raises(ValueError):
        n_qubits_of(np.ones(3, dtype=complex))  # not a power of two
