"""Dense statevector simulation of a small gate set.

States are flat ``complex128`` arrays of length ``2**n_qubits`` in big-endian
order: qubit 0 is the most significant bit of the basis index, so for three
qubits |100> lives at index 4. The gate set is exactly what the benchmark
circuits need: RX, RY, CZ, and the two particle-conserving Givens rotations.

Rotation conventions:

* ``rx(theta) = exp(-i theta X / 2)``
* ``ry(theta) = exp(-i theta Y / 2)``
* ``givens_single(theta)`` acts as [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]
  on the ordered pair (|01>, |10>) of its two qubits and as identity elsewhere.
* ``givens_double(theta)`` acts the same way on (|0011>, |1100>) of its four
  qubits (occupied pair first, virtual pair second).
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels

GATE_KINDS = ("rx", "ry", "cz", "givens_single", "givens_double")

# qubit arity per kind, and whether the kind takes an angle
_ARITY = {"rx": 1, "ry": 1, "cz": 2, "givens_single": 2, "givens_double": 4}
_PARAMETERIZED = {"rx", "ry", "givens_single", "givens_double"}


def n_qubits_of(state: np.ndarray) -> int:
    """Number of qubits of a flat amplitude array; rejects non power-of-two sizes."""
    size = state.shape[0] if state.ndim == 1 else -1
    if size < 2 or size & (size - 1):
        raise ValueError(f"state length {size} is not a power of two >= 2")
    return size.bit_length() - 1


def zero_state(n_qubits: int) -> np.ndarray:
    """|00...0> on ``n_qubits`` qubits."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    state = np.zeros(2**n_qubits, dtype=np.complex128)
    state[0] = 1.0
    return state


def basis_state(n_qubits: int, index: int) -> np.ndarray:
    """Computational basis state with the given big-endian index."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if not 0 <= index < 2**n_qubits:
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    state = np.zeros(2**n_qubits, dtype=np.complex128)
    state[index] = 1.0
    return state


def norm_error(state: np.ndarray) -> float:
    """|<psi|psi> - 1|, a cheap sanity probe for accumulated drift."""
    return abs(float(np.vdot(state, state).real) - 1.0)


def _stride(n_qubits: int, qubit: int) -> int:
    return 1 << (n_qubits - 1 - qubit)


def _check_gate(n_qubits: int, gate: str, qubits: tuple[int, ...], angle) -> None:
    if gate not in _ARITY:
        raise ValueError(f"unknown gate kind {gate!r}")
    if len(qubits) != _ARITY[gate]:
        raise ValueError(f"{gate} takes {_ARITY[gate]} qubits, got {len(qubits)}")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"gate qubits must be distinct, got {qubits}")
    for q in qubits:
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit {q} out of range for {n_qubits} qubits")
    if gate in _PARAMETERIZED:
        if angle is None:
            raise ValueError(f"{gate} needs an angle")
    elif angle is not None:
        raise ValueError(f"{gate} takes no angle")


def _apply_inplace(state, n_qubits, gate, qubits, angle) -> None:
    """Dispatch one gate to the compiled kernels. No validation, no copy."""
    if gate == "rx":
        c = math.cos(0.5 * angle)
        s = math.sin(0.5 * angle)
        _kernels.apply_2x2(state, _stride(n_qubits, qubits[0]),
                           c + 0.0j, -1j * s, -1j * s, c + 0.0j)
    elif gate == "ry":
        c = math.cos(0.5 * angle)
        s = math.sin(0.5 * angle)
        _kernels.apply_2x2(state, _stride(n_qubits, qubits[0]),
                           c + 0.0j, -s + 0.0j, s + 0.0j, c + 0.0j)
    elif gate == "cz":
        sa = _stride(n_qubits, qubits[0])
        sb = _stride(n_qubits, qubits[1])
        _kernels.apply_cz(state, max(sa, sb), min(sa, sb))
    elif gate == "givens_single":
        c = math.cos(0.5 * angle)
        s = math.sin(0.5 * angle)
        _kernels.apply_givens2(state, _stride(n_qubits, qubits[0]),
                               _stride(n_qubits, qubits[1]), c, s)
    elif gate == "givens_double":
        c = math.cos(0.5 * angle)
        s = math.sin(0.5 * angle)
        _kernels.apply_givens4(state,
                               _stride(n_qubits, qubits[0]),
                               _stride(n_qubits, qubits[1]),
                               _stride(n_qubits, qubits[2]),
                               _stride(n_qubits, qubits[3]), c, s)
    else:  # pragma: no cover - guarded by _check_gate
        raise ValueError(f"unknown gate kind {gate!r}")


def apply_gate(state: np.ndarray, gate: str, qubits: tuple[int, ...],
               angle: float | None = None) -> np.ndarray:
    """Return ``U |state>`` for one gate. The input array is left untouched."""
    n = n_qubits_of(state)
    qubits = tuple(int(q) for q in qubits)
    _check_gate(n, gate, qubits, angle)
    out = np.array(state, dtype=np.complex128, copy=True)
    _apply_inplace(out, n, gate, qubits, angle)
    return out


def gate_matrix(gate: str, angle: float | None = None) -> np.ndarray:
    """Dense matrix of one gate on its own qubits (big-endian ordering).

    Handy for unitarity checks and for cross-checking the kernels against
    plain matrix arithmetic.
    """
    if gate not in _ARITY:
        raise ValueError(f"unknown gate kind {gate!r}")
    if gate in _PARAMETERIZED and angle is None:
        raise ValueError(f"{gate} needs an angle")
    if gate == "cz" and angle is not None:
        raise ValueError("cz takes no angle")
    if gate == "rx":
        c = math.cos(0.5 * angle)
        s = math.sin(0.5 * angle)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if gate == "ry":
        c = math.cos(0.5 * angle)
        s = math.sin(0.5 * angle)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if gate == "cz":
        return np.diag([1.0, 1.0, 1.0, -1.0]).astype(np.complex128)
    c = math.cos(0.5 * angle)
    s = math.sin(0.5 * angle)
    if gate == "givens_single":
        m = np.eye(4, dtype=np.complex128)
        m[1, 1] = c
        m[1, 2] = -s
        m[2, 1] = s
        m[2, 2] = c
        return m
    # givens_double: the mixed pair is |0011> (index 3) and |1100> (index 12)
    m = np.eye(16, dtype=np.complex128)
    m[3, 3] = c
    m[3, 12] = -s
    m[12, 3] = s
    m[12, 12] = c
    return m
