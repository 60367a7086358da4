"""Circuit templates for the two benchmark tasks.

``build_hea`` produces the hardware-efficient ansatz used on the Heisenberg
chain: per layer, CZ on every ring pair, then RX on every qubit, then RY on
every qubit, so a depth-L circuit on n qubits carries 2nL angles.

``build_givens_default`` produces the particle-conserving excitation circuit
used on the molecular task: all spin-conserving single excitations from the
occupied block into the virtual block, then all spin-conserving double
excitations, one angle per gate. Even orbital indices are spin-up, odd are
spin-down. The gate order is a documented convention (singles before
doubles, each in lexicographic index order); a wiring file can override it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevector import _apply_inplace, basis_state, n_qubits_of

_PARAMETERIZED = {"rx", "ry", "givens_single", "givens_double"}


@dataclass(frozen=True)
class GateSlot:
    """One gate position: kind, target qubits, and its parameter slot (if any)."""

    kind: str
    qubits: tuple[int, ...]
    param_index: int | None = None

    def __post_init__(self):
        if (self.param_index is not None) != (self.kind in _PARAMETERIZED):
            raise ValueError(
                f"{self.kind} gate {'must' if self.kind in _PARAMETERIZED else 'cannot'}"
                " carry a param_index")


@dataclass(frozen=True)
class Circuit:
    """An immutable gate list with parameter bookkeeping.

    ``layer_chunks`` records contiguous (start, length) parameter ranges, one
    per structural layer; chunk-aware samplers draw each range independently.
    """

    n_qubits: int
    slots: tuple[GateSlot, ...]
    n_params: int
    layer_chunks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        seen = set()
        for slot in self.slots:
            for q in slot.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"qubit {q} out of range in slot {slot}")
            if len(set(slot.qubits)) != len(slot.qubits):
                raise ValueError(f"duplicate qubits in slot {slot}")
            if slot.param_index is not None:
                seen.add(slot.param_index)
        if seen != set(range(self.n_params)):
            raise ValueError(
                f"param indices must cover 0..{self.n_params - 1} exactly once")
        cursor = 0
        for start, length in self.layer_chunks:
            if start != cursor or length < 1:
                raise ValueError("layer_chunks must partition the parameters "
                                 "contiguously and in order")
            cursor += length
        if cursor != self.n_params:
            raise ValueError("layer_chunks do not cover all parameters")


def build_hea(n_qubits: int, layers: int) -> Circuit:
    """Hardware-efficient ansatz: (CZ ring, RX row, RY row) repeated ``layers`` times."""
    if n_qubits < 2:
        raise ValueError("the ansatz needs at least two qubits")
    if layers < 1:
        raise ValueError("need at least one layer")
    ring = [(i, i + 1) for i in range(n_qubits - 1)]
    if n_qubits > 2:
        # wraparound pair; for n=2 it would duplicate (0,1) and CZ^2 = I
        ring.append((n_qubits - 1, 0))
    slots = []
    for layer in range(layers):
        base = layer * 2 * n_qubits
        for pair in ring:
            slots.append(GateSlot("cz", pair))
        for q in range(n_qubits):
            slots.append(GateSlot("rx", (q,), base + q))
        for q in range(n_qubits):
            slots.append(GateSlot("ry", (q,), base + n_qubits + q))
    chunks = tuple((layer * 2 * n_qubits, 2 * n_qubits) for layer in range(layers))
    return Circuit(n_qubits, tuple(slots), 2 * n_qubits * layers, chunks)


def build_givens_default(n_electrons: int, n_orbitals: int) -> Circuit:
    """Spin-conserving excitation circuit from the first ``n_electrons`` orbitals.

    Singles pair an occupied index with a virtual index of the same parity
    (same spin). Doubles promote an occupied pair into a virtual pair whose
    spin multiset matches. Order: singles by (occ, virt), then doubles by
    (o1, o2, v1, v2), all lexicographic.
    """
    if n_electrons < 0:
        raise ValueError("electron count cannot be negative")
    if n_electrons >= n_orbitals:
        raise ValueError("need more spin orbitals than electrons")
    occupied = range(n_electrons)
    virtual = range(n_electrons, n_orbitals)
    slots = []
    param = 0
    for occ in occupied:
        for virt in virtual:
            if occ % 2 == virt % 2:
                slots.append(GateSlot("givens_single", (occ, virt), param))
                param += 1
    occ_pairs = [(a, b) for a in occupied for b in occupied if a < b]
    virt_pairs = [(a, b) for a in virtual for b in virtual if a < b]
    for o1, o2 in occ_pairs:
        for v1, v2 in virt_pairs:
            if sorted((o1 % 2, o2 % 2)) == sorted((v1 % 2, v2 % 2)):
                slots.append(GateSlot("givens_double", (o1, o2, v1, v2), param))
                param += 1
    chunks = ((0, param),) if param else ()
    return Circuit(n_orbitals, tuple(slots), param, chunks)


def parse_wiring_file(text) -> tuple[tuple[int, ...], ...]:
    """Parse a gate-wiring override: `single <occ> <virt>` or `double <o1> <o2> <v1> <v2>`.

    Returns a tuple of ("single"|"double", indices...) entries in file order.
    Accepts a string or a readable file-like object; blank lines and
    ``#`` comments are skipped.
    """
    if hasattr(text, "read"):
        text = text.read()
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0].lower(), parts[1:]
        if kind == "single" and len(args) == 2:
            pass
        elif kind == "double" and len(args) == 4:
            pass
        else:
            raise ValueError(
                f"line {lineno}: expected 'single <occ> <virt>' or "
                f"'double <o1> <o2> <v1> <v2>', got {raw!r}")
        try:
            indices = tuple(int(a) for a in args)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-integer index in {raw!r}") from exc
        entries.append((kind, *indices))
    if not entries:
        raise ValueError("wiring file contains no gates")
    return tuple(entries)


def build_givens_from_wiring(n_orbitals: int,
                             wiring: tuple[tuple[int, ...], ...]) -> Circuit:
    """Excitation circuit with an explicit gate list instead of the default order."""
    slots = []
    for param, entry in enumerate(wiring):
        kind, indices = entry[0], entry[1:]
        gate = "givens_single" if kind == "single" else "givens_double"
        slots.append(GateSlot(gate, tuple(indices), param))
    chunks = ((0, len(slots)),) if slots else ()
    return Circuit(n_orbitals, tuple(slots), len(slots), chunks)


def hf_state(n_electrons: int, n_orbitals: int) -> np.ndarray:
    """Hartree-Fock reference |1..1 0..0> with the first ``n_electrons`` bits set."""
    if n_electrons > n_orbitals:
        raise ValueError("cannot occupy more orbitals than exist")
    if n_electrons < 0:
        raise ValueError("electron count cannot be negative")
    index = (1 << n_orbitals) - (1 << (n_orbitals - n_electrons))
    return basis_state(n_orbitals, index)


def evaluate(circuit: Circuit, params: np.ndarray, input_state: np.ndarray) -> np.ndarray:
    """Apply the circuit at the given angles; the input array is left untouched."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (circuit.n_params,):
        raise ValueError(
            f"expected {circuit.n_params} parameters, got shape {params.shape}")
    if n_qubits_of(input_state) != circuit.n_qubits:
        raise ValueError("input state size does not match the circuit")
    state = np.array(input_state, dtype=np.complex128, copy=True)
    for slot in circuit.slots:
        angle = None if slot.param_index is None else params[slot.param_index]
        _apply_inplace(state, circuit.n_qubits, slot.kind, slot.qubits, angle)
    return state
