"""Pauli-string Hamiltonians: construction, parsing, and expectation values.

A Hamiltonian is a real-weighted sum of Pauli strings over a fixed qubit
count. Strings are written big-endian, letter 0 acting on qubit 0 (the most
significant index bit), matching the statevector layout.

The text file format is one term per line::

    # optional comments
    0.5 XXIZ
    -1.25 IIZZ

i.e. a float coefficient, whitespace, then one letter from {I, X, Y, Z} per
qubit. Every line must carry the same number of letters. Blank lines and
``#`` comments are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import NumericalError

_LETTERS = frozenset("IXYZ")

# expectation values whose relative imaginary residual exceeds this are
# treated as evidence of a corrupted Hamiltonian or state
_HERMITICITY_TOL = 1e-8


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string, e.g. 0.5 * XXIZ."""

    coefficient: float
    letters: str

    def __post_init__(self):
        if not self.letters or set(self.letters) - _LETTERS:
            raise ValueError(f"bad Pauli letters {self.letters!r}")
        if not np.isfinite(self.coefficient):
            raise ValueError(f"non-finite coefficient {self.coefficient!r}")


@dataclass(frozen=True)
class Hamiltonian:
    """A sum of Pauli terms on ``n_qubits`` qubits.

    Bit masks for the compiled kernels are derived once at construction:
    ``flip`` collects the strides of X/Y letters, ``sign`` the strides of
    Y/Z letters, and the weight absorbs the i**(#Y) phase so each term
    application is a single pass over the state.
    """

    n_qubits: int
    terms: tuple[PauliTerm, ...]
    _flips: np.ndarray = field(init=False, repr=False, compare=False)
    _signs: np.ndarray = field(init=False, repr=False, compare=False)
    _weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        if not self.terms:
            raise ValueError("Hamiltonian needs at least one term")
        flips = np.zeros(len(self.terms), dtype=np.int64)
        signs = np.zeros(len(self.terms), dtype=np.int64)
        weights = np.zeros(len(self.terms), dtype=np.complex128)
        for t, term in enumerate(self.terms):
            if len(term.letters) != self.n_qubits:
                raise ValueError(
                    f"term {term.letters!r} has {len(term.letters)} letters, "
                    f"expected {self.n_qubits}")
            n_y = 0
            for pos, letter in enumerate(term.letters):
                stride = 1 << (self.n_qubits - 1 - pos)
                if letter in "XY":
                    flips[t] |= stride
                if letter in "YZ":
                    signs[t] |= stride
                if letter == "Y":
                    n_y += 1
            weights[t] = term.coefficient * (1j) ** n_y
        object.__setattr__(self, "_flips", flips)
        object.__setattr__(self, "_signs", signs)
        object.__setattr__(self, "_weights", weights)

    @property
    def coeff_abs_sum(self) -> float:
        """Sum of |coefficients|, an upper bound on the spectral norm."""
        return float(sum(abs(t.coefficient) for t in self.terms))


def build_heisenberg(n_qubits: int) -> Hamiltonian:
    """Open-chain Heisenberg model: sum over bonds of XX + YY + ZZ."""
    if n_qubits < 2:
        raise ValueError("the chain needs at least two sites")
    terms = []
    for i in range(n_qubits - 1):
        for letter in "XYZ":
            word = ["I"] * n_qubits
            word[i] = letter
            word[i + 1] = letter
            terms.append(PauliTerm(1.0, "".join(word)))
    return Hamiltonian(n_qubits, tuple(terms))


def parse_hamiltonian_file(text) -> Hamiltonian:
    """Parse the one-term-per-line format described in the module docstring.

    Accepts either a string or a readable file-like object.
    """
    if hasattr(text, "read"):
        text = text.read()
    terms = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<coeff> <letters>', got {raw!r}")
        try:
            coeff = float(parts[0])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad coefficient {parts[0]!r}") from exc
        letters = parts[1].upper()
        if set(letters) - _LETTERS:
            raise ValueError(f"line {lineno}: bad Pauli letters {parts[1]!r}")
        if width is None:
            width = len(letters)
        elif len(letters) != width:
            raise ValueError(
                f"line {lineno}: {len(letters)} letters but earlier lines had {width}")
        terms.append(PauliTerm(coeff, letters))
    if not terms:
        raise ValueError("no terms found")
    return Hamiltonian(width, tuple(terms))


def load_hamiltonian_file(path) -> Hamiltonian:
    """Read and parse a Hamiltonian file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hamiltonian_file(fh.read())


def hamiltonian_matvec(h: Hamiltonian, state: np.ndarray) -> np.ndarray:
    """Return ``H |state>`` without materializing the 2^n x 2^n matrix."""
    if state.shape != (2**h.n_qubits,):
        raise ValueError(
            f"state has shape {state.shape}, expected ({2**h.n_qubits},)")
    psi = np.ascontiguousarray(state, dtype=np.complex128)
    out = np.zeros_like(psi)
    for t in range(len(h.terms)):
        _kernels.pauli_acc(out, psi, h._flips[t], h._signs[t],
                           h._weights[t].real, h._weights[t].imag)
    return out


def expectation(state: np.ndarray, h: Hamiltonian) -> float:
    """Real expectation value <state|H|state>.

    The imaginary residual of the raw inner product is normally at machine
    level; anything above 1e-8 means the Hamiltonian or state is corrupted
    and raises ``NumericalError`` rather than silently truncating.
    """
    z = complex(np.vdot(state, hamiltonian_matvec(h, state)))
    if abs(z.imag) > _HERMITICITY_TOL:
        raise NumericalError(
            f"expectation has imaginary residual {z.imag:.3e}; "
            "Hamiltonian or state is corrupted")
    return z.real
