"""Independent verification machinery.

Everything here exists to check the fast paths against slower but
structurally unrelated computations: explicit dense matrices built by
Kronecker products, ground energies from a dense eigensolver or a Lanczos
iteration, and finite-difference / parameter-shift gradients. Keeping these
routes separate from the production kernels is the point; do not "optimize"
them by routing through the code they are meant to verify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ansatz import Circuit, evaluate
from .errors import NumericalError
from .pauli import Hamiltonian, PauliTerm, expectation, hamiltonian_matvec

_PAULI_MATRICES = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# dense eigensolve below this qubit count, Lanczos above
_DENSE_LIMIT = 12

_LANCZOS_TOL = 1e-9


@dataclass(frozen=True)
class GroundEnergyResult:
    """Lowest eigenvalue plus how it was obtained and how well it closes.

    ``residual`` is ||H v - E v|| for the returned eigenpair's vector v.
    """

    energy: float
    method: str
    residual: float


def dense_matrix(h: Hamiltonian) -> np.ndarray:
    """Materialize the 2^n x 2^n matrix by straight Kronecker products."""
    if h.n_qubits > 13:
        raise ValueError("dense matrix above 13 qubits would not fit in memory")
    dim = 2**h.n_qubits
    out = np.zeros((dim, dim), dtype=np.complex128)
    for term in h.terms:
        acc = np.array([[term.coefficient]], dtype=np.complex128)
        for letter in term.letters:
            acc = np.kron(acc, _PAULI_MATRICES[letter])
        out += acc
    return out


def _tridiag_ground(alphas, betas) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of the symmetric tridiagonal matrix T(alphas, betas)."""
    k = len(alphas)
    t = np.diag(np.asarray(alphas, dtype=np.float64))
    for i in range(k - 1):
        t[i, i + 1] = t[i + 1, i] = betas[i]
    vals, vecs = np.linalg.eigh(t)
    return float(vals[0]), vecs[:, 0]


def _lanczos_attempt(h: Hamiltonian, rng: np.random.Generator, tol: float,
                     max_iter: int) -> tuple[float, float, bool]:
    """One Lanczos run. Returns (energy, residual, converged)."""
    dim = 2**h.n_qubits
    max_iter = min(max_iter, dim)
    basis = np.empty((min(64, max_iter), dim), dtype=np.complex128)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    basis[0] = v / np.linalg.norm(v)
    alphas: list[float] = []
    betas: list[float] = []
    best_energy, best_residual = math.inf, math.inf

    def ritz(k: int) -> tuple[float, float]:
        """Current lowest Ritz value and its true residual ||Hx - Ex||."""
        energy, coeffs = _tridiag_ground(alphas, betas[:k - 1])
        x = basis[:k].T @ coeffs
        x /= np.linalg.norm(x)
        residual = float(np.linalg.norm(hamiltonian_matvec(h, x) - energy * x))
        return energy, residual

    for j in range(max_iter):
        w = hamiltonian_matvec(h, basis[j])
        alpha = float(np.real(np.vdot(basis[j], w)))
        alphas.append(alpha)
        w -= alpha * basis[j]
        if j > 0:
            w -= betas[j - 1] * basis[j - 1]
        # full reorthogonalization; the second pass mops up what classical
        # Gram-Schmidt leaves behind at this scale
        for _ in range(2):
            overlap = basis[:j + 1].conj() @ w
            w -= basis[:j + 1].T @ overlap
        beta = float(np.linalg.norm(w))
        if beta < 1e-12:
            # Krylov space closed; whatever we have is exact on it
            energy, residual = ritz(j + 1)
            return energy, residual, residual < tol
        betas.append(beta)
        estimate = beta * abs(_tridiag_ground(alphas, betas[:j])[1][-1])
        if estimate < tol:
            energy, residual = ritz(j + 1)
            if residual < tol:
                return energy, residual, True
            if residual < best_residual:
                best_energy, best_residual = energy, residual
        if j + 1 >= max_iter:
            break
        if j + 1 >= basis.shape[0]:
            grown = np.empty((min(2 * basis.shape[0], max_iter), dim),
                             dtype=np.complex128)
            grown[:basis.shape[0]] = basis
            basis = grown
        basis[j + 1] = w / beta
    energy, residual = ritz(len(alphas))
    if residual < best_residual:
        best_energy, best_residual = energy, residual
    return best_energy, best_residual, best_residual < tol


def ground_energy(h: Hamiltonian, method: str = "auto", tol: float = _LANCZOS_TOL,
                  max_iter: int = 400, seed: int = 7) -> GroundEnergyResult:
    """Lowest eigenvalue of the Hamiltonian.

    Small systems are diagonalized densely; larger ones run a seeded Lanczos
    iteration with full reorthogonalization, restarting once from a fresh
    start vector if the first attempt stalls. Non-convergence raises
    ``NumericalError`` carrying the best residual reached.
    """
    if method not in ("auto", "dense", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    if h.n_qubits > 20:
        raise ValueError("statevector workspace above 20 qubits is out of scope")
    if method == "auto":
        method = "dense" if h.n_qubits <= _DENSE_LIMIT else "lanczos"
    if method == "dense":
        matrix = dense_matrix(h)
        vals, vecs = np.linalg.eigh(matrix)
        energy = float(vals[0])
        ground = vecs[:, 0]
        residual = float(np.linalg.norm(
            hamiltonian_matvec(h, ground) - energy * ground))
        return GroundEnergyResult(energy, "dense", residual)
    best_energy, best_residual = math.inf, math.inf
    for attempt in range(2):
        rng = np.random.default_rng(seed + attempt)
        energy, residual, converged = _lanczos_attempt(h, rng, tol, max_iter)
        if converged:
            return GroundEnergyResult(energy, "lanczos", residual)
        if residual < best_residual:
            best_energy, best_residual = energy, residual
    raise NumericalError(
        f"Lanczos did not reach residual {tol:.1e} after two attempts of "
        f"{max_iter} iterations; best residual {best_residual:.3e} at "
        f"energy {best_energy:.12f}")


def spectral_norm(h: Hamiltonian, tol: float = _LANCZOS_TOL) -> float:
    """Exact operator norm max|eigenvalue|, for the adaptive-noise scale."""
    if h.n_qubits <= _DENSE_LIMIT:
        vals = np.linalg.eigvalsh(dense_matrix(h))
        return float(max(abs(vals[0]), abs(vals[-1])))
    lowest = ground_energy(h, method="lanczos", tol=tol).energy
    negated = Hamiltonian(
        h.n_qubits, tuple(PauliTerm(-t.coefficient, t.letters) for t in h.terms))
    highest = -ground_energy(negated, method="lanczos", tol=tol).energy
    return max(abs(lowest), abs(highest))


def gradient_fd(circuit: Circuit, h: Hamiltonian, params: np.ndarray,
                input_state: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central finite differences, one clean loss evaluation per shift."""
    if not step > 0:
        raise ValueError("step must be positive")
    params = np.asarray(params, dtype=np.float64)
    grads = np.zeros(circuit.n_params)
    for k in range(circuit.n_params):
        shifted = params.copy()
        shifted[k] = params[k] + step
        f_plus = expectation(evaluate(circuit, shifted, input_state), h)
        shifted[k] = params[k] - step
        f_minus = expectation(evaluate(circuit, shifted, input_state), h)
        grads[k] = (f_plus - f_minus) / (2.0 * step)
    return grads


def gradient_paramshift(circuit: Circuit, h: Hamiltonian, params: np.ndarray,
                        input_state: np.ndarray) -> np.ndarray:
    """Exact parameter-shift gradient, valid only for RX/RY parameters.

    The +-pi/2 shift rule is exact for gates generated by half-spectrum
    Paulis; Givens rotations do not qualify, so circuits containing them are
    rejected rather than silently mis-differentiated.
    """
    for slot in circuit.slots:
        if slot.kind not in ("rx", "ry", "cz"):
            raise ValueError(
                f"parameter-shift rule does not apply to {slot.kind} gates; "
                "use gradient_fd for this circuit")
    params = np.asarray(params, dtype=np.float64)
    half_pi = 0.5 * math.pi
    grads = np.zeros(circuit.n_params)
    for k in range(circuit.n_params):
        shifted = params.copy()
        shifted[k] = params[k] + half_pi
        f_plus = expectation(evaluate(circuit, shifted, input_state), h)
        shifted[k] = params[k] - half_pi
        f_minus = expectation(evaluate(circuit, shifted, input_state), h)
        grads[k] = 0.5 * (f_plus - f_minus)
    return grads
