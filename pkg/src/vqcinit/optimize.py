"""Loss, exact adjoint gradients, gradient noise, and the training loop.

The gradient runs in one forward and one backward sweep over the circuit.
After the forward pass the backward sweep keeps two vectors in lockstep,
the state ``psi`` and the adjoint vector ``lam`` (initially H|psi>), undoing
one gate at a time. Right before gate k is undone the pair holds everything
needed for that gate's derivative:

    df/dtheta_k = 2 Re <lam | (dU_k/dtheta_k) U_k^dag | psi>

For RX and RY the bracket reduces to Im<lam|G|psi> with G the Pauli
generator; for the Givens rotations it reduces to the antisymmetric cross
term on the rotated two-dimensional subspace. Each reduction needs only the
two cross inner products that the kernels return.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .ansatz import Circuit, evaluate
from .errors import NumericalError
from .pauli import Hamiltonian, expectation, hamiltonian_matvec
from .statevector import _apply_inplace, n_qubits_of

_NOISE_MODES = ("none", "constant", "adaptive")

# default adaptive-noise prefactor: 1/(96 * 24 * 8^2)
DEFAULT_ADAPTIVE_PREFACTOR = 1.0 / 147456.0


@dataclass(frozen=True)
class NoiseSpec:
    """How to corrupt gradients before the optimizer sees them.

    ``constant`` adds i.i.d. N(0, variance) to every component. ``adaptive``
    scales the per-component noise with the gradient itself: component k
    receives variance ``adaptive_prefactor * h_norm_sq * g_k^2``, so noise
    vanishes where the landscape is flat.
    """

    mode: str = "none"
    variance: float = 0.0
    adaptive_prefactor: float = DEFAULT_ADAPTIVE_PREFACTOR
    h_norm_sq: float = 1.0

    def __post_init__(self):
        if self.mode not in _NOISE_MODES:
            raise ValueError(f"unknown noise mode {self.mode!r}")
        if self.variance < 0:
            raise ValueError("noise variance cannot be negative")
        if self.mode == "adaptive":
            if not self.adaptive_prefactor > 0:
                raise ValueError("adaptive prefactor must be positive")
            if self.h_norm_sq < 0:
                raise ValueError("squared Hamiltonian norm cannot be negative")


@dataclass(frozen=True)
class OptimizerConfig:
    """Optimizer kind and hyperparameters. ``kind`` is "gd" or "adam"."""

    kind: str
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.kind not in ("gd", "adam"):
            raise ValueError(f"unknown optimizer {self.kind!r}")
        if not self.lr > 0:
            raise ValueError("learning rate must be positive")
        if not 0 <= self.beta1 < 1 or not 0 <= self.beta2 < 1:
            raise ValueError("Adam betas must lie in [0, 1)")
        if not self.epsilon > 0:
            raise ValueError("Adam epsilon must be positive")


@dataclass(frozen=True)
class AdamState:
    """First/second moment accumulators plus the step counter."""

    m: np.ndarray
    v: np.ndarray
    t: int
    beta1: float
    beta2: float
    epsilon: float

    @classmethod
    def fresh(cls, n_params: int, beta1: float = 0.9, beta2: float = 0.999,
              epsilon: float = 1e-8) -> "AdamState":
        return cls(np.zeros(n_params), np.zeros(n_params), 0, beta1, beta2, epsilon)


@dataclass(frozen=True)
class RunRecord:
    """One training trajectory: per-iteration metrics plus bookkeeping.

    Row 0 is the starting point before any update. ``wall_ms`` is reserved
    for timing diagnostics and is written as 0 so that records, and the CSV
    files derived from them, are bitwise reproducible for a fixed seed.
    ``diverged`` marks a run aborted by the loss guard; its rows stop at the
    offending iteration.
    """

    seed: int
    iterations: np.ndarray
    loss: np.ndarray
    loss_minus_fstar: np.ndarray
    grad_l2: np.ndarray
    wall_ms: np.ndarray
    diverged: bool = False


def loss(circuit: Circuit, h: Hamiltonian, params: np.ndarray,
         input_state: np.ndarray) -> float:
    """Energy expectation of the prepared state."""
    return expectation(evaluate(circuit, params, input_state), h)


def _check_shapes(circuit, h, params, input_state):
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (circuit.n_params,):
        raise ValueError(
            f"expected {circuit.n_params} parameters, got shape {params.shape}")
    if circuit.n_qubits != h.n_qubits:
        raise ValueError("circuit and Hamiltonian qubit counts differ")
    if n_qubits_of(input_state) != circuit.n_qubits:
        raise ValueError("input state size does not match the circuit")
    return params


def loss_and_gradient(circuit: Circuit, h: Hamiltonian, params: np.ndarray,
                      input_state: np.ndarray) -> tuple[float, np.ndarray]:
    """Loss and its exact gradient in one forward plus one backward sweep."""
    params = _check_shapes(circuit, h, params, input_state)
    n = circuit.n_qubits
    psi = np.array(input_state, dtype=np.complex128, copy=True)
    for slot in circuit.slots:
        angle = None if slot.param_index is None else params[slot.param_index]
        _apply_inplace(psi, n, slot.kind, slot.qubits, angle)
    lam = hamiltonian_matvec(h, psi)
    z = complex(np.vdot(psi, lam))
    if abs(z.imag) > 1e-8:
        raise NumericalError(
            f"expectation has imaginary residual {z.imag:.3e}; "
            "Hamiltonian or state is corrupted")
    grads = np.zeros(circuit.n_params)
    for slot in reversed(circuit.slots):
        strides = tuple(1 << (n - 1 - q) for q in slot.qubits)
        kind = slot.kind
        if kind == "cz":
            _kernels.cz_pair(psi, lam, max(strides), min(strides))
            continue
        theta = params[slot.param_index]
        c = math.cos(0.5 * theta)
        s = math.sin(0.5 * theta)
        if kind == "rx":
            z01, z10 = _kernels.rot_backward(psi, lam, strides[0],
                                             c + 0.0j, 1j * s, 1j * s, c + 0.0j)
            grads[slot.param_index] = (z01 + z10).imag
        elif kind == "ry":
            z01, z10 = _kernels.rot_backward(psi, lam, strides[0],
                                             c + 0.0j, s + 0.0j, -s + 0.0j, c + 0.0j)
            grads[slot.param_index] = (z10 - z01).real
        elif kind == "givens_single":
            za, zb = _kernels.givens2_grad(lam, psi, *strides)
            grads[slot.param_index] = (zb - za).real
            _kernels.apply_givens2(psi, *strides, c, -s)
            _kernels.apply_givens2(lam, *strides, c, -s)
        else:  # givens_double
            za, zb = _kernels.givens4_grad(lam, psi, *strides)
            grads[slot.param_index] = (zb - za).real
            _kernels.apply_givens4(psi, *strides, c, -s)
            _kernels.apply_givens4(lam, *strides, c, -s)
    return float(z.real), grads


def gradient_adjoint(circuit: Circuit, h: Hamiltonian, params: np.ndarray,
                     input_state: np.ndarray) -> np.ndarray:
    """Exact gradient of the energy with respect to every circuit angle."""
    return loss_and_gradient(circuit, h, params, input_state)[1]


def adaptive_noise_std(grad: np.ndarray, spec: NoiseSpec) -> np.ndarray:
    """Per-component standard deviation of the adaptive noise model."""
    return math.sqrt(spec.adaptive_prefactor * spec.h_norm_sq) * np.abs(grad)


def perturb_gradient(grad: np.ndarray, spec: NoiseSpec,
                     rng: np.random.Generator) -> np.ndarray:
    """Return the noisy gradient the optimizer should consume.

    Mode "none" returns the input unchanged (and draws nothing from the
    generator); the other modes add Gaussian noise as described on
    ``NoiseSpec``.
    """
    if spec.mode == "none":
        return grad
    grad = np.asarray(grad, dtype=np.float64)
    if not np.all(np.isfinite(grad)):
        raise ValueError("gradient must be finite")
    if spec.mode == "constant":
        return grad + rng.normal(0.0, math.sqrt(spec.variance), grad.shape)
    return grad + rng.standard_normal(grad.shape) * adaptive_noise_std(grad, spec)


def gd_step(params: np.ndarray, grad: np.ndarray, lr: float) -> np.ndarray:
    """Plain gradient descent: params - lr * grad."""
    params = np.asarray(params, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if params.shape != grad.shape:
        raise ValueError("parameter and gradient shapes differ")
    if not lr > 0:
        raise ValueError("learning rate must be positive")
    return params - lr * grad


def adam_step(state: AdamState, params: np.ndarray, grad: np.ndarray,
              lr: float) -> tuple[np.ndarray, AdamState]:
    """One bias-corrected Adam update; returns the new params and state."""
    params = np.asarray(params, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if params.shape != grad.shape or state.m.shape != params.shape:
        raise ValueError("parameter, gradient, and state shapes differ")
    if not lr > 0:
        raise ValueError("learning rate must be positive")
    t = state.t + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    v = state.beta2 * state.v + (1.0 - state.beta2) * grad * grad
    m_hat = m / (1.0 - state.beta1**t)
    v_hat = v / (1.0 - state.beta2**t)
    new_params = params - lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return new_params, AdamState(m, v, t, state.beta1, state.beta2, state.epsilon)


def train(circuit: Circuit, h: Hamiltonian, input_state: np.ndarray,
          init_params: np.ndarray, optimizer: OptimizerConfig, noise: NoiseSpec,
          iterations: int, fstar: float, rng: np.random.Generator,
          seed: int = 0) -> RunRecord:
    """Run one optimization trajectory and record it.

    Each iteration computes the exact gradient, perturbs it per ``noise``,
    and steps. The recorded metrics (loss, loss - fstar, gradient norm) are
    noiseless; the noise only steers the optimizer. A loss exceeding
    1000 * sum|coefficients| in magnitude, any non-finite metric, or
    non-finite parameters after a step abort the run with ``diverged=True``
    and the rows collected so far.
    """
    if iterations < 1:
        raise ValueError("need at least one iteration")
    if not np.isfinite(fstar):
        raise ValueError("fstar must be finite")
    params = np.array(init_params, dtype=np.float64, copy=True)
    guard = 1e3 * h.coeff_abs_sum
    adam = AdamState.fresh(circuit.n_params, optimizer.beta1, optimizer.beta2,
                           optimizer.epsilon)
    rows_iter, rows_loss, rows_grad = [], [], []
    diverged = False
    f, grad = loss_and_gradient(circuit, h, params, input_state)
    for t in range(iterations + 1):
        rows_iter.append(t)
        rows_loss.append(f)
        rows_grad.append(float(np.sqrt(np.sum(grad * grad))))
        if not np.isfinite(f) or not np.all(np.isfinite(grad)) or abs(f) > guard:
            diverged = True
            break
        if t == iterations:
            break
        noisy = perturb_gradient(grad, noise, rng)
        if optimizer.kind == "gd":
            params = gd_step(params, noisy, optimizer.lr)
        else:
            params, adam = adam_step(adam, params, noisy, optimizer.lr)
        if not np.all(np.isfinite(params)):
            diverged = True
            break
        f, grad = loss_and_gradient(circuit, h, params, input_state)
    loss_arr = np.array(rows_loss)
    return RunRecord(
        seed=seed,
        iterations=np.array(rows_iter, dtype=np.int64),
        loss=loss_arr,
        loss_minus_fstar=loss_arr - fstar,
        grad_l2=np.array(rows_grad),
        wall_ms=np.zeros(len(rows_iter)),
        diverged=diverged,
    )
