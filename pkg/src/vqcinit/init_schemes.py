"""Parameter-initialization samplers.

The benchmark compares classically motivated variance-scaled starts against
the usual baselines. Scheme identifiers (as written in config files):

================  ====================================================
zero              all angles 0
uniform           U[0, 2pi) per angle (range configurable)
gaussian          N(0, gamma^2) per angle
xavier_normal     N(0, gamma^2 * 2/n_params)
xavier_uniform    U(-gamma*sqrt(6/n_params), +gamma*sqrt(6/n_params))
xavier_chunked    per layer chunk, N(0, 1/n_qubits); no gamma
he_normal         N(0, gamma^2 * 2/n_params)
he_uniform        U(-gamma*sqrt(6/n_params), +gamma*sqrt(6/n_params))
lecun_normal      N(0, gamma^2 / n_params)
lecun_uniform     U(-gamma*sqrt(3/n_params), +gamma*sqrt(3/n_params))
orthogonal        rows of a random orthogonal matrix, scaled by gamma*lambda
================  ====================================================

The xavier and he variants coincide when the whole parameter vector is
treated as a single layer, which is how the global heuristics are defined
here; both names are kept so configs read naturally, and the test suite
asserts the equality instead of hiding it.

All sampling goes through ``numpy.random.Generator`` (PCG64 under
``default_rng``), so a (spec, seed) pair pins the draw bitwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SCHEME_NAMES = (
    "zero",
    "uniform",
    "gaussian",
    "xavier_normal",
    "xavier_uniform",
    "xavier_chunked",
    "he_normal",
    "he_uniform",
    "lecun_normal",
    "lecun_uniform",
    "orthogonal",
)

_TWO_PI = 2.0 * math.pi

# schemes whose spread is set by gamma (zero, uniform, xavier_chunked are not)
_GAMMA_SCHEMES = frozenset(SCHEME_NAMES) - {"zero", "uniform", "xavier_chunked"}


@dataclass(frozen=True)
class InitSpec:
    """Everything a sampler needs to know about one scheme instance.

    ``orthonormal_rate`` is the extra scale applied to orthogonal rows on
    top of gamma. ``n_times`` is the number of orthogonal starting points a
    bank must provide (one per experiment round). ``chunk_source`` carries
    the circuit's layer chunks for the chunked sampler; the harness fills it
    in once the circuit is built.
    """

    scheme: str
    gamma: float = 1.0
    orthonormal_rate: float = 1.0
    n_times: int = 1
    chunk_source: tuple[tuple[int, int], ...] | None = None
    uniform_low: float = 0.0
    uniform_high: float = _TWO_PI

    def __post_init__(self):
        if self.scheme not in SCHEME_NAMES:
            raise ValueError(
                f"unknown scheme {self.scheme!r}; valid names: {', '.join(SCHEME_NAMES)}")
        if self.scheme in _GAMMA_SCHEMES and not self.gamma > 0:
            raise ValueError(f"{self.scheme} needs gamma > 0, got {self.gamma}")
        if not self.orthonormal_rate > 0:
            raise ValueError("orthonormal rate must be positive")
        if self.n_times < 1:
            raise ValueError("n_times must be at least 1")
        if self.scheme == "uniform" and not self.uniform_high > self.uniform_low:
            raise ValueError("uniform range is empty")


@dataclass(frozen=True)
class ParamBank:
    """Pre-drawn starting vectors, one row per round."""

    rows: np.ndarray

    def __post_init__(self):
        if self.rows.ndim != 2:
            raise ValueError("bank rows must form a 2-d matrix")


def sample(spec: InitSpec, n_params: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one starting vector for any per-vector scheme.

    The two bank-style schemes have their own entry points and are rejected
    here: orthogonal needs the whole bank drawn at once (``orthogonal_bank``)
    and xavier_chunked needs the circuit's chunk structure
    (``sample_xavier_chunked``).
    """
    if n_params < 1:
        raise ValueError("n_params must be positive")
    scheme = spec.scheme
    if scheme == "zero":
        return np.zeros(n_params)
    if scheme == "uniform":
        return rng.uniform(spec.uniform_low, spec.uniform_high, n_params)
    if scheme == "gaussian":
        return rng.normal(0.0, spec.gamma, n_params)
    if scheme in ("xavier_normal", "he_normal"):
        return rng.normal(0.0, spec.gamma * math.sqrt(2.0 / n_params), n_params)
    if scheme in ("xavier_uniform", "he_uniform"):
        bound = spec.gamma * math.sqrt(6.0 / n_params)
        return rng.uniform(-bound, bound, n_params)
    if scheme == "lecun_normal":
        return rng.normal(0.0, spec.gamma / math.sqrt(n_params), n_params)
    if scheme == "lecun_uniform":
        bound = spec.gamma * math.sqrt(3.0 / n_params)
        return rng.uniform(-bound, bound, n_params)
    if scheme == "orthogonal":
        raise ValueError("orthogonal draws come from orthogonal_bank, not sample")
    raise ValueError(
        "xavier_chunked draws come from sample_xavier_chunked, not sample")


def sample_xavier_chunked(chunks, n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Fill each layer chunk independently from N(0, 1/n_qubits).

    Chunk boundaries matter only for how the generator stream is consumed;
    every entry has the same marginal distribution.
    """
    chunks = tuple(chunks)
    if not chunks:
        raise ValueError("need at least one chunk")
    if n_qubits < 1:
        raise ValueError("n_qubits must be positive")
    sigma = math.sqrt(1.0 / n_qubits)
    total = sum(length for _, length in chunks)
    out = np.empty(total)
    for start, length in chunks:
        out[start:start + length] = rng.normal(0.0, sigma, length)
    return out


def qr_decompose(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """QR factorization normalized so R's diagonal is non-negative.

    Without the sign fix the factorization is only unique up to column
    signs, and Q's distribution would depend on the underlying LAPACK
    implementation; with it, Q of a Gaussian matrix is Haar-distributed.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return q * signs, signs[:, None] * r


def orthogonal_bank(n_times: int, n_params: int, gamma: float,
                    orthonormal_rate: float, rng: np.random.Generator) -> ParamBank:
    """First ``n_times`` rows of a Haar-random orthogonal matrix, scaled.

    Each row has norm gamma * orthonormal_rate and the rows are mutually
    orthogonal, giving repeated training rounds starting points that share a
    scale but no direction.
    """
    if not 1 <= n_times <= n_params:
        raise ValueError(
            f"need 1 <= n_times <= n_params, got n_times={n_times}, "
            f"n_params={n_params}; a {n_params}-dimensional space cannot hold "
            f"{n_times} orthogonal starting points")
    if not gamma > 0 or not orthonormal_rate > 0:
        raise ValueError("gamma and orthonormal rate must be positive")
    gauss = rng.normal(0.0, 1.0, (n_params, n_params))
    q, _ = qr_decompose(gauss)
    rows = np.ascontiguousarray(q[:n_times, :]) * (gamma * orthonormal_rate)
    return ParamBank(rows)
