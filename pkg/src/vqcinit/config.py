"""Flat key=value experiment configuration.

A config file is UTF-8 text, one ``key = value`` per line, ``#`` starting a
comment. Unknown keys are rejected so typos fail loudly. Two task families
exist:

* ``task = heisenberg`` builds the hardware-efficient ansatz on an
  open-chain Heisenberg model; requires ``n_qubits`` and ``layers``.
* ``task = lih`` builds the Givens excitation ansatz from a Hartree-Fock
  start; requires ``hamiltonian_path`` (a Pauli-term file), takes the qubit
  count from that file, and accepts ``n_electrons`` (default 2) and an
  optional ``wiring_path`` overriding the default gate order.

Floats may be written as decimals or as fractions like ``1/160``, which keeps
exact variance targets readable.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .errors import ConfigError
from .init_schemes import SCHEME_NAMES, InitSpec

_TASKS = ("heisenberg", "lih")
_OPTIMIZERS = ("gd", "adam")
_NOISE_MODES = ("none", "constant", "adaptive")
_H_NORM_MODES = ("coeff_1norm", "spectral")
_FSTAR_MODES = ("oracle", "configured")

_ALL_KEYS = {
    "task", "n_qubits", "layers", "hamiltonian_path", "n_electrons",
    "wiring_path", "optimizer", "lr", "iterations", "rounds", "base_seed",
    "gamma_sq", "schemes", "noise", "noise_variance", "adaptive_prefactor",
    "h_norm_mode", "fstar_mode", "fstar_value", "uniform_low", "uniform_high",
    "orthonormal_rate", "adam_beta1", "adam_beta2", "adam_epsilon",
}

_HEISENBERG_ONLY = {"n_qubits", "layers"}
_LIH_ONLY = {"hamiltonian_path", "n_electrons", "wiring_path"}


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully validated experiment description.

    ``schemes`` holds one InitSpec per requested scheme, already carrying
    gamma = sqrt(gamma_sq), the orthonormal rate, and n_times = rounds.
    ``noise_h_norm_mode`` says how the adaptive noise scale ||H||^2 should be
    obtained once the Hamiltonian is loaded (sum of |coefficients| squared,
    or the exact spectral norm squared).
    """

    task: str
    optimizer: str
    lr: float
    iterations: int
    rounds: int
    base_seed: int
    gamma_sq: float
    schemes: tuple[InitSpec, ...]
    noise_mode: str
    noise_variance: float
    adaptive_prefactor: float
    noise_h_norm_mode: str
    fstar_mode: str
    fstar_value: float | None
    adam_beta1: float
    adam_beta2: float
    adam_epsilon: float
    n_qubits: int | None = None
    layers: int | None = None
    hamiltonian_path: str | None = None
    n_electrons: int | None = None
    wiring_path: str | None = None


def _as_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from exc


def _as_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        pass
    num, sep, den = value.partition("/")
    if sep:
        try:
            return float(num) / float(den)
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"{key}: expected a number, got {value!r}")


def _split_pairs(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def parse_config(text, base_dir: str = ".") -> ExperimentConfig:
    """Parse and validate a config document.

    ``base_dir`` anchors relative file paths (Hamiltonian, wiring); when
    loading from disk through ``load_config`` it is the config file's own
    directory, so configs can sit next to their data files.
    """
    if hasattr(text, "read"):
        text = text.read()
    pairs = _split_pairs(text)

    def require(key: str) -> str:
        if key not in pairs:
            raise ConfigError(f"missing required key {key!r}")
        return pairs[key]

    task = require("task")
    if task not in _TASKS:
        raise ConfigError(f"task must be one of {', '.join(_TASKS)}, got {task!r}")
    banned = (_LIH_ONLY if task == "heisenberg" else _HEISENBERG_ONLY) & pairs.keys()
    if banned:
        raise ConfigError(
            f"key(s) {sorted(banned)} do not apply to task {task!r}")

    optimizer = require("optimizer")
    if optimizer not in _OPTIMIZERS:
        raise ConfigError(f"optimizer must be 'gd' or 'adam', got {optimizer!r}")
    lr = _as_float("lr", require("lr"))
    if not lr > 0:
        raise ConfigError("lr must be positive")
    iterations = _as_int("iterations", require("iterations"))
    if iterations < 1:
        raise ConfigError("iterations must be at least 1")
    rounds = _as_int("rounds", pairs.get("rounds", "5"))
    if rounds < 1:
        raise ConfigError("rounds must be at least 1")
    base_seed = _as_int("base_seed", require("base_seed"))
    gamma_sq = _as_float("gamma_sq", require("gamma_sq"))
    if not gamma_sq > 0:
        raise ConfigError("gamma_sq must be positive")

    noise_mode = pairs.get("noise", "none")
    if noise_mode not in _NOISE_MODES:
        raise ConfigError(
            f"noise must be one of {', '.join(_NOISE_MODES)}, got {noise_mode!r}")
    noise_variance = _as_float("noise_variance", pairs.get("noise_variance", "0.001"))
    if noise_variance < 0:
        raise ConfigError("noise_variance cannot be negative")
    adaptive_prefactor = _as_float(
        "adaptive_prefactor", pairs.get("adaptive_prefactor", "1/147456"))
    if not adaptive_prefactor > 0:
        raise ConfigError("adaptive_prefactor must be positive")
    h_norm_mode = pairs.get("h_norm_mode", "coeff_1norm")
    if h_norm_mode not in _H_NORM_MODES:
        raise ConfigError(
            f"h_norm_mode must be one of {', '.join(_H_NORM_MODES)}, "
            f"got {h_norm_mode!r}")

    fstar_mode = pairs.get("fstar_mode", "oracle")
    if fstar_mode not in _FSTAR_MODES:
        raise ConfigError(
            f"fstar_mode must be 'oracle' or 'configured', got {fstar_mode!r}")
    fstar_value = None
    if fstar_mode == "configured":
        fstar_value = _as_float("fstar_value", require("fstar_value"))
        if not math.isfinite(fstar_value):
            raise ConfigError("fstar_value must be finite")
    elif "fstar_value" in pairs:
        raise ConfigError("fstar_value only applies when fstar_mode = configured")

    uniform_low = _as_float("uniform_low", pairs.get("uniform_low", "0"))
    uniform_high = _as_float(
        "uniform_high", pairs.get("uniform_high", repr(2.0 * math.pi)))
    if not uniform_high > uniform_low:
        raise ConfigError("uniform_high must exceed uniform_low")
    orthonormal_rate = _as_float(
        "orthonormal_rate", pairs.get("orthonormal_rate", "1"))
    if not orthonormal_rate > 0:
        raise ConfigError("orthonormal_rate must be positive")

    adam_beta1 = _as_float("adam_beta1", pairs.get("adam_beta1", "0.9"))
    adam_beta2 = _as_float("adam_beta2", pairs.get("adam_beta2", "0.999"))
    adam_epsilon = _as_float("adam_epsilon", pairs.get("adam_epsilon", "1e-8"))
    if not 0 <= adam_beta1 < 1 or not 0 <= adam_beta2 < 1:
        raise ConfigError("Adam betas must lie in [0, 1)")
    if not adam_epsilon > 0:
        raise ConfigError("adam_epsilon must be positive")

    names = [s.strip() for s in require("schemes").split(",") if s.strip()]
    if not names:
        raise ConfigError("schemes must list at least one scheme")
    unknown = [n for n in names if n not in SCHEME_NAMES]
    if unknown:
        raise ConfigError(
            f"unknown scheme(s) {unknown}; valid names: {', '.join(SCHEME_NAMES)}")
    if len(set(names)) != len(names):
        raise ConfigError("schemes must not repeat")
    gamma = math.sqrt(gamma_sq)
    schemes = tuple(
        InitSpec(scheme=name, gamma=gamma, orthonormal_rate=orthonormal_rate,
                 n_times=rounds, uniform_low=uniform_low,
                 uniform_high=uniform_high)
        for name in names)

    n_qubits = layers = None
    hamiltonian_path = wiring_path = None
    n_electrons = None
    if task == "heisenberg":
        n_qubits = _as_int("n_qubits", require("n_qubits"))
        if n_qubits < 2:
            raise ConfigError("n_qubits must be at least 2")
        layers = _as_int("layers", require("layers"))
        if layers < 1:
            raise ConfigError("layers must be at least 1")
    else:
        hamiltonian_path = os.path.join(base_dir, require("hamiltonian_path"))
        if not os.path.isfile(hamiltonian_path) or not os.access(
                hamiltonian_path, os.R_OK):
            raise ConfigError(
                f"hamiltonian_path {hamiltonian_path!r} is not a readable file")
        n_electrons = _as_int("n_electrons", pairs.get("n_electrons", "2"))
        if n_electrons < 0:
            raise ConfigError("n_electrons cannot be negative")
        if "wiring_path" in pairs:
            wiring_path = os.path.join(base_dir, pairs["wiring_path"])
            if not os.path.isfile(wiring_path) or not os.access(
                    wiring_path, os.R_OK):
                raise ConfigError(
                    f"wiring_path {wiring_path!r} is not a readable file")

    return ExperimentConfig(
        task=task,
        optimizer=optimizer,
        lr=lr,
        iterations=iterations,
        rounds=rounds,
        base_seed=base_seed,
        gamma_sq=gamma_sq,
        schemes=schemes,
        noise_mode=noise_mode,
        noise_variance=noise_variance,
        adaptive_prefactor=adaptive_prefactor,
        noise_h_norm_mode=h_norm_mode,
        fstar_mode=fstar_mode,
        fstar_value=fstar_value,
        adam_beta1=adam_beta1,
        adam_beta2=adam_beta2,
        adam_epsilon=adam_epsilon,
        n_qubits=n_qubits,
        layers=layers,
        hamiltonian_path=hamiltonian_path,
        n_electrons=n_electrons,
        wiring_path=wiring_path,
    )


def load_config(path) -> ExperimentConfig:
    """Read a config file; relative data paths resolve next to it."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_config(text, base_dir=os.path.dirname(os.path.abspath(path)))
