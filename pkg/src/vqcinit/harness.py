"""Experiment orchestration: schemes x rounds, aggregation, CSV emission.

Round r of every scheme draws from its own generator stream seeded with
``base_seed + r`` (PCG64 via ``numpy.random.default_rng``), so any single
round can be reproduced in isolation and the full grid is independent of
how jobs are scheduled. The orthogonal scheme is the one exception to
per-round drawing: its bank of mutually orthogonal starting vectors is built
once per scheme from ``base_seed`` and round r takes row r.

Output is two CSV files. The raw file has one row per training iteration
with columns ``scheme,round,seed,iteration,loss,loss_minus_fstar,grad_l2,
wall_ms``; the aggregate file carries per-iteration means and sample
standard deviations over rounds. Floats are rendered with 17 significant
digits so parsing them back reproduces the doubles bit for bit.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .ansatz import (Circuit, build_givens_default, build_givens_from_wiring,
                     build_hea, hf_state, parse_wiring_file)
from .config import ExperimentConfig
from .init_schemes import InitSpec, orthogonal_bank, sample, sample_xavier_chunked
from .optimize import NoiseSpec, OptimizerConfig, RunRecord, train
from .oracles import ground_energy, spectral_norm
from .pauli import Hamiltonian, build_heisenberg, load_hamiltonian_file
from .statevector import zero_state

logger = logging.getLogger(__name__)

RAW_HEADER = ("scheme", "round", "seed", "iteration", "loss",
              "loss_minus_fstar", "grad_l2", "wall_ms")
AGGREGATE_HEADER = ("scheme", "iteration", "loss_mean", "loss_std", "lmf_mean",
                    "lmf_std", "gradl2_mean", "gradl2_std")


@dataclass(frozen=True)
class AggregateCurve:
    """Per-iteration mean and sample standard deviation over rounds."""

    scheme: str
    iterations: np.ndarray
    loss_mean: np.ndarray
    loss_std: np.ndarray
    lmf_mean: np.ndarray
    lmf_std: np.ndarray
    gradl2_mean: np.ndarray
    gradl2_std: np.ndarray


def build_task(config: ExperimentConfig):
    """Materialize (circuit, hamiltonian, input_state) for a config."""
    if config.task == "heisenberg":
        h = build_heisenberg(config.n_qubits)
        circuit = build_hea(config.n_qubits, config.layers)
        input_state = zero_state(config.n_qubits)
    else:
        h = load_hamiltonian_file(config.hamiltonian_path)
        if config.wiring_path is not None:
            with open(config.wiring_path, "r", encoding="utf-8") as fh:
                wiring = parse_wiring_file(fh.read())
            circuit = build_givens_from_wiring(h.n_qubits, wiring)
        else:
            circuit = build_givens_default(config.n_electrons, h.n_qubits)
        input_state = hf_state(config.n_electrons, h.n_qubits)
    return circuit, h, input_state


def _build_noise(config: ExperimentConfig, h: Hamiltonian) -> NoiseSpec:
    if config.noise_mode == "none":
        return NoiseSpec()
    if config.noise_mode == "constant":
        return NoiseSpec(mode="constant", variance=config.noise_variance)
    if config.noise_h_norm_mode == "spectral":
        h_norm_sq = spectral_norm(h) ** 2
    else:
        h_norm_sq = h.coeff_abs_sum**2
    return NoiseSpec(mode="adaptive", adaptive_prefactor=config.adaptive_prefactor,
                     h_norm_sq=h_norm_sq)


def _draw_init(spec: InitSpec, circuit: Circuit, rng: np.random.Generator,
               bank_row) -> np.ndarray:
    if spec.scheme == "orthogonal":
        return np.array(bank_row, dtype=np.float64, copy=True)
    if spec.scheme == "xavier_chunked":
        chunks = spec.chunk_source or circuit.layer_chunks
        return sample_xavier_chunked(chunks, circuit.n_qubits, rng)
    return sample(spec, circuit.n_params, rng)


def _run_job(payload):
    """Train one (scheme, round) cell. Must stay a module-level function so
    worker processes can unpickle it; everything round-specific is derived
    from the payload alone, keeping results identical for any worker count."""
    (name, rnd, seed, circuit, h, input_state, spec, bank_row, opt, noise,
     iterations, fstar) = payload
    rng = np.random.default_rng(seed)
    init_params = _draw_init(spec, circuit, rng, bank_row)
    record = train(circuit, h, input_state, init_params, opt, noise,
                   iterations, fstar, rng, seed=seed)
    return name, rnd, record


def run_experiment(config: ExperimentConfig,
                   workers: int = 1) -> list[tuple[str, int, RunRecord]]:
    """Run every (scheme, round) cell and return records sorted by that key."""
    circuit, h, input_state = build_task(config)
    opt = OptimizerConfig(config.optimizer, config.lr, config.adam_beta1,
                          config.adam_beta2, config.adam_epsilon)
    noise = _build_noise(config, h)
    if config.fstar_mode == "configured":
        fstar = config.fstar_value
    else:
        fstar = ground_energy(h).energy
    logger.info("task=%s n_qubits=%d n_params=%d fstar=%.12f",
                config.task, circuit.n_qubits, circuit.n_params, fstar)
    payloads = []
    for spec in config.schemes:
        if spec.scheme == "xavier_chunked":
            spec = replace(spec, chunk_source=circuit.layer_chunks)
        bank = None
        if spec.scheme == "orthogonal":
            bank = orthogonal_bank(config.rounds, circuit.n_params, spec.gamma,
                                   spec.orthonormal_rate,
                                   np.random.default_rng(config.base_seed))
        for rnd in range(config.rounds):
            payloads.append((spec.scheme, rnd, config.base_seed + rnd, circuit,
                             h, input_state, spec,
                             None if bank is None else bank.rows[rnd], opt,
                             noise, config.iterations, fstar))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, payloads))
    else:
        results = []
        for payload in payloads:
            results.append(_run_job(payload))
            name, rnd, record = results[-1]
            logger.info("%s round %d: loss %.6f -> %.6f%s", name, rnd,
                        record.loss[0], record.loss[-1],
                        " (diverged)" if record.diverged else "")
    results.sort(key=lambda item: (item[0], item[1]))
    for name, rnd, record in results:
        if record.diverged:
            logger.warning("run (%s, round %d) diverged after %d iterations",
                           name, rnd, record.iterations[-1])
    return results


def summarize(records) -> list[AggregateCurve]:
    """Aggregate records into per-scheme mean/std curves.

    Diverged runs are left out of the statistics (they are still present in
    the raw CSV); a scheme whose every round diverged is dropped entirely.
    Surviving rounds of a scheme must all have the same length.
    """
    by_scheme: dict[str, list[RunRecord]] = {}
    for name, rnd, record in records:
        if record.diverged:
            logger.warning("excluding diverged run (%s, round %d) from aggregates",
                           name, rnd)
            continue
        by_scheme.setdefault(name, []).append(record)
    curves = []
    for name in sorted(by_scheme):
        group = by_scheme[name]
        lengths = {len(r.iterations) for r in group}
        if len(lengths) != 1:
            raise ValueError(
                f"scheme {name!r} has mismatched record lengths {sorted(lengths)}")
        loss = np.stack([r.loss for r in group])
        lmf = np.stack([r.loss_minus_fstar for r in group])
        gl2 = np.stack([r.grad_l2 for r in group])
        if len(group) > 1:
            stds = (loss.std(axis=0, ddof=1), lmf.std(axis=0, ddof=1),
                    gl2.std(axis=0, ddof=1))
        else:
            stds = (np.zeros(loss.shape[1]),) * 3
        curves.append(AggregateCurve(
            scheme=name,
            iterations=group[0].iterations.copy(),
            loss_mean=loss.mean(axis=0), loss_std=stds[0],
            lmf_mean=lmf.mean(axis=0), lmf_std=stds[1],
            gradl2_mean=gl2.mean(axis=0), gradl2_std=stds[2],
        ))
    return curves


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(items, destination) -> None:
    """Write either raw records or aggregate curves as CSV.

    A list of (scheme, round, RunRecord) tuples produces the raw file; a
    list of AggregateCurve produces the aggregate file. An empty list
    produces a header-only raw file. Rows are sorted by (scheme, round,
    iteration) so the bytes do not depend on execution order.
    """
    items = list(items)
    aggregate = bool(items) and isinstance(items[0], AggregateCurve)
    with open(destination, "w", encoding="utf-8", newline="\n") as fh:
        if aggregate:
            fh.write(",".join(AGGREGATE_HEADER) + "\n")
            for curve in sorted(items, key=lambda c: c.scheme):
                for i in range(len(curve.iterations)):
                    fh.write(",".join((
                        curve.scheme, str(int(curve.iterations[i])),
                        _fmt(curve.loss_mean[i]), _fmt(curve.loss_std[i]),
                        _fmt(curve.lmf_mean[i]), _fmt(curve.lmf_std[i]),
                        _fmt(curve.gradl2_mean[i]), _fmt(curve.gradl2_std[i]),
                    )) + "\n")
            return
        fh.write(",".join(RAW_HEADER) + "\n")
        for name, rnd, record in sorted(items, key=lambda t: (t[0], t[1])):
            for i in range(len(record.iterations)):
                fh.write(",".join((
                    name, str(rnd), str(record.seed),
                    str(int(record.iterations[i])), _fmt(record.loss[i]),
                    _fmt(record.loss_minus_fstar[i]), _fmt(record.grad_l2[i]),
                    _fmt(record.wall_ms[i]),
                )) + "\n")


def read_raw_csv(path) -> list[tuple[str, int, RunRecord]]:
    """Parse a raw CSV back into records.

    The divergence flag is not serialized, so records read back always carry
    ``diverged=False``; a truncated row count is the on-disk signature of a
    diverged run.
    """
    groups: dict[tuple[str, int], dict] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != RAW_HEADER:
            raise ValueError(f"unexpected raw CSV header {header!r}")
        for row in reader:
            name, rnd, seed = row[0], int(row[1]), int(row[2])
            bucket = groups.setdefault((name, rnd), {
                "seed": seed, "iteration": [], "loss": [], "lmf": [],
                "gl2": [], "wall": []})
            bucket["iteration"].append(int(row[3]))
            bucket["loss"].append(float(row[4]))
            bucket["lmf"].append(float(row[5]))
            bucket["gl2"].append(float(row[6]))
            bucket["wall"].append(float(row[7]))
    records = []
    for (name, rnd), bucket in groups.items():
        records.append((name, rnd, RunRecord(
            seed=bucket["seed"],
            iterations=np.array(bucket["iteration"], dtype=np.int64),
            loss=np.array(bucket["loss"]),
            loss_minus_fstar=np.array(bucket["lmf"]),
            grad_l2=np.array(bucket["gl2"]),
            wall_ms=np.array(bucket["wall"]),
        )))
    records.sort(key=lambda item: (item[0], item[1]))
    return records
