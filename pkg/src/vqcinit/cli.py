"""Command-line entry points.

Subcommands:

* ``run --config <path> --out <dir> [--workers n]`` runs the configured
  experiment grid and writes ``raw.csv`` and ``aggregate.csv`` into the
  output directory.
* ``ground-energy --hamiltonian <path|heisenberg:N>`` prints the lowest
  eigenvalue, the method used, and the eigenpair residual.
* ``sample-init --scheme <name> --n-params <k> --gamma-sq <v> --seed <s>``
  prints one starting vector per line (the orthogonal scheme prints
  ``--n-times`` rows of its bank).
* ``gradcheck --qubits <n> --layers <l> --seed <s>`` compares the adjoint
  gradient of a random hardware-efficient circuit against the
  finite-difference and parameter-shift oracles.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

import numpy as np

from .ansatz import build_hea
from .config import load_config
from .errors import NumericalError
from .harness import run_experiment, summarize, write_csv
from .init_schemes import SCHEME_NAMES, InitSpec, orthogonal_bank, sample, \
    sample_xavier_chunked
from .optimize import gradient_adjoint
from .oracles import gradient_fd, gradient_paramshift, ground_energy
from .pauli import build_heisenberg, load_hamiltonian_file
from .statevector import zero_state

_FD_TOL = 1e-6
_SHIFT_TOL = 1e-9


def _fraction_float(value: str) -> float:
    """Float argument that also accepts a/b fractions, like config files do."""
    try:
        return float(value)
    except ValueError:
        pass
    num, sep, den = value.partition("/")
    try:
        if sep:
            return float(num) / float(den)
    except (ValueError, ZeroDivisionError):
        pass
    raise argparse.ArgumentTypeError(f"expected a number, got {value!r}")


class _Parser(argparse.ArgumentParser):
    """argparse's usage errors exit with 2; remap them to the validation code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vqcinit",
                     description="Initialization benchmarks for variational "
                                 "quantum circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a configured experiment grid")
    run.add_argument("--config", required=True, help="config file path")
    run.add_argument("--out", required=True, help="output directory for CSVs")
    run.add_argument("--workers", type=int, default=1,
                     help="parallel worker processes (results are identical "
                          "for any value)")

    ge = sub.add_parser("ground-energy", help="exact lowest eigenvalue")
    ge.add_argument("--hamiltonian", required=True,
                    help="Pauli-term file path, or heisenberg:N")
    ge.add_argument("--method", choices=("auto", "dense", "lanczos"),
                    default="auto")

    si = sub.add_parser("sample-init", help="print initialization draws")
    si.add_argument("--scheme", required=True, choices=SCHEME_NAMES)
    si.add_argument("--n-params", type=int, required=True)
    si.add_argument("--gamma-sq", type=_fraction_float, required=True)
    si.add_argument("--seed", type=int, required=True)
    si.add_argument("--n-times", type=int, default=1,
                    help="rows to draw (orthogonal bank size)")
    si.add_argument("--n-qubits", type=int,
                    help="required for xavier_chunked (sets its variance)")
    si.add_argument("--orthonormal-rate", type=float, default=1.0)

    gc = sub.add_parser("gradcheck", help="adjoint vs. oracle gradients")
    gc.add_argument("--qubits", type=int, required=True)
    gc.add_argument("--layers", type=int, required=True)
    gc.add_argument("--seed", type=int, required=True)
    return parser


def _cmd_run(args) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    config = load_config(args.config)
    if args.workers < 1:
        raise ValueError("--workers must be at least 1")
    records = run_experiment(config, workers=args.workers)
    curves = summarize(records)
    os.makedirs(args.out, exist_ok=True)
    raw_path = os.path.join(args.out, "raw.csv")
    agg_path = os.path.join(args.out, "aggregate.csv")
    write_csv(records, raw_path)
    write_csv(curves, agg_path)
    print(f"wrote {raw_path} and {agg_path}")
    for curve in curves:
        print(f"{curve.scheme}: mean loss {curve.loss_mean[0]:.6f} -> "
              f"{curve.loss_mean[-1]:.6f} over {len(curve.iterations) - 1} "
              "iterations")
    return 0


def _cmd_ground_energy(args) -> int:
    source = args.hamiltonian
    if source.startswith("heisenberg:"):
        n = int(source.split(":", 1)[1])
        h = build_heisenberg(n)
    else:
        if not os.path.isfile(source):
            raise ValueError(f"{source!r} is neither a file nor heisenberg:N")
        h = load_hamiltonian_file(source)
    result = ground_energy(h, method=args.method)
    print(f"energy = {result.energy:.17g}")
    print(f"method = {result.method}")
    print(f"residual = {result.residual:.3e}")
    return 0


def _cmd_sample_init(args) -> int:
    gamma = math.sqrt(args.gamma_sq)
    rng = np.random.default_rng(args.seed)
    if args.scheme == "orthogonal":
        spec = InitSpec(scheme="orthogonal", gamma=gamma, n_times=args.n_times,
                        orthonormal_rate=args.orthonormal_rate)
        bank = orthogonal_bank(spec.n_times, args.n_params, spec.gamma,
                               spec.orthonormal_rate, rng)
        rows = bank.rows
    elif args.scheme == "xavier_chunked":
        if args.n_qubits is None:
            raise ValueError("xavier_chunked needs --n-qubits")
        # one chunk spanning everything: entries are i.i.d., so chunk
        # boundaries only matter when reproducing a specific circuit's draw
        rows = [sample_xavier_chunked(((0, args.n_params),), args.n_qubits, rng)
                for _ in range(args.n_times)]
    else:
        spec = InitSpec(scheme=args.scheme, gamma=gamma)
        rows = [sample(spec, args.n_params, rng) for _ in range(args.n_times)]
    for row in rows:
        print(" ".join(format(x, ".17g") for x in row))
    return 0


def _cmd_gradcheck(args) -> int:
    circuit = build_hea(args.qubits, args.layers)
    h = build_heisenberg(args.qubits)
    rng = np.random.default_rng(args.seed)
    params = rng.uniform(0.0, 2.0 * math.pi, circuit.n_params)
    state = zero_state(args.qubits)
    adjoint = gradient_adjoint(circuit, h, params, state)
    fd = gradient_fd(circuit, h, params, state)
    shift = gradient_paramshift(circuit, h, params, state)
    fd_dev = float(np.max(np.abs(adjoint - fd)))
    shift_dev = float(np.max(np.abs(adjoint - shift)))
    print(f"n_params = {circuit.n_params}")
    print(f"max |adjoint - finite difference| = {fd_dev:.3e} (tolerance {_FD_TOL:.0e})")
    print(f"max |adjoint - parameter shift|   = {shift_dev:.3e} (tolerance {_SHIFT_TOL:.0e})")
    if fd_dev > _FD_TOL or shift_dev > _SHIFT_TOL:
        raise NumericalError("gradient oracles disagree beyond tolerance")
    print("ok")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "ground-energy": _cmd_ground_energy,
        "sample-init": _cmd_sample_init,
        "gradcheck": _cmd_gradcheck,
    }
    try:
        return handlers[args.command](args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
