"""Initialization benchmarks for variational quantum circuits.

The package reproduces a barren-plateau benchmark: classically inspired
initialization heuristics (Xavier, He, LeCun, orthogonal, and baselines)
are compared by training a hardware-efficient ansatz on a Heisenberg chain
and a Givens-rotation ansatz on a molecular Hamiltonian, with exact
statevector simulation and adjoint gradients throughout.
"""

from .ansatz import (Circuit, GateSlot, build_givens_default,
                     build_givens_from_wiring, build_hea, evaluate, hf_state,
                     parse_wiring_file)
from .config import ExperimentConfig, load_config, parse_config
from .errors import ConfigError, NumericalError
from .harness import (AggregateCurve, build_task, read_raw_csv, run_experiment,
                      summarize, write_csv)
from .init_schemes import (SCHEME_NAMES, InitSpec, ParamBank, orthogonal_bank,
                           qr_decompose, sample, sample_xavier_chunked)
from .optimize import (AdamState, NoiseSpec, OptimizerConfig, RunRecord,
                       adam_step, adaptive_noise_std, gd_step, gradient_adjoint,
                       loss, loss_and_gradient, perturb_gradient, train)
from .oracles import (GroundEnergyResult, dense_matrix, gradient_fd,
                      gradient_paramshift, ground_energy, spectral_norm)
from .pauli import (Hamiltonian, PauliTerm, build_heisenberg, expectation,
                    hamiltonian_matvec, load_hamiltonian_file,
                    parse_hamiltonian_file)
from .statevector import (apply_gate, basis_state, gate_matrix, n_qubits_of,
                          norm_error, zero_state)

__version__ = "0.1.0"
