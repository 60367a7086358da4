"""Acceptance gate: seven shipping criteria, one test per criterion.

Every test measures first, records one verdict line (echoed in the terminal
summary), then asserts at the stated tolerances. Criteria 4 and 7 run the
bundled full-size Heisenberg preset (about ten minutes each on one core).

Criterion 4(b) asserts that the gaussian scheme's mean final loss beats the
uniform scheme's. That ordering tracks initial gradient magnitudes and holds
under plain gradient descent, but the preset pins the Adam optimizer, whose
per-parameter rescaling neutralizes the initial gradient gap; measured
finals came out reversed on every round. The assertion is kept as stated
rather than weakened, so this one test is expected to fail.
"""

import pathlib
import time

import numpy as np
import pytest
from conftest import record_criterion

from vqcinit.ansatz import build_givens_default, build_hea, evaluate, hf_state
from vqcinit.config import load_config
from vqcinit.harness import run_experiment, summarize, write_csv
from vqcinit.init_schemes import InitSpec, orthogonal_bank, sample, \
    sample_xavier_chunked
from vqcinit.optimize import (NoiseSpec, adaptive_noise_std, gradient_adjoint,
                              perturb_gradient)
from vqcinit.oracles import gradient_fd, gradient_paramshift, ground_energy
from vqcinit.pauli import build_heisenberg, expectation
from vqcinit.statevector import zero_state

PRESET = pathlib.Path(__file__).resolve().parents[1] / "configs" / "heisenberg.cfg"

GAMMA_SQ = 1.0 / 160.0
N_PARAMS = 300


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    """Compile the simulation kernels once up front so the timed sections
    below measure the algorithms rather than the first-call JIT cost."""
    hea = build_hea(2, 1)
    gradient_adjoint(hea, build_heisenberg(2),
                     np.full(hea.n_params, 0.3), zero_state(2))
    giv = build_givens_default(2, 4)
    gradient_adjoint(giv, build_heisenberg(4),
                     np.full(giv.n_params, 0.3), hf_state(2, 4))


@pytest.fixture(scope="module")
def preset_run(tmp_path_factory):
    """One serial execution of the full Heisenberg preset, shared by
    criteria 4 and 7."""
    config = load_config(PRESET)
    start = time.perf_counter()
    records = run_experiment(config, workers=1)
    elapsed = time.perf_counter() - start
    raw_path = tmp_path_factory.mktemp("preset") / "raw.csv"
    write_csv(records, raw_path)
    return config, records, raw_path, elapsed


def verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def test_criterion_1_gradient_oracle_triangle():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    fd_dev = shift_dev = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 6))
        circuit = build_hea(n, int(rng.integers(1, 4)))
        h = build_heisenberg(n)
        params = rng.uniform(0.0, 2.0 * np.pi, circuit.n_params)
        state = zero_state(n)
        adjoint = gradient_adjoint(circuit, h, params, state)
        fd_dev = max(fd_dev, float(np.max(np.abs(
            adjoint - gradient_fd(circuit, h, params, state)))))
        shift_dev = max(shift_dev, float(np.max(np.abs(
            adjoint - gradient_paramshift(circuit, h, params, state)))))
    elapsed = time.perf_counter() - start
    ok = fd_dev < 1e-6 and shift_dev < 1e-9 and elapsed < 10.0
    line = (f"criterion 1: max|adjoint-FD| {fd_dev:.2e} (<1e-6), "
            f"max|adjoint-shift| {shift_dev:.2e} (<1e-9), "
            f"{elapsed:.1f}s (<10s) -> {verdict(ok)}")
    record_criterion(line)
    print(line)
    assert fd_dev < 1e-6
    assert shift_dev < 1e-9
    assert elapsed < 10.0


def test_criterion_2_exact_anchors():
    start = time.perf_counter()
    plateau = expectation(zero_state(15), build_heisenberg(15))
    singlet = ground_energy(build_heisenberg(2)).energy
    pair_dev = 0.0
    for n in range(3, 11):
        h = build_heisenberg(n)
        dense = ground_energy(h, method="dense").energy
        lanczos = ground_energy(h, method="lanczos").energy
        pair_dev = max(pair_dev, abs(dense - lanczos))
    elapsed = time.perf_counter() - start
    ok = (abs(plateau - 14.0) < 1e-12 and abs(singlet + 3.0) < 1e-10
          and pair_dev < 1e-8 and elapsed < 30.0)
    line = (f"criterion 2: <0|H15|0> = {plateau!r} (14 within 1e-12), "
            f"E0(XX+YY+ZZ) = {singlet:.12f} (-3 within 1e-10), "
            f"max dense-vs-Lanczos dev n=3..10 {pair_dev:.2e} (<1e-8), "
            f"{elapsed:.1f}s (<30s) -> {verdict(ok)}")
    record_criterion(line)
    print(line)
    assert abs(plateau - 14.0) < 1e-12
    assert abs(singlet + 3.0) < 1e-10
    assert pair_dev < 1e-8
    assert elapsed < 30.0


def test_criterion_3_initialization_statistics():
    gamma = np.sqrt(GAMMA_SQ)
    targets = {
        "gaussian": GAMMA_SQ,
        "uniform": (2.0 * np.pi) ** 2 / 12.0,
        "xavier_normal": GAMMA_SQ * 2.0 / N_PARAMS,
        "xavier_uniform": GAMMA_SQ * 2.0 / N_PARAMS,
        "he_normal": GAMMA_SQ * 2.0 / N_PARAMS,
        "he_uniform": GAMMA_SQ * 2.0 / N_PARAMS,
        "lecun_normal": GAMMA_SQ / N_PARAMS,
        "lecun_uniform": GAMMA_SQ / N_PARAMS,
    }
    n_draws = -(-10**6 // N_PARAMS)  # vectors of 300 until 1e6 values pooled
    start = time.perf_counter()
    worst_rel = 0.0
    rows = []
    rng = np.random.default_rng(2024)
    for name, target in targets.items():
        spec = InitSpec(scheme=name, gamma=gamma)
        pool = np.concatenate(
            [sample(spec, N_PARAMS, rng) for _ in range(n_draws)])
        rel = abs(np.var(pool) / target - 1.0)
        worst_rel = max(worst_rel, rel)
        rows.append((name, rel, pool))
    zero_pool = np.concatenate(
        [sample(InitSpec(scheme="zero", gamma=gamma), N_PARAMS, rng)
         for _ in range(n_draws)])
    chunk_pool = np.concatenate(
        [sample_xavier_chunked(((0, N_PARAMS),), 15, rng)
         for _ in range(n_draws)])
    chunk_rel = abs(np.var(chunk_pool) * 15.0 - 1.0)
    worst_rel = max(worst_rel, chunk_rel)

    uniform_pool = next(pool for name, _, pool in rows if name == "uniform")
    bounds_ok = bool(uniform_pool.min() >= 0.0 and uniform_pool.max() < 2 * np.pi)
    for name, half in (("xavier_uniform", gamma * np.sqrt(6.0 / N_PARAMS)),
                       ("lecun_uniform", gamma * np.sqrt(3.0 / N_PARAMS))):
        pool = next(p for n_, _, p in rows if n_ == name)
        bounds_ok = bounds_ok and bool(np.max(np.abs(pool)) <= half)

    bank = orthogonal_bank(5, N_PARAMS, gamma, 1.0, np.random.default_rng(2024))
    gram = bank.rows @ bank.rows.T
    cross = float(np.max(np.abs(gram - np.diag(np.diag(gram)))))
    norm_dev = float(np.max(np.abs(np.linalg.norm(bank.rows, axis=1) - gamma)))
    elapsed = time.perf_counter() - start

    ok = (worst_rel < 0.01 and np.all(zero_pool == 0.0) and bounds_ok
          and cross < 1e-10 and norm_dev < 1e-10 and elapsed < 20.0)
    line = (f"criterion 3: worst variance deviation {worst_rel:.2%} (<1%), "
            f"zero draws all zero: {bool(np.all(zero_pool == 0.0))}, "
            f"uniform bounds respected: {bounds_ok}, "
            f"bank max |cross dot| {cross:.1e} (<1e-10), "
            f"bank norm dev {norm_dev:.1e} (<1e-10), "
            f"{elapsed:.1f}s (<20s) -> {verdict(ok)}")
    record_criterion(line)
    print(line)
    assert worst_rel < 0.01
    assert np.all(zero_pool == 0.0)
    assert bounds_ok
    assert cross < 1e-10 and norm_dev < 1e-10
    assert elapsed < 20.0


def test_criterion_4_heisenberg_preset_orderings(preset_run):
    config, records, _, elapsed = preset_run
    curves = {c.scheme: c for c in summarize(records)}
    assert set(curves) == {s.scheme for s in config.schemes}
    drops = {name: (c.loss_mean[0], c.loss_mean[-1]) for name, c in curves.items()}
    all_drop = all(final < start for start, final in drops.values())
    g_final = curves["gaussian"].loss_mean[-1]
    u_final = curves["uniform"].loss_mean[-1]
    g_grad0 = curves["gaussian"].gradl2_mean[0]
    u_grad0 = curves["uniform"].gradl2_mean[0]
    line = (f"criterion 4: (a) mean loss drops for "
            f"{sum(f < s for s, f in drops.values())}/{len(drops)} schemes "
            f"{verdict(all_drop)}; "
            f"(b) gaussian final {g_final:.3f} < uniform final {u_final:.3f} "
            f"{verdict(g_final < u_final)}; "
            f"(c) start grad l2 gaussian {g_grad0:.3f} > uniform {u_grad0:.3f} "
            f"{verdict(g_grad0 > u_grad0)}; "
            f"{elapsed:.0f}s (<1800s) -> "
            f"{verdict(all_drop and g_final < u_final and g_grad0 > u_grad0 and elapsed < 1800)}")
    record_criterion(line)
    print(line)
    assert elapsed < 1800.0
    for name, (start, final) in drops.items():
        assert final < start, f"{name} mean loss did not drop ({start} -> {final})"
    assert g_grad0 > u_grad0, \
        f"start grad l2: gaussian {g_grad0} not above uniform {u_grad0}"
    assert g_final < u_final, \
        f"final mean loss: gaussian {g_final} not below uniform {u_final}"


def test_criterion_5_noise_machinery():
    start = time.perf_counter()
    spec = NoiseSpec(mode="constant", variance=0.001)
    draws = perturb_gradient(np.zeros(10**6), spec, np.random.default_rng(7))
    var_rel = abs(np.var(draws) / 0.001 - 1.0)
    adaptive = NoiseSpec(mode="adaptive", adaptive_prefactor=1.0 / 147456.0,
                         h_norm_sq=1.0)
    got = adaptive_noise_std(np.array([0.1]), adaptive)[0] ** 2
    want = (1.0 / 147456.0) * 0.01
    arith_rel = abs(got / want - 1.0)
    elapsed = time.perf_counter() - start
    ok = var_rel < 0.01 and arith_rel < 1e-15 and elapsed < 5.0
    line = (f"criterion 5: constant-noise variance off by {var_rel:.2%} (<1%), "
            f"adaptive variance rel err {arith_rel:.1e} (<1e-15), "
            f"{elapsed:.1f}s (<5s) -> {verdict(ok)}")
    record_criterion(line)
    print(line)
    assert var_rel < 0.01
    assert arith_rel < 1e-15
    assert elapsed < 5.0


def test_criterion_6_givens_ansatz():
    start = time.perf_counter()
    circuit = build_givens_default(2, 10)
    weights = np.array([bin(i).count("1") for i in range(1 << 10)])
    outside = weights != 2
    state = hf_state(2, 10)
    rng = np.random.default_rng(10)
    leak = 0.0
    for _ in range(100):
        out = evaluate(circuit, rng.uniform(0, 2 * np.pi, circuit.n_params), state)
        leak = max(leak, float(np.max(np.abs(out[outside]))))
    elapsed = time.perf_counter() - start
    ok = circuit.n_params == 24 and leak < 1e-12 and elapsed < 10.0
    line = (f"criterion 6: n_params = {circuit.n_params} (= 24), "
            f"max amplitude outside weight-2 over 100 draws {leak:.1e} (<1e-12), "
            f"{elapsed:.1f}s (<10s) -> {verdict(ok)}")
    record_criterion(line)
    print(line)
    assert circuit.n_params == 24
    assert leak < 1e-12
    assert elapsed < 10.0


def test_criterion_7_determinism_across_workers(preset_run, tmp_path):
    config, _, raw_path, budget = preset_run
    start = time.perf_counter()
    again = run_experiment(config, workers=2)
    elapsed = time.perf_counter() - start
    second_path = tmp_path / "raw_workers2.csv"
    write_csv(again, second_path)
    identical = raw_path.read_bytes() == second_path.read_bytes()
    ok = identical and elapsed < max(2.0 * budget, 1800.0)
    line = (f"criterion 7: raw CSV byte-identical for 1 vs 2 workers: "
            f"{identical}, {elapsed:.0f}s -> {verdict(ok)}")
    record_criterion(line)
    print(line)
    assert identical
    assert elapsed < max(2.0 * budget, 1800.0)
