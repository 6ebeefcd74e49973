"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance and runtime limit is pinned here.
"""

import time

import numpy as np
import pytest

from measurecost.devices import (
    MemoryLayout,
    admissible_dephasing_dilation,
    canonical_device,
    dephasing_channel_residual,
    dephasing_cost,
    dephasing_device,
    lemma1_check,
)
from measurecost.energetics import (
    bound_general,
    cost_exact,
    cost_projective,
    decomposition,
    faist_compare,
    ineff_bound,
    second_law_check,
)
from measurecost.instruments import (
    apply_instrument,
    projective_instrument,
    random_instrument,
)
from measurecost.linalg import (
    LN2,
    dag,
    ket,
    projector,
    random_density,
    random_hermitian,
    random_pure_state,
    random_unitary,
    shannon_entropy,
)
from measurecost.protocols.qec5 import logical_state, single_point, sweep, syndrome_instrument
from measurecost.protocols.workext import efficient_device, inefficient_device
from measurecost.protocols.zeno import ZenoConfig, zeno_device_crosscheck, zeno_run

SEED = 271828


def report(number, name, passed, detail):
    status = "PASS" if passed else "FAIL"
    print(f"[criterion {number:02d}] {name}: {status} ({detail})")
    assert passed, f"criterion {number} failed: {detail}"


def random_projective(dim, rng):
    u = random_unitary(dim, rng)
    n_blocks = int(rng.integers(2, dim + 1))
    cuts = sorted(rng.choice(range(1, dim), size=n_blocks - 1, replace=False))
    bounds = [0, *cuts, dim]
    return projective_instrument(
        [u[:, a:b] @ dag(u[:, a:b]) for a, b in zip(bounds[:-1], bounds[1:])]
    )


def test_01_projective_exactness():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        dim = int(rng.integers(2, 9))
        instr = random_projective(dim, rng)
        h_s = random_hermitian(dim, rng)
        dev = canonical_device(instr, h_s=h_s)
        rho = random_density(dim, rng) if rng.random() < 0.5 else random_pure_state(dim, rng)
        worst = max(worst, abs(cost_exact(dev, rho) - cost_projective(instr, rho, h_s)))
    elapsed = time.perf_counter() - start
    report(1, "projective cost equality", worst <= 1e-8 and elapsed < 10.0,
           f"max residual {worst:.2e}, {elapsed:.1f}s")


def test_02_measurement_step_decomposition():
    rng = np.random.default_rng(SEED + 1)
    start = time.perf_counter()
    worst_residual, worst_negative = 0.0, 0.0
    for _ in range(50):
        dim = int(rng.integers(2, 5))
        instr = random_instrument(
            dim, int(rng.integers(1, 4)), int(rng.integers(1, 4)), seed=int(rng.integers(1 << 31))
        )
        h_m = np.zeros((sum(instr.kraus_counts),) * 2, dtype=complex)
        off = 0
        for d in instr.kraus_counts:
            h_m[off:off + d, off:off + d] = random_hermitian(d, rng)
            off += d
        dev = canonical_device(instr, h_s=random_hermitian(dim, rng), h_m=h_m)
        terms = decomposition(dev, random_density(dim, rng))
        worst_residual = max(worst_residual, terms.residual)
        worst_negative = max(worst_negative, -terms.i_avg, -terms.d_q)
    elapsed = time.perf_counter() - start
    passed = worst_residual <= 1e-8 and worst_negative <= 1e-9 and elapsed < 30.0
    report(2, "cost decomposition identity", passed,
           f"max residual {worst_residual:.2e}, worst neg term {worst_negative:.2e}, {elapsed:.1f}s")


def test_03_bound_hierarchy():
    rng = np.random.default_rng(SEED + 2)
    worst = -np.inf
    for i in range(100):
        dim = int(rng.integers(2, 5))
        kraus = int(rng.integers(1, 5))  # inefficiency up to 4
        instr = random_instrument(dim, int(rng.integers(1, 4)), kraus, seed=i)
        dev = canonical_device(instr, h_s=random_hermitian(dim, rng))
        rho = random_density(dim, rng)
        exact = cost_exact(dev, rho)
        general = bound_general(instr, rho, dev.h_s)
        ineff = ineff_bound(instr, rho, dev.h_s)
        worst = max(worst, general - exact, ineff - general)
    report(3, "cost >= general bound >= inefficiency bound", worst <= 1e-9,
           f"worst margin violation {worst:.2e}")


def test_04_work_extraction():
    rng = np.random.default_rng(SEED + 3)
    dev_ineff, _ = inefficient_device()
    dev_eff, instr_eff = efficient_device()
    ground = projector(ket(0, 2))
    plus = projector((ket(0, 2) + ket(1, 2)) / np.sqrt(2))

    # Hamiltonians are zero here, so E_ext = -E_cost throughout.
    errors = [
        abs((-cost_exact(dev_ineff, ground)) - LN2),
        abs(-cost_exact(dev_ineff, plus)),
    ]
    for _ in range(20):
        rho = random_pure_state(2, rng)
        probs = apply_instrument(instr_eff, rho).probs
        errors.append(abs((-cost_exact(dev_eff, rho)) + shannon_entropy(probs)))
    worst = max(errors)
    report(4, "work-extraction device pair", worst <= 1e-10, f"max deviation {worst:.2e}")


def test_05_zeno():
    start = time.perf_counter()
    cfg = ZenoConfig(theta_total=1.0, steps=10_000)
    result = zeno_run(cfg)
    deviation = abs(result.total_cost - result.asymptotic_cost) / result.asymptotic_cost
    rng = np.random.default_rng(SEED + 4)
    steps = sorted(rng.choice(np.arange(1, cfg.steps + 1), size=10, replace=False))
    residual = zeno_device_crosscheck(cfg, steps)
    elapsed = time.perf_counter() - start
    passed = deviation <= 0.02 and residual <= 1e-8 and elapsed < 5.0
    report(5, "Zeno total versus asymptotic form", passed,
           f"deviation {deviation:.3%}, device residual {residual:.2e}, {elapsed:.1f}s")


GRID = np.linspace(0.0, 1.0, 101)


def test_06_qec_endpoints_and_shape():
    start = time.perf_counter()
    rows = sweep(logical_state(1.0, 0.0), GRID)
    elapsed = time.perf_counter() - start
    zero_ok = abs(rows[0].e_proj) < 1e-12
    one_ok = abs(rows[-1].e_proj - 4 * LN2) <= 1e-6
    lan_negative = all(row.e_lan < 0.0 for row in rows if row.gamma >= 0.8)
    chain = max(
        max(row.e_lan - row.e_su, row.e_su - row.e_proj, row.e_proj - row.e_sep)
        for row in rows
    )
    passed = zero_ok and one_ok and lan_negative and chain <= 1e-9 and elapsed < 60.0
    report(6, "QEC endpoints and ordering over the grid", passed,
           f"E_proj(1)={rows[-1].e_proj / LN2:.6f} ln2, worst chain margin {chain:.2e}, {elapsed:.1f}s")


def test_07_qec_improvement_at_low_noise():
    row = single_point(logical_state(1.0, 0.0), 0.05)
    improvement = (row.e_proj - row.e_su) / row.e_su
    report(7, "QEC low-noise improvement fraction", 0.08 <= improvement <= 0.25,
           f"exact value {improvement:.4f}")


def test_08_dephasing():
    rng = np.random.default_rng(SEED + 5)
    worst_residual, worst_exact, worst_thermal = 0.0, 0.0, 0.0
    for k_blocks in (2, 4, 16):
        for d_e in (2, 4):
            if d_e * d_e < k_blocks:
                continue
            layout = MemoryLayout(block_dims=tuple([1] * k_blocks))
            dil = dephasing_device(layout, d_e)
            worst_residual = max(worst_residual, dephasing_channel_residual(dil))
            for _ in range(3):
                cost = dephasing_cost(dil, random_density(k_blocks, rng))
                worst_exact = max(worst_exact, abs(cost))
    for seed in range(5):
        layout = MemoryLayout(block_dims=(2, 1, 2))
        dil = admissible_dephasing_dilation(layout, random_hermitian(6, rng), seed)
        worst_residual = max(worst_residual, dephasing_channel_residual(dil))
        for _ in range(3):
            worst_thermal = max(worst_thermal, -dephasing_cost(dil, random_density(5, rng)))
    passed = worst_residual <= 1e-9 and worst_exact == 0.0 and worst_thermal <= 1e-9
    report(8, "dephasing dilation: equality and zero cost", passed,
           f"residual {worst_residual:.2e}, exact cost {worst_exact:.1e}, thermal margin {worst_thermal:.2e}")


def test_09_lemma1_syndrome_device():
    instr = syndrome_instrument()
    dev = canonical_device(instr)
    assert dev.system_dim == 32 and dev.memory_dim == 16
    result = lemma1_check(dev, instr, n_states=10, seed=SEED)
    worst = max(
        result.decomposition_residual, result.orthogonality_residual, result.entropy_residual
    )
    report(9, "projective memory structure at dim 32x16", worst <= 1e-7,
           f"max residual {worst:.2e}")


def test_10_second_law():
    rng = np.random.default_rng(SEED + 6)
    worst = -np.inf
    for i in range(100):
        dim = int(rng.integers(2, 5))
        instr = random_instrument(dim, int(rng.integers(1, 4)), int(rng.integers(1, 3)), seed=1000 + i)
        dev = canonical_device(instr, h_s=random_hermitian(dim, rng))
        rho = random_density(dim, rng)  # full rank almost surely
        worst = max(worst, -second_law_check(dev, rho).margin)
    report(10, "second law margin over random pairs", worst <= 1e-9,
           f"worst violation {worst:.2e}")


def test_11_faist_coherent_example():
    instr = projective_instrument([projector(ket(0, 2)), projector(ket(1, 2))])
    plus = projector((ket(0, 2) + ket(1, 2)) / np.sqrt(2))
    comparison = faist_compare(instr, plus)
    proj = cost_projective(instr, plus)
    worst = max(abs(proj - LN2), abs(comparison.e0), abs(comparison.e_iid))
    report(11, "single-shot comparison on the coherent state", worst <= 1e-10,
           f"max deviation {worst:.2e}")
