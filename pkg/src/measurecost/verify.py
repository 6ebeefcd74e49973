"""Seeded property suite: every structural identity the package relies on.

Each check exercises one theorem-level statement (equalities, bounds,
implementation requirements, representation independence) on randomised
inputs and reports its worst residual. The CLI ``verify`` subcommand runs
the whole list and fails if any residual exceeds its tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .devices import (
    MeasurementDevice,
    MemoryLayout,
    admissible_dephasing_dilation,
    canonical_device,
    dephasing_channel_residual,
    dephasing_cost,
    dephasing_device,
    lemma1_check,
    measurement_step,
    verify_implementation,
)
from .energetics import (
    bound_general,
    cost_exact,
    cost_projective,
    decomposition,
    energy_report,
    ineff_bound,
    second_law_check,
)
from .instruments import (
    QuantumInstrument,
    apply_instrument,
    projective_instrument,
    random_instrument,
)
from .linalg import (
    dag,
    random_density,
    random_hermitian,
    random_pure_state,
    random_unitary,
    von_neumann_entropy,
)
from .protocols.qec5 import logical_state, sweep
from .protocols.workext import workext_pair
from .protocols.zeno import ZenoConfig, closed_form_error, zeno_run


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def _random_projectors(dim: int, rng: np.random.Generator):
    u = random_unitary(dim, rng)
    cuts = sorted(rng.choice(range(1, dim), size=min(dim - 1, rng.integers(1, dim)), replace=False))
    bounds = [0, *cuts, dim]
    return [
        u[:, a:b] @ dag(u[:, a:b])
        for a, b in zip(bounds[:-1], bounds[1:])
    ]


def _sample_states(dim: int, rng: np.random.Generator, n_pure: int = 3, n_mixed: int = 2):
    states = [random_pure_state(dim, rng) for _ in range(n_pure)]
    states += [random_density(dim, rng) for _ in range(n_mixed)]
    return states


def _check_implementation(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(6):
        dim = int(rng.integers(2, 5))
        instr = random_instrument(dim, int(rng.integers(1, 4)), int(rng.integers(1, 3)), int(rng.integers(1 << 30)))
        worst = max(worst, verify_implementation(canonical_device(instr), instr))
    return PropertyCheck("implementation requirement (canonical devices)", worst, 1e-8)


def _check_step_agreement(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(4):
        dim = int(rng.integers(2, 5))
        instr = random_instrument(dim, int(rng.integers(2, 4)), int(rng.integers(1, 3)), int(rng.integers(1 << 30)))
        dev = canonical_device(instr)
        for rho in _sample_states(dim, rng):
            step = measurement_step(dev, rho)
            direct = apply_instrument(instr, rho)
            worst = max(worst, float(np.max(np.abs(step.probs - direct.probs))))
            for k in range(instr.n_outcomes):
                if direct.post_states[k] is None or step.joint_posts[k] is None:
                    continue
                d_m = dev.memory_dim
                sys_k = np.trace(step.joint_posts[k].reshape(dim, d_m, dim, d_m), axis1=1, axis2=3)
                worst = max(worst, float(np.max(np.abs(sys_k - direct.post_states[k]))))
            # memory readout consistency tr[Q_k rho'_M] = p_k
            for k in range(instr.n_outcomes):
                q = dev.readout_projector(k)
                worst = max(worst, abs(float(np.trace(q @ step.mem_post).real) - step.probs[k]))
    return PropertyCheck("measurement step reproduces the instrument", worst, 1e-9)


def _check_theorem_decomposition(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(5):
        dim = int(rng.integers(2, 5))
        instr = random_instrument(dim, int(rng.integers(1, 4)), int(rng.integers(1, 3)), int(rng.integers(1 << 30)))
        h_s = random_hermitian(dim, rng)
        layout_dims = instr.kraus_counts
        h_m = np.zeros((sum(layout_dims),) * 2, dtype=complex)
        off = 0
        for d in layout_dims:
            h_m[off:off + d, off:off + d] = random_hermitian(d, rng)
            off += d
        dev = canonical_device(instr, h_s=h_s, h_m=h_m)
        for rho in _sample_states(dim, rng, 2, 2):
            terms = decomposition(dev, rho)
            worst = max(worst, terms.residual, -terms.i_avg, -terms.d_q)
    return PropertyCheck("measurement-step cost decomposition", worst, 1e-8)


def _check_projective_exactness(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(6):
        dim = int(rng.integers(2, 7))
        instr = projective_instrument(_random_projectors(dim, rng))
        h_s = random_hermitian(dim, rng)
        dev = canonical_device(instr, h_s=h_s)
        for rho in _sample_states(dim, rng, 2, 2):
            worst = max(worst, abs(cost_exact(dev, rho) - cost_projective(instr, rho, h_s)))
    return PropertyCheck("projective cost equality", worst, 1e-8)


def _check_projective_vs_general(rng: np.random.Generator) -> PropertyCheck:
    # E_proj - bound = S(sum_k P_k rho P_k) - S(rho) >= 0, two independent routes.
    worst = 0.0
    for _ in range(5):
        dim = int(rng.integers(2, 7))
        projs = _random_projectors(dim, rng)
        instr = projective_instrument(projs)
        for rho in _sample_states(dim, rng, 2, 2):
            gap = cost_projective(instr, rho) - bound_general(instr, rho)
            dephased = sum(p @ rho @ p for p in projs)
            direct = von_neumann_entropy(dephased) - von_neumann_entropy(rho)
            worst = max(worst, abs(gap - direct), -gap)
    return PropertyCheck("projective surplus over the general bound", worst, 1e-8)


def _check_bound_hierarchy(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(8):
        dim = int(rng.integers(2, 5))
        instr = random_instrument(dim, int(rng.integers(1, 4)), int(rng.integers(1, 5)), int(rng.integers(1 << 30)))
        h_s = random_hermitian(dim, rng)
        dev = canonical_device(instr, h_s=h_s)
        for rho in _sample_states(dim, rng, 2, 1):
            exact = cost_exact(dev, rho)
            general = bound_general(instr, rho, h_s)
            ineff = ineff_bound(instr, rho, h_s)
            worst = max(worst, general - exact, ineff - general)
    return PropertyCheck("cost >= general bound >= inefficiency bound", worst, 1e-9)


def _check_memory_hamiltonian_independence(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(3):
        dim = int(rng.integers(2, 4))
        instr = random_instrument(dim, 2, int(rng.integers(1, 3)), int(rng.integers(1 << 30)))
        base = canonical_device(instr)
        h_m = np.zeros((base.memory_dim,) * 2, dtype=complex)
        for k in range(base.layout.n_blocks):
            sl = base.layout.block_slice(k)
            h_m[sl, sl] = random_hermitian(base.layout.block_dims[k], rng)
        shifted = canonical_device(instr, h_m=h_m)
        for rho in _sample_states(dim, rng, 2, 1):
            worst = max(worst, abs(cost_exact(base, rho) - cost_exact(shifted, rho)))
    return PropertyCheck("cost independent of the memory Hamiltonian", worst, 1e-9)


def _check_extension_independence(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(3):
        dim = int(rng.integers(2, 4))
        instr = random_instrument(dim, 2, int(rng.integers(1, 3)), int(rng.integers(1 << 30)))
        a = canonical_device(instr)
        b = canonical_device(instr, extension_seed=int(rng.integers(1 << 30)))
        for rho in _sample_states(dim, rng, 2, 1):
            worst = max(worst, abs(cost_exact(a, rho) - cost_exact(b, rho)))
    return PropertyCheck("cost independent of the unitary extension", worst, 1e-8)


def _reshuffled(instr: QuantumInstrument, rng: np.random.Generator) -> QuantumInstrument:
    # Replace each outcome's Kraus list by an isometric mix (same maps T_k).
    outs = []
    for ops in instr.outcomes:
        m = len(ops)
        u = random_unitary(m + 1, rng)[:, :m]  # isometry C^m -> C^{m+1}
        outs.append(tuple(
            sum(u[j, i] * ops[i] for i in range(m)) for j in range(m + 1)
        ))
    return QuantumInstrument(system_dim=instr.system_dim, outcomes=tuple(outs))


def _check_kraus_representation_independence(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(3):
        dim = int(rng.integers(2, 4))
        instr = random_instrument(dim, 2, int(rng.integers(1, 3)), int(rng.integers(1 << 30)))
        other = _reshuffled(instr, rng)
        for rho in _sample_states(dim, rng, 1, 1):
            rep_a = energy_report(canonical_device(instr), instr, rho).as_row()
            rep_b = energy_report(canonical_device(other), other, rho).as_row()
            for name, value in rep_a.items():
                if value is None:
                    continue
                worst = max(worst, abs(value - rep_b[name]))
    return PropertyCheck("report invariant under Kraus reshuffling", worst, 1e-8)


def _check_dephasing(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for dims in ((1, 1), (2, 1, 2), (2, 2, 2, 2)):
        layout = MemoryLayout(block_dims=dims)
        d_e = max(2, int(np.ceil(np.sqrt(layout.n_blocks))))
        dil = dephasing_device(layout, d_e)
        worst = max(worst, dephasing_channel_residual(dil))
        for _ in range(2):
            worst = max(worst, abs(dephasing_cost(dil, random_density(layout.total_dim, rng))))
        # randomized admissible dilation with a genuinely thermal environment
        h_e = random_hermitian(layout.n_blocks + 2, rng)
        rand = admissible_dephasing_dilation(layout, h_e, int(rng.integers(1 << 30)))
        worst = max(worst, dephasing_channel_residual(rand))
        for _ in range(2):
            worst = max(worst, -dephasing_cost(rand, random_density(layout.total_dim, rng)))
    return PropertyCheck("dephasing dilation: channel equality and E >= 0", worst, 1e-9)


def _check_lemma1(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(3):
        dim = int(rng.integers(2, 6))
        instr = projective_instrument(_random_projectors(dim, rng))
        report = lemma1_check(canonical_device(instr), instr, n_states=4, seed=int(rng.integers(1 << 30)))
        worst = max(worst, report.decomposition_residual, report.orthogonality_residual, report.entropy_residual)
    return PropertyCheck("projective memory structure (orthogonal equal-entropy parts)", worst, 1e-7)


def _check_second_law(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(8):
        dim = int(rng.integers(2, 4))
        instr = random_instrument(dim, int(rng.integers(1, 4)), int(rng.integers(1, 3)), int(rng.integers(1 << 30)))
        dev = canonical_device(instr, h_s=random_hermitian(dim, rng))
        for _ in range(2):
            worst = max(worst, -second_law_check(dev, random_density(dim, rng)).margin)
    return PropertyCheck("work cost >= system free-energy change", worst, 1e-9)


def _check_zeno(rng: np.random.Generator) -> PropertyCheck:
    cfg = ZenoConfig(theta_total=float(rng.uniform(0.5, 2.0)), steps=200)
    result = zeno_run(cfg)
    worst = max(
        abs(result.errors[n - 1] - closed_form_error(cfg, n)) for n in range(1, cfg.steps + 1)
    )
    return PropertyCheck("Zeno recursion matches its closed form", worst, 1e-12)


def _check_qec_ordering(rng: np.random.Generator) -> PropertyCheck:
    psi = logical_state(1.0, 0.0)
    worst = 0.0
    for row in sweep(psi, [0.0, 0.3, 0.7, 1.0]):
        worst = max(worst, row.e_lan - row.e_su, row.e_su - row.e_proj, row.e_proj - row.e_sep)
    return PropertyCheck("QEC cost ordering Lan <= SU <= proj <= sep", worst, 1e-9)


def _check_workext(rng: np.random.Generator) -> PropertyCheck:
    worst = 0.0
    for _ in range(4):
        rho = random_density(2, rng) if rng.random() < 0.5 else random_pure_state(2, rng)
        pair = workext_pair(rho)
        worst = max(worst, abs(pair.efficient.E_cost + pair.efficient.E_ext))
        worst = max(worst, abs(pair.inefficient.E_cost + pair.inefficient.E_ext))
        worst = max(worst, -pair.inefficient.E_ext)  # ln2 - H >= 0
        worst = max(worst, pair.efficient.E_ext)     # -H <= 0
    return PropertyCheck("work-extraction pair signs and bookkeeping", worst, 1e-9)


def _check_broken_device(rng: np.random.Generator) -> PropertyCheck:
    # Negative control: an identity interaction cannot implement a nontrivial
    # measurement, so this residual is expected to be large.
    instr = random_instrument(2, 2, 1, 12345)
    good = canonical_device(instr)
    broken = MeasurementDevice(
        system_dim=good.system_dim,
        layout=good.layout,
        rho_m=good.rho_m,
        u_sm=np.eye(good.u_sm.shape[0]),
        h_s=good.h_s,
        h_m=good.h_m,
    )
    return PropertyCheck("negative control: identity interaction", verify_implementation(broken, instr), 1e-8)


def run_property_suite(seed: int, include_broken_device: bool = False) -> list:
    """Run every property check with one master seed; deterministic."""
    rng = np.random.default_rng(seed)
    checks = [
        _check_implementation,
        _check_step_agreement,
        _check_theorem_decomposition,
        _check_projective_exactness,
        _check_projective_vs_general,
        _check_bound_hierarchy,
        _check_memory_hamiltonian_independence,
        _check_extension_independence,
        _check_kraus_representation_independence,
        _check_dephasing,
        _check_lemma1,
        _check_second_law,
        _check_zeno,
        _check_qec_ordering,
        _check_workext,
    ]
    if include_broken_device:
        checks.append(_check_broken_device)
    return [check(rng) for check in checks]
