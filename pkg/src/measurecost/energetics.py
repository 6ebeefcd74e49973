"""Energy and work quantities for measurement devices, in units of k_B*T.

The exact device cost assumes the memory reset is performed at the Landauer
limit, Delta E_R = -Delta F_M, which is approachable arbitrarily closely with
an unrestricted bath; every bound stays valid without that assumption.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .devices import MeasurementDevice, canonical_device, measurement_step
from .instruments import (
    QuantumInstrument,
    apply_instrument,
    inefficiency,
    is_projective,
)
from .linalg import (
    TOL_PSD,
    dag,
    free_energy,
    mutual_information,
    operator_norm,
    shannon_entropy,
    validate_density,
    validate_hamiltonian,
    von_neumann_entropy,
)

REPORT_FIELDS = (
    "delta_E_S",
    "E_cost",
    "E_M_step",
    "E_reset",
    "bound_general",
    "E_proj_exact",
    "ineff_bound",
    "E_ext",
    "dS",
    "dF_M",
    "I_avg",
    "D_Q",
    "faist_E0",
    "faist_iid",
)


def delta_e_s(h_s: np.ndarray, rho_before: np.ndarray, rho_after: np.ndarray) -> float:
    """Average system energy change tr[H_S (rho' - rho)]."""
    h_s = validate_hamiltonian(h_s, "H_S")
    rho_before = validate_density(rho_before, "rho_S")
    rho_after = validate_density(rho_after, "rho_S'")
    if not h_s.shape == rho_before.shape == rho_after.shape:
        raise ValueError("delta_e_s: dimension mismatch")
    return float(np.trace(h_s @ (rho_after - rho_before)).real)


def cost_exact(dev: MeasurementDevice, rho_s: np.ndarray) -> float:
    """Exact operating cost of the device on rho_S, reset at the Landauer limit.

    beta E_cost = beta Delta E_S + S(rho'_M) - S(rho_M).
    """
    step = measurement_step(dev, rho_s)
    de_s = delta_e_s(dev.h_s, rho_s, step.sys_post)
    return de_s + von_neumann_entropy(step.mem_post) - von_neumann_entropy(dev.rho_m)


@dataclass(frozen=True)
class DecompositionTerms:
    """Operational split of the measurement-step cost.

    beta dE_M = beta dE_S + dS + beta dF_M + I_avg + D_Q; ``residual`` is the
    absolute deviation of that identity evaluated on the device.
    """

    d_s: float      # average information gain S(rho_S) - sum_k p_k S(rho'_{S,k})
    d_f_m: float    # memory free-energy change
    i_avg: float    # average post-measurement S:M correlations
    d_q: float      # entropy produced by the readout dephasing
    residual: float


def decomposition(dev: MeasurementDevice, rho_s: np.ndarray) -> DecompositionTerms:
    step = measurement_step(dev, rho_s)
    d_sys, d_mem = dev.system_dim, dev.memory_dim

    post_entropy = 0.0
    info = 0.0
    for p, joint in zip(step.probs, step.joint_posts):
        if joint is None:
            continue
        sys_k = np.trace(joint.reshape(d_sys, d_mem, d_sys, d_mem), axis1=1, axis2=3)
        post_entropy += p * von_neumann_entropy(sys_k)
        info += p * mutual_information(joint, d_sys, d_mem)
    d_s = von_neumann_entropy(rho_s) - post_entropy
    d_f_m = free_energy(step.mem_post, dev.h_m) - free_energy(dev.rho_m, dev.h_m)
    d_q = (
        von_neumann_entropy(step.joint_avg)
        - von_neumann_entropy(rho_s)
        - von_neumann_entropy(dev.rho_m)
    )
    de_s = delta_e_s(dev.h_s, rho_s, step.sys_post)
    de_m = de_s + float(np.trace(dev.h_m @ (step.mem_post - dev.rho_m)).real)
    residual = abs(de_m - (de_s + d_s + d_f_m + info + d_q))
    return DecompositionTerms(d_s=d_s, d_f_m=d_f_m, i_avg=info, d_q=d_q, residual=residual)


def _measured(instr: QuantumInstrument, rho_s: np.ndarray, h_s: np.ndarray | None):
    result = apply_instrument(instr, rho_s)
    if h_s is None:
        de_s = 0.0
    else:
        de_s = delta_e_s(h_s, rho_s, result.average_post)
    return result, de_s


def bound_general(instr: QuantumInstrument, rho_s: np.ndarray, h_s: np.ndarray | None = None) -> float:
    """Implementation-independent lower bound on the cost of any device.

    Delta E_S plus the average entropy decrease S(rho_S) - sum_k p_k S(rho'_{S,k}).
    """
    result, de_s = _measured(instr, rho_s, h_s)
    post = sum(
        p * von_neumann_entropy(state)
        for p, state in zip(result.probs, result.post_states)
        if state is not None
    )
    return de_s + von_neumann_entropy(rho_s) - post


def cost_projective(instr: QuantumInstrument, rho_s: np.ndarray, h_s: np.ndarray | None = None) -> float:
    """Exact cost of a projective measurement: Delta E_S + H({p_k})."""
    if not is_projective(instr):
        raise ValueError("cost_projective requires a projective instrument")
    result, de_s = _measured(instr, rho_s, h_s)
    return de_s + shannon_entropy(result.probs)


def ineff_bound(instr: QuantumInstrument, rho_s: np.ndarray, h_s: np.ndarray | None = None) -> float:
    """Lower bound Delta E_S - ln(I) from the instrument's inefficiency I."""
    _, de_s = _measured(instr, rho_s, h_s)
    return de_s - float(np.log(inefficiency(instr)))


def extractable(dev: MeasurementDevice, rho_s: np.ndarray) -> float:
    """Useful energy the device yields on rho_S: Delta E_S - E_cost."""
    step = measurement_step(dev, rho_s)
    de_s = delta_e_s(dev.h_s, rho_s, step.sys_post)
    return de_s - cost_exact(dev, rho_s)


@dataclass(frozen=True)
class FaistComparison:
    """Single-shot (epsilon = 0) and i.i.d.-limit costs, H_S treated as 0."""

    e0: float
    e_iid: float


def faist_compare(instr: QuantumInstrument, rho_s: np.ndarray) -> FaistComparison:
    """Worst-case single-shot cost and its i.i.d. limit for the measurement.

    E0 = ln||E(Pi_S)||_inf + ln rank(rho'_M) with E the outcome-recording
    channel and Pi_S the support projector of rho_S; the memory marginal is
    taken from the canonical device. E_iid equals the general lower bound.
    """
    rho_s = validate_density(rho_s, "rho_S")
    evals, evecs = np.linalg.eigh((rho_s + dag(rho_s)) / 2)
    support = evecs[:, evals > TOL_PSD]
    pi_s = support @ dag(support)
    # E(Pi_S) is block diagonal over outcomes, so its norm is the largest block norm.
    channel_norm = max(
        operator_norm(sum(m @ pi_s @ dag(m) for m in ops)) for ops in instr.outcomes
    )

    step = measurement_step(canonical_device(instr), rho_s)
    mem_rank = int(np.count_nonzero(np.linalg.eigvalsh(step.mem_post) > TOL_PSD))
    e0 = float(np.log(channel_norm)) + float(np.log(mem_rank))
    return FaistComparison(e0=e0, e_iid=bound_general(instr, rho_s, h_s=None))


@dataclass(frozen=True)
class SecondLawReport:
    w_cost: float
    delta_f_s: float
    margin: float


def second_law_check(dev: MeasurementDevice, rho_s: np.ndarray) -> SecondLawReport:
    """Work cost versus system free-energy change; margin must be >= 0."""
    step = measurement_step(dev, rho_s)
    w = cost_exact(dev, rho_s)
    d_f = free_energy(step.sys_post, dev.h_s) - free_energy(rho_s, dev.h_s)
    return SecondLawReport(w_cost=w, delta_f_s=d_f, margin=w - d_f)


@dataclass(frozen=True)
class EnergyReport:
    """All cost and bound quantities for one (device, state) pair, in k_B*T."""

    delta_E_S: float
    E_cost: float
    E_M_step: float
    E_reset: float
    bound_general: float
    E_proj_exact: float | None
    ineff_bound: float
    E_ext: float
    dS: float
    dF_M: float
    I_avg: float
    D_Q: float
    faist_E0: float
    faist_iid: float

    def as_row(self) -> dict:
        return {name: getattr(self, name) for name in REPORT_FIELDS}


def energy_report(dev: MeasurementDevice, instr: QuantumInstrument, rho_s: np.ndarray) -> EnergyReport:
    """Evaluate every cost, bound and decomposition term for one input state."""
    step = measurement_step(dev, rho_s)
    de_s = delta_e_s(dev.h_s, rho_s, step.sys_post)
    terms = decomposition(dev, rho_s)
    e_m_step = de_s + float(np.trace(dev.h_m @ (step.mem_post - dev.rho_m)).real)
    e_reset = -terms.d_f_m
    faist = faist_compare(instr, rho_s)
    return EnergyReport(
        delta_E_S=de_s,
        E_cost=e_m_step + e_reset,
        E_M_step=e_m_step,
        E_reset=e_reset,
        bound_general=bound_general(instr, rho_s, dev.h_s),
        E_proj_exact=cost_projective(instr, rho_s, dev.h_s) if is_projective(instr) else None,
        ineff_bound=ineff_bound(instr, rho_s, dev.h_s),
        E_ext=de_s - (e_m_step + e_reset),
        dS=terms.d_s,
        dF_M=terms.d_f_m,
        I_avg=terms.i_avg,
        D_Q=terms.d_q,
        faist_E0=faist.e0,
        faist_iid=faist.e_iid,
    )
