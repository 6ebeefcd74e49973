"""Physical measurement devices: memory + unitary + readout projections.

A device is the explicit implementation tuple (rho_M, U_SM, {Q_k}) acting on
system x memory, with the memory Hilbert space split into one block per
outcome. ``canonical_device`` builds the minimal dilation of any instrument;
``verify_implementation`` checks the defining requirement
tr_M[(1 x Q_k) U (rho x rho_M) U^dag] = sum_i M_ki rho M_ki^dag for all rho, k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instruments import QuantumInstrument, is_projective
from .linalg import (
    TOL_EIG,
    TOL_PROB,
    TOL_TRACE,
    dag,
    frozen,
    hermitian_eig,
    ket,
    partial_trace,
    random_density,
    random_pure_state,
    random_unitary,
    tensor_product,
    thermal_state,
    unitarity_residual,
    validate_density,
    validate_hamiltonian,
    von_neumann_entropy,
)

TOL_IMPL = 1e-8  # acceptance threshold for the implementation requirement

_COMPLETION_CUTOFF = 1e-6  # candidate columns closer than this to the span are skipped


@dataclass(frozen=True)
class MemoryLayout:
    """Direct-sum structure of the memory: one block of dimension d_k per outcome."""

    block_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError("block dimensions must be positive")
        object.__setattr__(self, "block_dims", dims)

    @property
    def total_dim(self) -> int:
        return sum(self.block_dims)

    @property
    def n_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def offsets(self) -> tuple:
        out, acc = [], 0
        for d in self.block_dims:
            out.append(acc)
            acc += d
        return tuple(out)

    def block_slice(self, k: int) -> slice:
        off = self.offsets[k]
        return slice(off, off + self.block_dims[k])

    def readout_projector(self, k: int) -> np.ndarray:
        q = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        sl = self.block_slice(k)
        q[sl, sl] = np.eye(self.block_dims[k])
        return q

    def is_block_diagonal(self, m: np.ndarray, tol: float = TOL_TRACE) -> bool:
        m = np.asarray(m, dtype=complex)
        mask = np.ones_like(m, dtype=bool)
        for k in range(self.n_blocks):
            sl = self.block_slice(k)
            mask[sl, sl] = False
        return float(np.max(np.abs(m[mask]))) <= tol if mask.any() else True


@dataclass(frozen=True)
class MeasurementDevice:
    """Implementation tuple (rho_M, U_SM, {Q_k}) plus the two Hamiltonians."""

    system_dim: int
    layout: MemoryLayout
    rho_m: np.ndarray
    u_sm: np.ndarray
    h_s: np.ndarray
    h_m: np.ndarray

    def __post_init__(self):
        d_s, d_m = int(self.system_dim), self.layout.total_dim
        rho_m = validate_density(self.rho_m, "rho_M")
        if rho_m.shape[0] != d_m:
            raise ValueError("rho_M does not match the memory layout")
        u = np.asarray(self.u_sm, dtype=complex)
        if u.shape != (d_s * d_m, d_s * d_m):
            raise ValueError(f"U_SM has shape {u.shape}, expected {(d_s * d_m, d_s * d_m)}")
        if unitarity_residual(u) > TOL_EIG:
            raise ValueError(f"U_SM is not unitary (residual {unitarity_residual(u):.3e})")
        h_s = validate_hamiltonian(self.h_s, "H_S")
        h_m = validate_hamiltonian(self.h_m, "H_M")
        if h_s.shape[0] != d_s or h_m.shape[0] != d_m:
            raise ValueError("Hamiltonian dimensions do not match the device")
        if not self.layout.is_block_diagonal(h_m):
            raise ValueError("H_M must be block-diagonal with respect to the memory layout")
        object.__setattr__(self, "rho_m", frozen(rho_m))
        object.__setattr__(self, "u_sm", frozen(u))
        object.__setattr__(self, "h_s", frozen(h_s))
        object.__setattr__(self, "h_m", frozen(h_m))

    @property
    def memory_dim(self) -> int:
        return self.layout.total_dim

    def readout_projector(self, k: int) -> np.ndarray:
        return self.layout.readout_projector(k)


@dataclass(frozen=True)
class StepOutcome:
    """Everything the measurement step produces for one input state."""

    probs: np.ndarray
    joint_posts: tuple          # rho'_{SM,k}, None where p_k <= TOL_PROB
    joint_avg: np.ndarray       # rho'_{SM}
    sys_post: np.ndarray        # rho'_S
    mem_post: np.ndarray        # rho'_M
    mem_posts: tuple            # rho'_{M,k}, None where p_k <= TOL_PROB


def _gram_schmidt_complete(columns: list, dim: int, candidates: np.ndarray) -> list:
    """Extend orthonormal ``columns`` to a full basis using candidate vectors.

    Candidates are taken in column order; any candidate whose residual after
    projection drops below the cutoff is skipped. A second pass with a machine
    -level cutoff picks up stragglers if the first pass leaves the basis short.
    """
    basis = [c.copy() for c in columns]
    added = []

    def try_extend(cutoff: float, pool):
        for cand in pool:
            if len(basis) == dim:
                return
            v = cand.astype(complex).copy()
            for b in basis:                 # two rounds for numerical stability
                v -= b * (b.conj() @ v)
            for b in basis:
                v -= b * (b.conj() @ v)
            norm = np.linalg.norm(v)
            if norm >= cutoff:
                v /= norm
                basis.append(v)
                added.append(v)

    pool = [candidates[:, j] for j in range(candidates.shape[1])]
    try_extend(_COMPLETION_CUTOFF, pool)
    if len(basis) < dim:
        try_extend(1e-12, pool)
    if len(basis) < dim:
        raise ValueError("unitary completion failed: candidate set does not span the space")
    return added


def canonical_device(
    instr: QuantumInstrument,
    h_s: np.ndarray | None = None,
    h_m: np.ndarray | None = None,
    extension_seed: int | None = None,
) -> MeasurementDevice:
    """Minimal dilation of an instrument into an explicit measurement device.

    Memory block k has one basis vector per Kraus operator of outcome k; the
    memory starts pure on the first basis vector of block 0 and the unitary is
    fixed on that subspace by |psi> x |m_0>  ->  sum_{k,i} (M_ki|psi>) x |k,i>,
    then completed deterministically by Gram-Schmidt over standard-basis
    columns in ascending index order. ``extension_seed`` swaps the completion
    candidates for the columns of a seeded random unitary, which yields a
    different but equally valid extension.
    """
    d_s = instr.system_dim
    layout = MemoryLayout(block_dims=instr.kraus_counts)
    d_m = layout.total_dim
    dim = d_s * d_m

    # Images of |a> x |m_0> for the system basis vectors |a>.
    offsets = layout.offsets
    defined = []
    for a in range(d_s):
        col = np.zeros(dim, dtype=complex)
        for k, ops in enumerate(instr.outcomes):
            for i, m in enumerate(ops):
                col += np.kron(m[:, a], ket(offsets[k] + i, d_m))
        defined.append(col)

    if extension_seed is None:
        candidates = np.eye(dim, dtype=complex)
    else:
        candidates = random_unitary(dim, np.random.default_rng(extension_seed))
    completion = _gram_schmidt_complete(defined, dim, candidates)

    u = np.zeros((dim, dim), dtype=complex)
    filled = iter(completion)
    for a in range(d_s):
        u[:, a * d_m] = defined[a]
    for col in range(dim):
        if col % d_m != 0:
            u[:, col] = next(filled)

    rho_m = np.zeros((d_m, d_m), dtype=complex)
    rho_m[0, 0] = 1.0
    h_s = np.zeros((d_s, d_s), dtype=complex) if h_s is None else h_s
    h_m = np.zeros((d_m, d_m), dtype=complex) if h_m is None else h_m
    return MeasurementDevice(system_dim=d_s, layout=layout, rho_m=rho_m, u_sm=u, h_s=h_s, h_m=h_m)


def measurement_step(dev: MeasurementDevice, rho_s: np.ndarray) -> StepOutcome:
    """Run the device: joint post-states, probabilities and marginals."""
    rho_s = validate_density(rho_s, "rho_S")
    if rho_s.shape[0] != dev.system_dim:
        raise ValueError(f"state dim {rho_s.shape[0]} does not match device dim {dev.system_dim}")
    d_s, d_m = dev.system_dim, dev.memory_dim
    joint = dev.u_sm @ tensor_product(rho_s, dev.rho_m) @ dag(dev.u_sm)

    probs = np.empty(dev.layout.n_blocks)
    joint_posts, mem_posts = [], []
    joint_avg = np.zeros_like(joint)
    for k in range(dev.layout.n_blocks):
        q = tensor_product(np.eye(d_s), dev.readout_projector(k))
        block = q @ joint @ dag(q)
        p = float(np.trace(block).real)
        probs[k] = max(p, 0.0)
        joint_avg += block
        if p > TOL_PROB:
            post = block / p
            joint_posts.append(frozen(post))
            mem_posts.append(frozen(partial_trace(post, [d_s, d_m], keep=[1])))
        else:
            joint_posts.append(None)
            mem_posts.append(None)
    return StepOutcome(
        probs=probs,
        joint_posts=tuple(joint_posts),
        joint_avg=frozen(joint_avg),
        sys_post=frozen(partial_trace(joint_avg, [d_s, d_m], keep=[0])),
        mem_post=frozen(partial_trace(joint_avg, [d_s, d_m], keep=[1])),
        mem_posts=tuple(mem_posts),
    )


def verify_implementation(dev: MeasurementDevice, instr: QuantumInstrument) -> float:
    """Max deviation of the implementation requirement over an operator basis.

    Both sides are linear in rho_S, so evaluating them on all matrix units
    |a><b| certifies the requirement for every input state. Returns the
    largest absolute entry-wise deviation; the device passes at <= TOL_IMPL.
    """
    if dev.system_dim != instr.system_dim or dev.layout.n_blocks != instr.n_outcomes:
        raise ValueError("device shape does not match the instrument")
    d_s, d_m = dev.system_dim, dev.memory_dim
    residual = 0.0
    qs = [tensor_product(np.eye(d_s), dev.readout_projector(k)) for k in range(instr.n_outcomes)]
    for a in range(d_s):
        for b in range(d_s):
            unit = np.zeros((d_s, d_s), dtype=complex)
            unit[a, b] = 1.0
            joint = dev.u_sm @ tensor_product(unit, dev.rho_m) @ dag(dev.u_sm)
            for k, ops in enumerate(instr.outcomes):
                lhs = partial_trace(qs[k] @ joint @ dag(qs[k]), [d_s, d_m], keep=[0])
                rhs = sum(m @ unit @ dag(m) for m in ops)
                residual = max(residual, float(np.max(np.abs(lhs - rhs))))
    return residual


def apply_feedback(step: StepOutcome, unitaries, layout: MemoryLayout, system_dim: int) -> np.ndarray:
    """Outcome-conditioned feedback sum_k (V_k x Q_k) rho'_SM (V_k x Q_k)^dag."""
    if len(unitaries) != layout.n_blocks:
        raise ValueError("need exactly one feedback unitary per outcome")
    total = np.zeros_like(step.joint_avg)
    for k, v in enumerate(unitaries):
        v = np.asarray(v, dtype=complex)
        if v.shape != (system_dim, system_dim) or unitarity_residual(v) > TOL_EIG:
            raise ValueError(f"feedback operator {k} is not a unitary on the system")
        w = tensor_product(v, layout.readout_projector(k))
        total += w @ step.joint_avg @ dag(w)
    return total


# Zero-cost dephasing of the memory blocks via an environment.

def heisenberg_weyl_unitaries(d: int) -> list:
    """The d^2 shift-and-phase unitaries V_{l,m}, (l, m) lexicographic.

    V_{l,m} = sum_r exp(2 pi i r m / d) |l + r mod d><r|; they satisfy
    tr[V_{l,m} V_{s,t}^dag] = d delta_{ls} delta_{mt}.
    """
    out = []
    omega = np.exp(2j * np.pi / d)
    for l in range(d):
        for m in range(d):
            v = np.zeros((d, d), dtype=complex)
            for r in range(d):
                v[(l + r) % d, r] = omega ** (r * m)
            out.append(v)
    return out


@dataclass(frozen=True)
class DephasingDilation:
    """Unitary environment model of the block-dephasing channel."""

    layout: MemoryLayout
    u_me: np.ndarray
    h_e: np.ndarray
    sigma_e: np.ndarray


def dephasing_device(layout: MemoryLayout, d_e: int) -> DephasingDilation:
    """Energy-free dilation of sigma -> sum_k Q_k sigma Q_k.

    Uses a maximally mixed environment (H_E = 0) and U_ME = sum_k Q_k x V_k
    with distinct shift-and-phase unitaries V_k; requires d_e^2 >= #blocks.
    """
    k_count = layout.n_blocks
    if d_e * d_e < k_count:
        raise ValueError(f"environment dim {d_e} too small for {k_count} blocks (need d_e^2 >= K)")
    vs = heisenberg_weyl_unitaries(d_e)[:k_count]
    u = np.zeros((layout.total_dim * d_e,) * 2, dtype=complex)
    for k, v in enumerate(vs):
        u += tensor_product(layout.readout_projector(k), v)
    return DephasingDilation(
        layout=layout,
        u_me=frozen(u),
        h_e=frozen(np.zeros((d_e, d_e))),
        sigma_e=frozen(np.eye(d_e) / d_e),
    )


def admissible_dephasing_dilation(layout: MemoryLayout, h_e: np.ndarray, seed: int) -> DephasingDilation:
    """Random dilation of the dephasing channel with a thermal environment.

    For any full-rank sigma_E, cyclic shifts in its eigenbasis (optionally
    phased) satisfy the admissibility condition tr[V_i sigma_E V_j^dag] =
    delta_ij; this draws random phases per block. Needs d_E >= #blocks.
    """
    h_e = validate_hamiltonian(h_e, "H_E")
    d_e = h_e.shape[0]
    if d_e < layout.n_blocks:
        raise ValueError("thermal-shift construction needs d_E >= number of blocks")
    rng = np.random.default_rng(seed)
    _, evecs = hermitian_eig(h_e)
    u = np.zeros((layout.total_dim * d_e,) * 2, dtype=complex)
    for k in range(layout.n_blocks):
        shift = np.zeros((d_e, d_e), dtype=complex)
        phases = np.exp(2j * np.pi * rng.random(d_e))
        for r in range(d_e):
            shift[(k + r) % d_e, r] = phases[r]
        v = evecs @ shift @ dag(evecs)
        u += tensor_product(layout.readout_projector(k), v)
    return DephasingDilation(layout=layout, u_me=frozen(u), h_e=frozen(h_e), sigma_e=frozen(thermal_state(h_e)))


def dephasing_channel_residual(dil: DephasingDilation, n_samples: int = 0, seed: int = 0) -> float:
    """Max deviation of tr_E[U (sigma x sigma_E) U^dag] from sum_k Q_k sigma Q_k.

    Checked on the full matrix-unit basis of the memory (sufficient by
    linearity); extra random density samples can be added on top.
    """
    d_m = dil.layout.total_dim
    d_e = dil.sigma_e.shape[0]
    qs = [dil.layout.readout_projector(k) for k in range(dil.layout.n_blocks)]

    def one(sigma_m: np.ndarray) -> float:
        joint = dil.u_me @ tensor_product(sigma_m, dil.sigma_e) @ dag(dil.u_me)
        lhs = partial_trace(joint, [d_m, d_e], keep=[0])
        rhs = sum(q @ sigma_m @ q for q in qs)
        return float(np.max(np.abs(lhs - rhs)))

    residual = 0.0
    for a in range(d_m):
        for b in range(d_m):
            unit = np.zeros((d_m, d_m), dtype=complex)
            unit[a, b] = 1.0
            residual = max(residual, one(unit))
    rng = np.random.default_rng(seed)
    for _ in range(n_samples):
        residual = max(residual, one(random_density(d_m, rng)))
    return residual


def dephasing_cost(dil: DephasingDilation, sigma_m: np.ndarray, h_m: np.ndarray | None = None) -> float:
    """Average energy change of M+E under the dilation unitary, in k_B*T."""
    sigma_m = validate_density(sigma_m, "sigma_M")
    d_m = dil.layout.total_dim
    h_m = np.zeros((d_m, d_m), dtype=complex) if h_m is None else validate_hamiltonian(h_m, "H_M")
    if not dil.layout.is_block_diagonal(h_m):
        raise ValueError("H_M must be block-diagonal with respect to the memory layout")
    d_e = dil.sigma_e.shape[0]
    h_total = tensor_product(h_m, np.eye(d_e)) + tensor_product(np.eye(d_m), dil.h_e)
    before = tensor_product(sigma_m, dil.sigma_e)
    after = dil.u_me @ before @ dag(dil.u_me)
    return float(np.trace(h_total @ (after - before)).real)


@dataclass(frozen=True)
class Lemma1Report:
    """Structure of a projective device's memory marginal.

    ``sigma_m`` are the per-outcome memory states extracted by feeding pure
    states from each projector's support; the residuals certify the convex
    decomposition rho'_M = sum_k p_k sigma_{M,k}, block support, and the
    equal-entropy property S(sigma_{M,k}) = S(rho_M).
    """

    sigma_m: tuple
    decomposition_residual: float
    orthogonality_residual: float
    entropy_residual: float


def lemma1_check(
    dev: MeasurementDevice,
    instr: QuantumInstrument,
    n_states: int = 10,
    seed: int = 7,
) -> Lemma1Report:
    if not is_projective(instr):
        raise ValueError("the structural check applies to projective instruments only")
    if verify_implementation(dev, instr) > TOL_IMPL:
        raise ValueError("device does not implement the given projective instrument")
    d_s, d_m = dev.system_dim, dev.memory_dim

    sigmas = []
    for (p_k,) in instr.outcomes:
        evals, evecs = hermitian_eig(p_k)
        psi = evecs[:, np.argmax(evals)]            # pure state inside supp(P_k)
        joint = dev.u_sm @ tensor_product(np.outer(psi, psi.conj()), dev.rho_m) @ dag(dev.u_sm)
        sigmas.append(partial_trace(joint, [d_s, d_m], keep=[1]))

    ortho = max(
        float(np.max(np.abs(dev.readout_projector(k) @ s @ dev.readout_projector(k) - s)))
        for k, s in enumerate(sigmas)
    )
    base_entropy = von_neumann_entropy(dev.rho_m)
    entropy = max(abs(von_neumann_entropy(s) - base_entropy) for s in sigmas)

    rng = np.random.default_rng(seed)
    decomposition = 0.0
    for _ in range(n_states):
        rho = random_pure_state(d_s, rng) if rng.random() < 0.5 else random_density(d_s, rng)
        step = measurement_step(dev, rho)
        predicted = sum(
            float(np.trace(p_k @ rho).real) * s for (p_k,), s in zip(instr.outcomes, sigmas)
        )
        decomposition = max(decomposition, float(np.max(np.abs(step.mem_post - predicted))))
    return Lemma1Report(
        sigma_m=tuple(frozen(s) for s in sigmas),
        decomposition_residual=decomposition,
        orthogonality_residual=ortho,
        entropy_residual=entropy,
    )
