"""Quantum instruments: outcome-indexed Kraus families, POVMs and noise channels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    TOL_PROB,
    TOL_PSD,
    TOL_TRACE,
    dag,
    frozen,
    ket,
    tensor_product,
    validate_density,
)


@dataclass(frozen=True)
class QuantumInstrument:
    """A measurement as an outcome-indexed family of Kraus operators.

    ``outcomes[k]`` holds the Kraus operators of outcome k; completeness
    sum_{k,i} M_ki^dag M_ki = 1 is enforced at construction.
    """

    system_dim: int
    outcomes: tuple

    def __post_init__(self):
        d = int(self.system_dim)
        if d < 1:
            raise ValueError("system_dim must be positive")
        if not self.outcomes:
            raise ValueError("instrument needs at least one outcome")
        outs = []
        acc = np.zeros((d, d), dtype=complex)
        for k, kraus_list in enumerate(self.outcomes):
            if len(kraus_list) == 0:
                raise ValueError(f"outcome {k} has no Kraus operators")
            ops = []
            for m in kraus_list:
                m = np.asarray(m, dtype=complex)
                if m.shape != (d, d):
                    raise ValueError(f"Kraus operator of outcome {k} has shape {m.shape}, expected {(d, d)}")
                acc += dag(m) @ m
                ops.append(frozen(m))
            outs.append(tuple(ops))
        residual = float(np.max(np.abs(acc - np.eye(d))))
        if residual > TOL_TRACE:
            raise ValueError(f"completeness violated: residual {residual:.3e}")
        object.__setattr__(self, "outcomes", tuple(outs))

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    @property
    def kraus_counts(self) -> tuple:
        return tuple(len(ops) for ops in self.outcomes)


@dataclass(frozen=True)
class Povm:
    """Positive operators summing to the identity."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(frozen(e) for e in self.elements)
        dim = elems[0].shape[0]
        total = sum(elems)
        if np.max(np.abs(total - np.eye(dim))) > TOL_TRACE:
            raise ValueError("POVM elements do not sum to the identity")
        for e in elems:
            if np.linalg.eigvalsh((e + dag(e)) / 2)[0] < -TOL_PSD:
                raise ValueError("POVM element is not positive semidefinite")
        object.__setattr__(self, "elements", elems)


@dataclass(frozen=True)
class MeasurementResult:
    """Outcome probabilities and (normalised) post-measurement states.

    Outcomes with probability at or below TOL_PROB carry ``None`` instead of
    a normalised post-state.
    """

    probs: np.ndarray
    post_states: tuple
    average_post: np.ndarray


def apply_instrument(instr: QuantumInstrument, rho: np.ndarray) -> MeasurementResult:
    """Apply an instrument: p_k = tr T_k(rho), post states T_k(rho)/p_k."""
    rho = validate_density(rho)
    if rho.shape[0] != instr.system_dim:
        raise ValueError(f"state dim {rho.shape[0]} does not match instrument dim {instr.system_dim}")
    probs = np.empty(instr.n_outcomes)
    posts = []
    average = np.zeros_like(rho)
    for k, ops in enumerate(instr.outcomes):
        t_k = sum(m @ rho @ dag(m) for m in ops)
        p = float(np.trace(t_k).real)
        probs[k] = max(p, 0.0)
        average += t_k
        posts.append(frozen(t_k / p) if p > TOL_PROB else None)
    return MeasurementResult(probs=probs, post_states=tuple(posts), average_post=frozen(average))


def povm_of(instr: QuantumInstrument) -> Povm:
    """POVM induced by the instrument, E_k = sum_i M_ki^dag M_ki."""
    return Povm(elements=tuple(sum(dag(m) @ m for m in ops) for ops in instr.outcomes))


def _choi_rank(ops) -> int:
    # Kraus rank of one outcome map, independent of the given representation:
    # rank of the Gram matrix G_ij = tr[M_i^dag M_j] (= rank of the Choi block).
    gram = np.array([[np.trace(dag(a) @ b) for b in ops] for a in ops])
    svals = np.linalg.svd(gram, compute_uv=False)
    return int(np.count_nonzero(svals > TOL_PSD))


def inefficiency(instr: QuantumInstrument) -> int:
    """Maximal per-outcome Kraus rank (1 for efficient measurements)."""
    return max(_choi_rank(ops) for ops in instr.outcomes)


def projective_instrument(projectors) -> QuantumInstrument:
    """Instrument {P_k} from a complete family of orthogonal projectors."""
    mats = [np.asarray(p, dtype=complex) for p in projectors]
    dim = mats[0].shape[0]
    for k, p in enumerate(mats):
        if p.shape != (dim, dim):
            raise ValueError("projectors must share one square shape")
        if np.max(np.abs(p - dag(p))) > TOL_TRACE or np.max(np.abs(p @ p - p)) > TOL_TRACE:
            raise ValueError(f"element {k} is not an orthogonal projector")
    if np.max(np.abs(sum(mats) - np.eye(dim))) > TOL_TRACE:
        raise ValueError("projectors do not sum to the identity")
    return QuantumInstrument(system_dim=dim, outcomes=tuple((p,) for p in mats))


def is_projective(instr: QuantumInstrument) -> bool:
    if any(len(ops) != 1 for ops in instr.outcomes):
        return False
    return all(
        np.max(np.abs(m - dag(m))) <= TOL_TRACE and np.max(np.abs(m @ m - m)) <= TOL_TRACE
        for (m,) in instr.outcomes
    )


def amplitude_damping(gamma: float) -> QuantumInstrument:
    """Single-qubit excitation-loss channel of strength gamma, as a 1-outcome instrument."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    j1 = np.sqrt(gamma) * np.outer(ket(0, 2), ket(1, 2).conj())
    j2 = np.diag([1.0, np.sqrt(1.0 - gamma)]).astype(complex)
    return QuantumInstrument(system_dim=2, outcomes=((j1, j2),))


def channel_tensor_power(ch: QuantumInstrument, n: int) -> QuantumInstrument:
    """n-fold tensor power of a 1-outcome channel (Kraus sets multiply out)."""
    if ch.n_outcomes != 1:
        raise ValueError("tensor power is defined for 1-outcome channels")
    if n < 1:
        raise ValueError("n must be at least 1")
    if ch.system_dim ** n > 1024:
        raise ValueError(f"tensor power dimension {ch.system_dim ** n} exceeds the 2^10 limit")
    ops = list(ch.outcomes[0])
    out = ops
    for _ in range(n - 1):
        out = [tensor_product(a, b) for a in out for b in ops]
    return QuantumInstrument(system_dim=ch.system_dim ** n, outcomes=(tuple(out),))


def apply_channel(ch: QuantumInstrument, rho: np.ndarray) -> np.ndarray:
    """Total channel action sum_{k,i} M_ki rho M_ki^dag (ignores outcomes)."""
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for ops in ch.outcomes:
        for m in ops:
            out += m @ rho @ dag(m)
    return out


def random_instrument(system_dim: int, outcome_count: int, kraus_per_outcome: int, seed: int) -> QuantumInstrument:
    """Seeded random instrument with completeness holding by construction.

    Draws a random isometry from the system space into system x (outcomes *
    kraus_per_outcome) by orthonormalising complex Gaussian columns, then
    slices it into Kraus blocks.
    """
    if min(system_dim, outcome_count, kraus_per_outcome) < 1:
        raise ValueError("all counts must be at least 1")
    rng = np.random.default_rng(seed)
    blocks = outcome_count * kraus_per_outcome
    z = rng.normal(size=(system_dim * blocks, system_dim)) + 1j * rng.normal(size=(system_dim * blocks, system_dim))
    q, _ = np.linalg.qr(z)
    kraus = [q[b * system_dim:(b + 1) * system_dim, :] for b in range(blocks)]
    outcomes = tuple(
        tuple(kraus[k * kraus_per_outcome + i] for i in range(kraus_per_outcome))
        for k in range(outcome_count)
    )
    return QuantumInstrument(system_dim=system_dim, outcomes=outcomes)


# JSON wire format: {"dim": n, "outcomes": [[flat row-major [re, im] pairs, ...], ...]}

def _matrix_to_pairs(m: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(m, dtype=complex).reshape(-1)]


def _pairs_to_matrix(pairs, dim: int) -> np.ndarray:
    flat = np.array([complex(re, im) for re, im in pairs], dtype=complex)
    if flat.size != dim * dim:
        raise ValueError(f"matrix entry list has length {flat.size}, expected {dim * dim}")
    return flat.reshape(dim, dim)


def instrument_to_dict(instr: QuantumInstrument) -> dict:
    return {
        "dim": instr.system_dim,
        "outcomes": [[_matrix_to_pairs(m) for m in ops] for ops in instr.outcomes],
    }


def instrument_from_dict(data: dict) -> QuantumInstrument:
    try:
        dim = int(data["dim"])
        outcomes = tuple(
            tuple(_pairs_to_matrix(m, dim) for m in ops) for ops in data["outcomes"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed instrument description: {exc}") from exc
    return QuantumInstrument(system_dim=dim, outcomes=outcomes)


def density_to_dict(rho: np.ndarray) -> dict:
    rho = np.asarray(rho, dtype=complex)
    return {"dim": rho.shape[0], "matrix": _matrix_to_pairs(rho)}


def density_from_dict(data: dict) -> np.ndarray:
    try:
        dim = int(data["dim"])
        rho = _pairs_to_matrix(data["matrix"], dim)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state description: {exc}") from exc
    return validate_density(rho)
