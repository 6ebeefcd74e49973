"""Dense complex linear algebra and entropy primitives.

All energies are expressed in multiples of k_B*T, i.e. beta = 1 internally,
and every entropy uses the natural logarithm.
"""

from __future__ import annotations

import numpy as np

# Numerical tolerances shared across the package.
TOL_HERM = 1e-9     # hermiticity residual, relative to matrix magnitude
TOL_TRACE = 1e-9    # trace / completeness residual
TOL_PSD = 1e-10     # eigenvalue cutoff: below this a spectrum value counts as 0
TOL_EIG = 1e-9      # reconstruction / consistency residual
TOL_PROB = 1e-12    # outcome probabilities at or below this have no post-state

LN2 = float(np.log(2.0))

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def frozen(m) -> np.ndarray:
    """Return a read-only complex copy of ``m``."""
    a = np.array(m, dtype=complex)
    a.setflags(write=False)
    return a


def dag(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec: np.ndarray) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def _magnitude(m: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(m))) if m.size else 0.0)


def hermiticity_residual(m: np.ndarray) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m - dag(m)))) / _magnitude(m)


def is_hermitian(m: np.ndarray, tol: float = TOL_HERM) -> bool:
    return hermiticity_residual(m) <= tol


def unitarity_residual(m: np.ndarray) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(dag(m) @ m - np.eye(m.shape[0]))))


def is_unitary(m: np.ndarray, tol: float = TOL_EIG) -> bool:
    return unitarity_residual(m) <= tol


def is_projector(m: np.ndarray, tol: float = TOL_TRACE) -> bool:
    m = np.asarray(m, dtype=complex)
    return is_hermitian(m, tol) and float(np.max(np.abs(m @ m - m))) <= tol


def validate_density(rho: np.ndarray, name: str = "rho") -> np.ndarray:
    """Check Hermiticity, positivity and unit trace; return a complex array.

    Raises ValueError describing the first violated invariant.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError(f"{name} contains non-finite entries")
    if not is_hermitian(rho):
        raise ValueError(f"{name} is not Hermitian (residual {hermiticity_residual(rho):.2e})")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > TOL_TRACE:
        raise ValueError(f"{name} has trace {tr!r}, expected 1")
    evals = np.linalg.eigvalsh((rho + dag(rho)) / 2)
    if evals[0] < -TOL_PSD:
        raise ValueError(f"{name} has negative eigenvalue {evals[0]:.3e}")
    return rho


def validate_hamiltonian(h: np.ndarray, name: str = "H") -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {h.shape}")
    if not is_hermitian(h):
        raise ValueError(f"{name} is not Hermitian (residual {hermiticity_residual(h):.2e})")
    return h


def validate_prob_dist(p, name: str = "p") -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if np.any(p < -TOL_PSD):
        raise ValueError(f"{name} has a negative weight {p.min():.3e}")
    if abs(float(p.sum()) - 1.0) > TOL_TRACE:
        raise ValueError(f"{name} sums to {float(p.sum())!r}, expected 1")
    return np.clip(p, 0.0, None)


def tensor_product(*matrices: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left-to-right."""
    out = np.asarray(matrices[0], dtype=complex)
    for m in matrices[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def partial_trace(m: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``dims`` lists the factor dimensions of the underlying product space and
    ``keep`` the indices of the factors to retain (in their original order).
    """
    m = np.asarray(m, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ValueError(f"matrix of shape {m.shape} does not match dims {dims}")
    keep = sorted(int(k) for k in (keep if np.iterable(keep) else [keep]))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} factors")

    n = len(dims)
    tensor = m.reshape(dims + dims)
    # Contract the discarded factors pairwise (row index against column index).
    traced = 0
    for idx in range(n):
        if idx in keep:
            continue
        axis_row = idx - traced
        axis_col = axis_row + (n - traced)
        tensor = np.trace(tensor, axis1=axis_row, axis2=axis_col)
        traced += 1
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return tensor.reshape(kept_dim, kept_dim)


def hermitian_eig(m: np.ndarray):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector matrix with eigenvectors as
    columns). Raises ValueError on non-Hermitian input.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError(f"matrix is not Hermitian (residual {hermiticity_residual(m):.2e})")
    evals, evecs = np.linalg.eigh((m + dag(m)) / 2)
    return evals, evecs


def _clamped_spectrum(rho: np.ndarray) -> np.ndarray:
    evals = np.linalg.eigvalsh((np.asarray(rho, dtype=complex) + dag(rho)) / 2).real
    evals[evals < TOL_PSD] = 0.0
    return evals


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -tr[rho ln rho] in nats, with 0*ln(0) = 0."""
    lam = _clamped_spectrum(validate_density(rho))
    pos = lam[lam > 0.0]
    s = float(-(pos * np.log(pos)).sum())
    return abs(s) if s == 0.0 else s  # avoid -0.0


def shannon_entropy(p) -> float:
    """H({p_k}) = -sum p_k ln p_k in nats."""
    p = np.asarray(p, dtype=float)
    pos = p[p > 0.0]
    s = float(-(pos * np.log(pos)).sum())
    return abs(s) if s == 0.0 else s  # avoid -0.0


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """D(rho||sigma) = tr[rho (ln rho - ln sigma)], +inf outside supp(sigma)."""
    rho = validate_density(rho, "rho")
    sigma = validate_density(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise ValueError("relative_entropy: dimension mismatch")
    lam, v = hermitian_eig(rho)
    mu, w = hermitian_eig(sigma)
    lam = np.clip(lam.real, 0.0, None)
    mu = mu.real
    overlap = np.abs(dag(v) @ w) ** 2  # overlap[i, j] = |<v_i|w_j>|^2
    support_leak = float(lam @ overlap[:, mu <= TOL_PSD].sum(axis=1)) if np.any(mu <= TOL_PSD) else 0.0
    if support_leak > TOL_EIG:
        return float("inf")
    pos_l = lam > TOL_PSD
    term1 = float((lam[pos_l] * np.log(lam[pos_l])).sum())
    pos_m = mu > TOL_PSD
    term2 = float(lam @ (overlap[:, pos_m] @ np.log(mu[pos_m])))
    return term1 - term2


def mutual_information(rho_ab: np.ndarray, dim_a: int, dim_b: int) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) for a bipartite state."""
    rho_ab = validate_density(rho_ab, "rho_ab")
    if rho_ab.shape[0] != dim_a * dim_b:
        raise ValueError(f"state of dim {rho_ab.shape[0]} is not {dim_a}x{dim_b} bipartite")
    rho_a = partial_trace(rho_ab, [dim_a, dim_b], keep=[0])
    rho_b = partial_trace(rho_ab, [dim_a, dim_b], keep=[1])
    return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(rho_ab)


def free_energy(rho: np.ndarray, h: np.ndarray) -> float:
    """F(rho) = tr[rho H] - S(rho), in k_B*T units (beta = 1)."""
    rho = validate_density(rho)
    h = validate_hamiltonian(h)
    if rho.shape != h.shape:
        raise ValueError("free_energy: dimension mismatch")
    return float(np.trace(rho @ h).real) - von_neumann_entropy(rho)


def thermal_state(h: np.ndarray) -> np.ndarray:
    """exp(-H)/Z at beta = 1, via eigendecomposition."""
    h = validate_hamiltonian(h)
    evals, evecs = hermitian_eig(h)
    w = np.exp(-(evals - evals.min()))  # shift cancels in the normalisation
    w /= w.sum()
    return (evecs * w) @ dag(evecs)


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(m, dtype=complex), 2))


# Seeded generators used by property suites and stochastic checks.

def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return projector(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ dag(a)
    return rho / np.trace(rho).real


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + dag(a)) / 2
