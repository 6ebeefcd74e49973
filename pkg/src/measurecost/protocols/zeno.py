"""Cost of stabilising a qubit by repeated projective measurement.

The qubit starts in |0> and drifts under H_S = E*sigma_X; measuring in the
computational basis N times over the run restores it to |0> or |1> at each
step, so the per-step cost is just the binary entropy of the accumulated
error probability. ``theta_total`` is the dimensionless drive angle E*t/hbar.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..devices import canonical_device
from ..energetics import cost_exact
from ..instruments import projective_instrument
from ..linalg import ket, projector, shannon_entropy

ASYMPTOTIC_CONSTANT = 4.5  # rounded value of e^{3/2} used in the closed form


@dataclass(frozen=True)
class ZenoConfig:
    theta_total: float
    steps: int

    def __post_init__(self):
        if self.theta_total <= 0:
            raise ValueError("theta_total must be positive")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")


@dataclass(frozen=True)
class ZenoResult:
    errors: np.ndarray        # eps_n for n = 1..N
    per_step_cost: np.ndarray
    total_cost: float
    fidelity: float           # 1 - eps_N
    asymptotic_cost: float    # (theta^2 / 2) ln[4.5 / (1 - F)]


def zeno_run(cfg: ZenoConfig) -> ZenoResult:
    """Iterate the exact error recursion and sum the per-step entropies."""
    x = cfg.theta_total / cfg.steps
    cos2, sin2 = np.cos(x) ** 2, np.sin(x) ** 2
    errors = np.empty(cfg.steps)
    eps = 0.0
    for n in range(cfg.steps):
        eps = eps * cos2 + (1.0 - eps) * sin2
        errors[n] = eps
    costs = np.array([shannon_entropy([e, 1.0 - e]) for e in errors])
    fidelity = 1.0 - errors[-1]
    asymptotic = (cfg.theta_total ** 2 / 2.0) * np.log(ASYMPTOTIC_CONSTANT / (1.0 - fidelity))
    return ZenoResult(
        errors=errors,
        per_step_cost=costs,
        total_cost=float(costs.sum()),
        fidelity=fidelity,
        asymptotic_cost=float(asymptotic),
    )


def closed_form_error(cfg: ZenoConfig, n: int) -> float:
    """eps_n = (1 - cos(2 theta / N)^n) / 2, the recursion's solution."""
    return 0.5 * (1.0 - np.cos(2.0 * cfg.theta_total / cfg.steps) ** n)


def zeno_device_crosscheck(cfg: ZenoConfig, sample_steps) -> float:
    """Compare the per-step entropy formula against an explicit device run.

    For each sampled step the diagonal state diag(1 - eps_n, eps_n) is fed to
    the canonical computational-basis device; returns the max cost deviation.
    """
    result = zeno_run(cfg)
    dev = canonical_device(projective_instrument([projector(ket(0, 2)), projector(ket(1, 2))]))
    residual = 0.0
    for n in sorted(set(int(s) for s in sample_steps)):
        if not 1 <= n <= cfg.steps:
            raise ValueError(f"sample step {n} outside 1..{cfg.steps}")
        eps = result.errors[n - 1]
        rho = np.diag([1.0 - eps, eps]).astype(complex)
        residual = max(residual, abs(cost_exact(dev, rho) - result.per_step_cost[n - 1]))
    return residual
