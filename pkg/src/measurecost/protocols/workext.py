"""The qubit device pair that shows measurement can yield useful energy.

Both devices share a two-qubit memory M_A x M_B prepared in
|0><0| x 1/2 and read the outcome from M_A, so they produce identical
outcome statistics. The efficient one copies the spin-z outcome into M_A
(a plain projective measurement, never yielding energy); the inefficient
one additionally swaps the system with the mixed half M_B before readout,
which lets it output up to k_B T ln2 on basis-state inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..devices import MeasurementDevice, MemoryLayout
from ..energetics import EnergyReport, energy_report
from ..instruments import QuantumInstrument, projective_instrument
from ..linalg import ket, projector, tensor_product, validate_density

# Basis order on S x M_A x M_B; memory index m = 2*m_A + m_B, so the
# readout blocks {m_A = k} are contiguous as MemoryLayout requires.
_LAYOUT = MemoryLayout(block_dims=(2, 2))


def _copy_unitary() -> np.ndarray:
    """|s, m_A, m_B> -> |s, m_A + s mod 2, m_B>, the outcome-copy interaction."""
    u = np.zeros((8, 8), dtype=complex)
    for s in range(2):
        for m_a in range(2):
            for m_b in range(2):
                u[4 * s + 2 * ((m_a + s) % 2) + m_b, 4 * s + 2 * m_a + m_b] = 1.0
    return u


def _swap_s_mb() -> np.ndarray:
    u = np.zeros((8, 8), dtype=complex)
    for s in range(2):
        for m_a in range(2):
            for m_b in range(2):
                u[4 * m_b + 2 * m_a + s, 4 * s + 2 * m_a + m_b] = 1.0
    return u


def _memory_state() -> np.ndarray:
    return tensor_product(projector(ket(0, 2)), np.eye(2) / 2.0)


def efficient_device() -> tuple[MeasurementDevice, QuantumInstrument]:
    """Spin-z projective measurement with the shared two-qubit memory."""
    dev = MeasurementDevice(
        system_dim=2,
        layout=_LAYOUT,
        rho_m=_memory_state(),
        u_sm=_copy_unitary(),
        h_s=np.zeros((2, 2)),
        h_m=np.zeros((4, 4)),
    )
    instr = projective_instrument([projector(ket(0, 2)), projector(ket(1, 2))])
    return dev, instr


def inefficient_device() -> tuple[MeasurementDevice, QuantumInstrument]:
    """Same statistics, but the system is traded for the mixed memory half."""
    dev = MeasurementDevice(
        system_dim=2,
        layout=_LAYOUT,
        rho_m=_memory_state(),
        u_sm=_swap_s_mb() @ _copy_unitary(),
        h_s=np.zeros((2, 2)),
        h_m=np.zeros((4, 4)),
    )
    kraus = tuple(
        tuple(np.outer(ket(i, 2), ket(k, 2).conj()) / np.sqrt(2.0) for i in range(2))
        for k in range(2)
    )
    instr = QuantumInstrument(system_dim=2, outcomes=kraus)
    return dev, instr


@dataclass(frozen=True)
class WorkExtractionPair:
    efficient: EnergyReport
    inefficient: EnergyReport


def workext_pair(rho_s: np.ndarray) -> WorkExtractionPair:
    """Full energy reports of both devices on one qubit state."""
    rho_s = validate_density(rho_s, "rho_S")
    if rho_s.shape[0] != 2:
        raise ValueError("the device pair measures a single qubit")
    dev_eff, instr_eff = efficient_device()
    dev_ineff, instr_ineff = inefficient_device()
    return WorkExtractionPair(
        efficient=energy_report(dev_eff, instr_eff, rho_s),
        inefficient=energy_report(dev_ineff, instr_ineff, rho_s),
    )
