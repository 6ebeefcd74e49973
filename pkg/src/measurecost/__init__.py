"""measurecost: energy cost of quantum measurements from explicit devices.

The package models a measurement as a physical device (memory, system-memory
unitary, readout projections), computes exact operating costs and the
implementation-independent bounds on them, and reproduces three protocol
studies end to end: stabilisation by repeated measurement, five-qubit
error-correction syndrome extraction under damping noise, and a device pair
demonstrating energy extraction from an inefficient measurement.
"""

from .devices import (
    DephasingDilation,
    Lemma1Report,
    MeasurementDevice,
    MemoryLayout,
    StepOutcome,
    admissible_dephasing_dilation,
    apply_feedback,
    canonical_device,
    dephasing_channel_residual,
    dephasing_cost,
    dephasing_device,
    heisenberg_weyl_unitaries,
    lemma1_check,
    measurement_step,
    verify_implementation,
)
from .energetics import (
    DecompositionTerms,
    EnergyReport,
    FaistComparison,
    SecondLawReport,
    bound_general,
    cost_exact,
    cost_projective,
    decomposition,
    delta_e_s,
    energy_report,
    extractable,
    faist_compare,
    ineff_bound,
    second_law_check,
)
from .instruments import (
    MeasurementResult,
    Povm,
    QuantumInstrument,
    amplitude_damping,
    apply_channel,
    apply_instrument,
    channel_tensor_power,
    inefficiency,
    instrument_from_dict,
    instrument_to_dict,
    is_projective,
    povm_of,
    projective_instrument,
    random_instrument,
)
from .linalg import (
    free_energy,
    hermitian_eig,
    mutual_information,
    operator_norm,
    partial_trace,
    relative_entropy,
    shannon_entropy,
    tensor_product,
    thermal_state,
    von_neumann_entropy,
)
from .verify import PropertyCheck, run_property_suite

__version__ = "0.1.0"
