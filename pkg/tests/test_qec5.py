import numpy as np
import pytest

from measurecost.devices import canonical_device, measurement_step
from measurecost.instruments import apply_instrument
from measurecost.linalg import LN2, PAULI_X, projector, tensor_product
from measurecost.protocols.qec5 import (
    codewords,
    correction_unitaries,
    gap_decomposition,
    logical_state,
    single_point,
    stabilisers,
    sweep,
    syndrome_instrument,
)


class TestCodewords:
    def test_normalised_and_orthogonal(self):
        zero, one = codewords()
        assert abs(np.linalg.norm(zero) - 1.0) < 1e-12
        assert abs(np.linalg.norm(one) - 1.0) < 1e-12
        assert abs(zero.conj() @ one) < 1e-12

    def test_stabiliser_eigenvectors(self):
        zero, one = codewords()
        for s in stabilisers():
            assert np.linalg.norm(s @ zero - zero) < 1e-12
            assert np.linalg.norm(s @ one - one) < 1e-12

    def test_transversal_x_maps_between_codewords(self):
        # observed convention: X^x5 |0_L> equals |1_L> with a plus sign
        zero, one = codewords()
        x5 = tensor_product(*([PAULI_X] * 5))
        assert np.linalg.norm(x5 @ zero - one) < 1e-12

    def test_logical_state_normalisation_guard(self):
        with pytest.raises(ValueError, match="expected 1"):
            logical_state(1.0, 1.0)


class TestSyndromeInstrument:
    def test_sixteen_rank_two_projectors(self):
        instr = syndrome_instrument()
        assert instr.n_outcomes == 16
        total = np.zeros((32, 32), dtype=complex)
        for (p,) in instr.outcomes:
            assert abs(np.trace(p).real - 2.0) < 1e-9
            total += p
        assert np.max(np.abs(total - np.eye(32))) < 1e-9

    def test_stabilisers_commute(self):
        gens = stabilisers()
        for a in gens:
            for b in gens:
                assert np.max(np.abs(a @ b - b @ a)) < 1e-12

    def test_trivial_syndrome_projects_onto_code_space(self):
        instr = syndrome_instrument()
        p0 = instr.outcomes[0][0]
        for vec in codewords():
            assert np.linalg.norm(p0 @ vec - vec) < 1e-10

    def test_outcome_index_encodes_syndrome_bits(self):
        # outcome 8 = bits (1,0,0,0): -1 for the first stabiliser, +1 otherwise
        instr = syndrome_instrument()
        gens = stabilisers()
        p8 = instr.outcomes[8][0]
        assert np.max(np.abs(gens[0] @ p8 + p8)) < 1e-9
        for g in gens[1:]:
            assert np.max(np.abs(g @ p8 - p8)) < 1e-9


class TestCorrections:
    def test_bijection_onto_nonzero_syndromes(self):
        table = correction_unitaries()
        assert len(table) == 16
        assert all(v is not None for v in table)
        assert np.array_equal(table[0], np.eye(32))

    def test_every_single_error_is_repaired(self):
        # inject each single-qubit Pauli, measure, correct, expect the codeword back
        psi = logical_state(1.0, 0.0)
        instr = syndrome_instrument()
        table = correction_unitaries()
        paulis = {"X": PAULI_X, "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1]).astype(complex)}
        for qubit in range(5):
            for name, op in paulis.items():
                error = tensor_product(*[op if q == qubit else np.eye(2) for q in range(5)])
                corrupted = error @ psi
                result = apply_instrument(instr, projector(corrupted))
                s = int(np.argmax(result.probs))
                assert result.probs[s] > 1.0 - 1e-9  # deterministic syndrome
                repaired = table[s] @ corrupted
                assert abs(abs(repaired.conj() @ psi) - 1.0) < 1e-9


class TestSweep:
    def test_noiseless_endpoint(self):
        row = single_point(logical_state(1.0, 0.0), 0.0)
        for value in (row.e_proj, row.e_sep, row.e_su, row.e_lan):
            assert abs(value) < 1e-9
        assert abs(row.recovered_fidelity - 1.0) < 1e-9

    def test_full_damping_endpoint(self):
        row = single_point(logical_state(1.0, 0.0), 1.0)
        assert abs(row.e_proj - 4 * LN2) < 1e-6  # uniform over the 16 syndromes
        assert row.e_lan < 0.0

    def test_ordering_chain_on_grid(self):
        rows = sweep(logical_state(1.0, 0.0), np.linspace(0.0, 1.0, 9))
        for row in rows:
            assert row.e_lan <= row.e_su + 1e-9
            assert row.e_su <= row.e_proj + 1e-9
            assert row.e_proj <= row.e_sep + 1e-9

    def test_marginals_consistent_with_joint(self):
        row = single_point(logical_state(1.0, 0.0), 0.35)
        probs = row.probs.reshape(2, 2, 2, 2)
        sep = 0.0
        from measurecost.linalg import shannon_entropy

        for j in range(4):
            axes = tuple(a for a in range(4) if a != j)
            sep += shannon_entropy(probs.sum(axis=axes))
        assert abs(sep - row.e_sep) < 1e-12

    def test_rejects_states_outside_code_space(self):
        bad = np.zeros(32, dtype=complex)
        bad[0] = 1.0
        with pytest.raises(ValueError, match="code space"):
            single_point(bad, 0.1)

    def test_superposition_input_accepted(self):
        psi = logical_state(1 / np.sqrt(2), 1j / np.sqrt(2))
        row = single_point(psi, 0.2)
        assert row.e_proj > 0.0
        assert 0.0 < row.recovered_fidelity <= 1.0


class TestGapDecomposition:
    def test_noiseless_terms_vanish(self):
        gaps = gap_decomposition(single_point(logical_state(1.0, 0.0), 0.0))
        assert abs(gaps.total) < 1e-12

    def test_terms_nonnegative_across_grid(self):
        for row in sweep(logical_state(1.0, 0.0), [0.1, 0.4, 0.9]):
            gaps = gap_decomposition(row)
            assert gaps.i_12 >= -1e-12
            assert gaps.i_12_3 >= -1e-12
            assert gaps.i_123_4 >= -1e-12

    def test_two_route_agreement(self):
        row = single_point(logical_state(1.0, 0.0), 0.3)
        gaps = gap_decomposition(row)
        assert gaps.residual < 1e-9
        assert abs((row.e_sep - row.e_proj) - gaps.total) < 1e-9


class TestDeviceOracleEquivalence:
    def test_canonical_device_reproduces_syndrome_distribution(self):
        # dim 32 x 16 device versus direct projector traces
        instr = syndrome_instrument()
        dev = canonical_device(instr)
        psi = logical_state(1.0, 0.0)
        from measurecost.instruments import amplitude_damping, apply_channel, channel_tensor_power

        rho = apply_channel(channel_tensor_power(amplitude_damping(0.25), 5), projector(psi))
        step = measurement_step(dev, rho)
        direct = apply_instrument(instr, rho).probs
        assert np.max(np.abs(step.probs - direct)) < 1e-9


class TestImprovementClaim:
    def test_low_noise_improvement_fraction(self):
        row = single_point(logical_state(1.0, 0.0), 0.05)
        improvement = (row.e_proj - row.e_su) / row.e_su
        assert 0.08 <= improvement <= 0.25
