import numpy as np
import pytest

from grover_qt import errors, nmr_oracle
from grover_qt.nmr_oracle import NmrParams


@pytest.fixture(name="params")
def fixture_params():
    return NmrParams(mu_b=10.0, lambdas=(1.0, 2.0))


class TestParams:
    """Coupling constants"""

    def test_default_couplings(self):
        params = NmrParams.default(3)
        assert params.lambdas == (1.0, 2.0, 4.0)
        assert params.mu_b == nmr_oracle.DEFAULT_MU_B
        assert params.lt == 3

    def test_lambdas_normalized(self):
        assert NmrParams(1, [1, 3]).lambdas == (1.0, 3.0)

    def test_empty_couplings(self):
        with pytest.raises(errors.ConfigurationError):
            NmrParams(1.0, ())


class TestEnergies:
    """Hamiltonian levels and resonances"""

    def test_ground_level(self, params):
        """Couplings enter at half weight: E(0, 0) = -5 + 3/2, not -5 + 3 = -2

        Only the half weight splits the two auxiliary levels by exactly
        omega_res, which the selective pulse relies on.
        """
        ground = nmr_oracle.hamiltonian_energy(0, 0, params)
        excited = nmr_oracle.hamiltonian_energy(1, 0, params)
        assert ground == pytest.approx(-3.5)
        assert ground != pytest.approx(-2.0)
        assert excited == pytest.approx(3.5)
        assert excited - ground == pytest.approx(nmr_oracle.resonance_frequency(0, params))

    @pytest.mark.parametrize("f_value", range(4))
    def test_splitting_is_resonance(self, params, f_value):
        """E(1, F) - E(0, F) equals omega_res(F)"""
        split = (
            nmr_oracle.hamiltonian_energy(1, f_value, params)
            - nmr_oracle.hamiltonian_energy(0, f_value, params)
        )
        assert split == pytest.approx(nmr_oracle.resonance_frequency(f_value, params))

    def test_frequency_table(self, params):
        table = nmr_oracle.frequency_table(params)
        assert sorted(omega for _, omega in table.entries) == [7.0, 9.0, 11.0, 13.0]
        assert dict(table.entries)[0] == 7.0
        assert table.min_gap == 2.0
        assert table.collisions == ()

    def test_single_coupling(self):
        table = nmr_oracle.frequency_table(NmrParams(0.0, (3.0,)))
        assert table.entries == ((0, -3.0), (1, 3.0))

    def test_collisions(self):
        table = nmr_oracle.frequency_table(NmrParams(10.0, (1.0, 1.0)))
        assert table.collisions == ((1, 2),)
        assert table.min_gap == 0.0

    def test_decoupled_limit(self):
        """Without couplings every target value sees +-mu_b/2 and mu_b"""
        params = NmrParams(10.0, (0.0, 0.0))
        for f_value in range(4):
            assert nmr_oracle.hamiltonian_energy(0, f_value, params) == -5.0
            assert nmr_oracle.hamiltonian_energy(1, f_value, params) == 5.0
            assert nmr_oracle.resonance_frequency(f_value, params) == 10.0

    @pytest.mark.parametrize("lt", range(1, 15))
    def test_default_couplings_injective(self, lt):
        table = nmr_oracle.frequency_table(NmrParams.default(lt))
        assert table.collisions == ()
        assert table.min_gap == 2.0

    def test_bad_arguments(self, params):
        with pytest.raises(errors.DomainError):
            nmr_oracle.hamiltonian_energy(2, 0, params)
        with pytest.raises(errors.DomainError):
            nmr_oracle.resonance_frequency(4, params)


class TestSelectivePulse:
    """The pulse realizes the target reflector"""

    @pytest.mark.parametrize("f0", range(8))
    def test_equals_phase_target(self, random_state, f0):
        state = random_state(3, 3, seed=f0)
        expected = state.copy().apply_phase_target(f0)
        nmr_oracle.selective_pi_pulse(state, f0, NmrParams.default(3))
        assert np.max(np.abs(state.amps - expected.amps)) <= 1e-12

    def test_worked_example_step(self, trace_state):
        """Psi1 goes to Psi2 exactly"""
        state = nmr_oracle.selective_pi_pulse(trace_state(1), 2, NmrParams.default(2))
        assert np.array_equal(state.amps, trace_state(2).amps)

    def test_twice_is_identity(self, random_state, params):
        state = random_state(2, 2, seed=4)
        original = state.amps.copy()
        nmr_oracle.selective_pi_pulse(state, 3, params)
        nmr_oracle.selective_pi_pulse(state, 3, params)
        assert np.max(np.abs(state.amps - original)) <= 1e-12

    def test_auxiliary_flipped_only_on_target(self, trace_state, params):
        """The auxiliary ends in |0> - |1> except where the target holds F0"""
        aux = nmr_oracle.auxiliary_amplitudes(trace_state(1), 2, params)
        assert aux.shape == (16, 2)
        half = np.sqrt(0.5) / 2
        # |1>⊗|2> carries F0 = 2: sign of the auxiliary pair reversed
        assert np.allclose(aux[6], [-half, half])
        assert np.allclose(aux[3], [half, -half])
        assert np.allclose(aux[0], [0, 0])

    def test_collision_refused(self, random_state):
        state = random_state(2, 2, seed=0)
        with pytest.raises(errors.UnresolvablePulseError) as error:
            nmr_oracle.selective_pi_pulse(state, 1, NmrParams(10.0, (1.0, 1.0)))
        assert error.value.colliding == (2,)

    def test_uncolliding_value_still_works(self, random_state):
        """F0 = 0 stays resolvable with equal couplings"""
        state = random_state(2, 2, seed=1)
        expected = state.copy().apply_phase_target(0)
        nmr_oracle.selective_pi_pulse(state, 0, NmrParams(10.0, (1.0, 1.0)))
        assert np.max(np.abs(state.amps - expected.amps)) <= 1e-12

    def test_width_mismatch(self, random_state, params):
        with pytest.raises(errors.ConfigurationError):
            nmr_oracle.selective_pi_pulse(random_state(2, 3, seed=0), 0, params)
