import math

import numpy as np
import pytest

from grover_qt import analytic_model, errors
from grover_qt.database import FunctionTable


class TestBeta:
    """Rotation half-angle"""

    @pytest.mark.parametrize(
        "lc, g, beta",
        [(2, 1, math.pi / 6), (1, 1, math.pi / 4), (2, 4, math.pi / 2), (3, 2, math.pi / 6)],
    )
    def test_values(self, lc, g, beta):
        assert analytic_model.beta_of(lc, g) == pytest.approx(beta, abs=1e-12)

    @pytest.mark.parametrize("g", [0, 5])
    def test_out_of_range(self, g):
        with pytest.raises(errors.DomainError):
            analytic_model.beta_of(2, g)


class TestRotationModel:
    """The 2x2 picture of one Grover step"""

    def test_step_is_orthogonal(self):
        matrix = analytic_model.RotationModel.for_table(5, 3).step_matrix
        assert np.allclose(matrix @ matrix.T, np.eye(2), atol=1e-12)
        assert np.linalg.det(matrix) == pytest.approx(1.0)

    def test_worked_example(self):
        """(1/2, sqrt(3)/2) is taken to (-1, 0) in one step"""
        model = analytic_model.RotationModel(math.pi / 6)
        a1, a2 = model.step((0.5, math.sqrt(3) / 2))
        assert a1 == pytest.approx(-1.0, abs=1e-12)
        assert a2 == pytest.approx(0.0, abs=1e-12)

    def test_zero_angle_flips_sign(self):
        assert analytic_model.rotation_step((0.0, 1.0), 0.0) == pytest.approx((0.0, -1.0))

    def test_repeated_steps_random_angles(self):
        """k-fold steps from (sin b, cos b) follow the closed form"""
        rng = np.random.default_rng(31)
        for beta in rng.uniform(0, math.pi / 2, size=25):
            coords = (math.sin(beta), math.cos(beta))
            for k in range(1, 21):
                coords = analytic_model.rotation_step(coords, beta)
                angle = (2 * k + 1) * beta
                assert abs(coords[0] - (-1) ** k * math.sin(angle)) <= 1e-12
                assert abs(coords[1] - (-1) ** k * math.cos(angle)) <= 1e-12

    def test_rotation_step_function(self):
        coords = (0.3, 0.4)
        assert analytic_model.rotation_step(coords, 0.2) == pytest.approx(
            analytic_model.RotationModel(0.2).step(coords)
        )

    @pytest.mark.parametrize("lc, g", [(3, 1), (6, 4), (8, 1)])
    def test_trajectory_matches_closed_form(self, lc, g):
        """After k steps a1 = (-1)**k sin((2k + 1) beta)"""
        model = analytic_model.RotationModel.for_table(lc, g)
        for k, (a1, a2) in enumerate(model.trajectory(10)):
            angle = (2 * k + 1) * model.beta
            assert a1 == pytest.approx((-1) ** k * math.sin(angle), abs=1e-10)
            assert a2 == pytest.approx((-1) ** k * math.cos(angle), abs=1e-10)
            assert a1 ** 2 == pytest.approx(
                analytic_model.predicted_success(lc, g, k), abs=1e-10
            )


class TestDenseMatrices:
    """Explicit operator matrices"""

    def test_hadamard_is_unitary_involution(self):
        matrix = analytic_model.hadamard_matrix(3, 2)
        assert matrix.shape == (32, 32)
        assert np.allclose(matrix @ matrix, np.eye(32), atol=1e-12)

    def test_uf_is_permutation(self, example_table):
        matrix = analytic_model.uf_matrix(example_table)
        assert np.array_equal(matrix @ matrix, np.eye(16))
        assert np.all(matrix.sum(axis=0) == 1)
        # column of |1>⊗|0> has its one in the row of |1>⊗|2>
        assert matrix[6, 4] == 1

    def test_reflectors(self):
        control = analytic_model.phase_control_matrix(2, 2, 1)
        target = analytic_model.phase_target_matrix(2, 2, 3)
        assert np.array_equal(
            np.diag(control).real, [1] * 4 + [-1] * 4 + [1] * 8
        )
        assert np.array_equal(
            np.diag(target).real, [1, 1, 1, -1] * 4
        )

    def test_worked_example_product(self, example_table, trace_state):
        operators = analytic_model.dense_operator_oracle(example_table, 2)
        assert np.allclose(
            operators.product @ trace_state(1).amps, trace_state(7).amps, atol=1e-12
        )
        product = operators.product
        assert np.allclose(product.conj().T @ product, np.eye(16), atol=1e-12)

    def test_size_cap(self):
        table = FunctionTable.random_function(6, 5, seed=0)
        with pytest.raises(errors.ResourceError):
            analytic_model.dense_operator_oracle(table, 0)
        with pytest.raises(errors.ResourceError):
            analytic_model.hadamard_matrix(8, 3)

    def test_target_out_of_range(self, example_table):
        with pytest.raises(errors.DomainError):
            analytic_model.dense_operator_oracle(example_table, 4)
