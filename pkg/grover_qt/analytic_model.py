'''Reference models the fast simulator is checked against.

RotationModel is the closed form of one Grover step inside the plane
spanned by the solution state and the remaining database pairs. The
dense builders spell every operator out as an explicit matrix; they are
deliberately naive and only meant for small registers.
'''
import math
from dataclasses import dataclass

import numpy as np

try:
    import errors
except ImportError:
    from grover_qt import errors


DENSE_MAX_BITS = 10

HADAMARD_1Q = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def beta_of(lc, g):
    size = 1 << lc
    if not 1 <= g <= size:
        raise errors.DomainError(f'g={g} is outside [1, {size}]')
    return math.asin(math.sqrt(g / size))


class RotationModel:

    def __init__(self, beta):
        self.beta = float(beta)

    @classmethod
    def for_table(cls, lc, g):
        return cls(beta_of(lc, g))

    @property
    def step_matrix(self):
        c = math.cos(2 * self.beta)
        s = math.sin(2 * self.beta)
        return -np.array([[c, s], [-s, c]])

    def step(self, coords):
        return tuple(self.step_matrix @ np.asarray(coords))

    def trajectory(self, k_max):
        '''(a1, a2) after k = 0 ... k_max steps from (sin beta, cos beta).'''
        coords = np.array([math.sin(self.beta), math.cos(self.beta)])
        points = [tuple(coords)]
        matrix = self.step_matrix
        for _ in range(k_max):
            coords = matrix @ coords
            points.append(tuple(coords))
        return points


def rotation_step(coords, beta):
    return RotationModel(beta).step(coords)


def predicted_success(lc, g, n_iterations):
    return math.sin((2 * n_iterations + 1) * beta_of(lc, g)) ** 2


def _check_dense_size(lc, lt):
    if lc + lt > DENSE_MAX_BITS:
        raise errors.ResourceError(
            f'Dense matrices are capped at {DENSE_MAX_BITS} qubits, '
            f'lc + lt = {lc + lt}'
        )


def hadamard_matrix(lc, lt):
    _check_dense_size(lc, lt)
    control = np.ones((1, 1))
    for _ in range(lc):
        control = np.kron(control, HADAMARD_1Q)
    return np.kron(control, np.eye(1 << lt)).astype(np.complex128)


def uf_matrix(table):
    _check_dense_size(table.lc, table.lt)
    target_size = 1 << table.lt
    dim = target_size << table.lc
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    for i, f in enumerate(table.values):
        for k in range(target_size):
            matrix[i * target_size + (k ^ int(f)), i * target_size + k] = 1.0
    return matrix


def phase_control_matrix(lc, lt, i0):
    _check_dense_size(lc, lt)
    control = np.eye(1 << lc)
    control[i0, i0] = -1.0
    return np.kron(control, np.eye(1 << lt)).astype(np.complex128)


def phase_target_matrix(lc, lt, f0):
    _check_dense_size(lc, lt)
    target = np.eye(1 << lt)
    target[f0, f0] = -1.0
    return np.kron(np.eye(1 << lc), target).astype(np.complex128)


@dataclass
class DenseOperators:
    hadamard: np.ndarray
    uf: np.ndarray
    phase_control: np.ndarray
    phase_target: np.ndarray
    product: np.ndarray


def dense_operator_oracle(table, f0):
    lc, lt = table.lc, table.lt
    _check_dense_size(lc, lt)
    if not 0 <= f0 < (1 << lt):
        raise errors.DomainError(f'F0={f0} is outside [0, {1 << lt})')
    hadamard = hadamard_matrix(lc, lt)
    uf = uf_matrix(table)
    phase_control = phase_control_matrix(lc, lt, 0)
    phase_target = phase_target_matrix(lc, lt, f0)
    # Rightmost factor acts first
    product = uf @ hadamard @ phase_control @ hadamard @ uf @ phase_target
    return DenseOperators(hadamard, uf, phase_control, phase_target, product)
