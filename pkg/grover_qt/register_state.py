import functools
import logging

import numpy as np

try:
    import errors
except ImportError:
    from grover_qt import errors


MAX_REGISTER_BITS = 14
MAX_TOTAL_BITS = 27
# Largest norm drift tolerated before sampling a measurement
NORM_TOLERANCE = 1e-6
# Control qubits per Hadamard pass
FUSED_QUBITS = 4
# Size of the scratch tile the kernels work through (2 MiB of float64)
SCRATCH_FLOATS = 1 << 18


@functools.lru_cache(maxsize=None)
def hadamard_block(width):
    '''Normalized Hadamard on width qubits, a real 2**width square matrix.'''
    block = np.ones((1, 1))
    for _ in range(width):
        block = np.kron(block, [[1.0, 1.0], [1.0, -1.0]])
    block *= 2.0 ** (-width / 2)
    block.setflags(write=False)
    return block


def check_widths(lc, lt):
    for name, width in (('control', lc), ('target', lt)):
        if (
            not isinstance(width, (int, np.integer))
            or not 1 <= width <= MAX_REGISTER_BITS
        ):
            raise errors.ConfigurationError(
                f'The {name} register width must be an integer in '
                f'[1, {MAX_REGISTER_BITS}], got {width!r}'
            )
    if lc + lt > MAX_TOTAL_BITS:
        raise errors.ConfigurationError(
            f'lc + lt = {lc + lt} exceeds the {MAX_TOTAL_BITS} qubit cap'
        )


class TwoRegisterState:
    '''State vector of a control register of lc qubits and a target
    register of lt qubits.

    The basis state |I>⊗|K> lives at index I * 2**lt + K, i.e. the
    control register occupies the high bits. Seen as a
    (2**lc, 2**lt) grid, row I is the target fiber of control value I.
    '''

    def __init__(self, lc, lt, amps=None):
        check_widths(lc, lt)
        self.lc = int(lc)
        self.lt = int(lt)
        if amps is None:
            self.amps = np.zeros(self.dim, dtype=np.complex128)
        else:
            self.amps = np.array(amps, dtype=np.complex128).ravel()
            if self.amps.shape != (self.dim,):
                raise errors.ConfigurationError(
                    f'Expected {self.dim} amplitudes for lc={lc}, lt={lt}, '
                    f'got {self.amps.size}'
                )

    @classmethod
    def init_zero(cls, lc, lt):
        state = cls(lc, lt)
        state.amps[0] = 1.0
        return state

    @classmethod
    def from_amplitudes(cls, lc, lt, amps):
        return cls(lc, lt, amps)

    @property
    def dim(self):
        return 1 << (self.lc + self.lt)

    @property
    def control_size(self):
        return 1 << self.lc

    @property
    def target_size(self):
        return 1 << self.lt

    def grid(self):
        # A view: writes go straight to self.amps
        return self.amps.reshape(self.control_size, self.target_size)

    def copy(self):
        return TwoRegisterState(self.lc, self.lt, self.amps)

    def _check_control(self, i):
        if not 0 <= i < self.control_size:
            raise errors.DomainError(
                f'Control value {i} outside [0, {self.control_size})'
            )

    def _check_target(self, k):
        if not 0 <= k < self.target_size:
            raise errors.DomainError(
                f'Target value {k} outside [0, {self.target_size})'
            )

    def apply_hadamard_control(self):
        '''Hadamard on every control qubit.

        Up to FUSED_QUBITS control qubits go in one pass, as a product
        of a real Hadamard block with the interleaved re/im floats. Each
        pass walks the state in tiles through a fixed scratch buffer.
        '''
        floats = self.amps.view(np.float64)
        scratch = np.empty(min(SCRATCH_FLOATS, floats.size))
        for low in range(0, self.lc, FUSED_QUBITS):
            width = min(FUSED_QUBITS, self.lc - low)
            block = hadamard_block(width)
            rows = 1 << width
            stride = 2 << (self.lt + low)
            view = floats.reshape(-1, rows, stride)
            columns = min(stride, SCRATCH_FLOATS // rows)
            batch = max(1, SCRATCH_FLOATS // (rows * stride))
            for first in range(0, view.shape[0], batch):
                for left in range(0, stride, columns):
                    tile = view[first:first + batch, :, left:left + columns]
                    out = scratch[:tile.size].reshape(tile.shape)
                    np.matmul(block, tile, out=out)
                    tile[...] = out
        return self

    def apply_uf(self, table):
        '''|I>⊗|K> -> |I>⊗|K xor f(I)>, a permutation inside each fiber.

        Works through a batch of rows at a time, so the extra memory is
        one tile of amplitudes and its index, whatever the state size.
        '''
        if (table.lc, table.lt) != (self.lc, self.lt):
            raise errors.ConfigurationError(
                f'Table widths ({table.lc}, {table.lt}) do not match the '
                f'state widths ({self.lc}, {self.lt})'
            )
        grid = self.grid()
        columns = np.arange(self.target_size, dtype=np.int64)
        batch = max(1, SCRATCH_FLOATS // (2 * self.target_size))
        for first in range(0, self.control_size, batch):
            rows = slice(first, first + batch)
            # XOR by f(I) is an involution, so gathering equals scattering
            source = columns[np.newaxis, :] ^ table.values[rows, np.newaxis]
            grid[rows] = np.take_along_axis(grid[rows], source, axis=1)
        return self

    def apply_phase_control(self, i0):
        self._check_control(i0)
        row = self.grid()[i0, :]
        np.negative(row, out=row)
        return self

    def apply_phase_target(self, f0):
        self._check_target(f0)
        column = self.grid()[:, f0]
        np.negative(column, out=column)
        return self

    def amplitude(self, i, k):
        self._check_control(i)
        self._check_target(k)
        return complex(self.grid()[i, k])

    def norm(self):
        return float(np.vdot(self.amps, self.amps).real)

    def probabilities(self):
        return self.amps.real ** 2 + self.amps.imag ** 2

    def control_marginal(self):
        return self.probabilities().reshape(
            self.control_size, self.target_size
        ).sum(axis=1)

    def target_marginal(self):
        return self.probabilities().reshape(
            self.control_size, self.target_size
        ).sum(axis=0)

    def _born_distribution(self):
        norm = self.norm()
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise errors.StateCorruptionError(norm)
        probabilities = self.probabilities()
        return probabilities / probabilities.sum()

    def measure(self, seed=None, collapse=False):
        '''Draw one basis state (i, k) with the Born rule.

        The state is left untouched unless collapse is set, in which case
        every other amplitude is zeroed and the drawn one rescaled to
        modulus 1 (its phase is kept).
        '''
        rng = np.random.default_rng(seed)
        index = int(rng.choice(self.dim, p=self._born_distribution()))
        i, k = divmod(index, self.target_size)
        logging.debug(f'Measured |{i}>|{k}> (seed {seed})')
        if collapse:
            amp = self.amps[index]
            self.amps[:] = 0.0
            self.amps[index] = amp / abs(amp)
        return i, k

    def sample(self, seed=None, shots=1):
        '''Draw shots independent (i, k) pairs; returns a (shots, 2) array.'''
        rng = np.random.default_rng(seed)
        indices = rng.choice(self.dim, size=shots, p=self._born_distribution())
        return np.column_stack(np.divmod(indices, self.target_size))

    def dump(self, stream):
        ''' One line per basis index: "index re im" '''
        for index, amp in enumerate(self.amps.tolist()):
            # + 0.0 turns -0.0 into 0.0
            stream.write(f'{index} {amp.real + 0.0!r} {amp.imag + 0.0!r}\n')

    def ket(self, tolerance=1e-12):
        terms = []
        for index in np.flatnonzero(np.abs(self.amps) > tolerance):
            i, k = divmod(int(index), self.target_size)
            amp = self.amps[index]
            if abs(amp.imag) <= tolerance:
                coefficient = f'{amp.real:+.6f}'
            else:
                coefficient = f'({amp.real:+.6f}{amp.imag:+.6f}j)'
            terms.append(f'{coefficient}|{i}>|{k}>')
        return ' '.join(terms) if terms else '0'

    def __repr__(self):
        return f'TwoRegisterState(lc={self.lc}, lt={self.lt}, {self.ket()})'


init_zero = TwoRegisterState.init_zero
