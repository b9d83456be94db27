import logging
from dataclasses import dataclass

import numpy as np

try:
    import errors
    import register_state
except ImportError:
    from grover_qt import errors
    from grover_qt import register_state


WORKED_EXAMPLE_VALUES = (3, 2, 1, 0)


@dataclass(frozen=True)
class MultiplicityInfo:
    f0: int
    g: int
    preimages: tuple


class FunctionTable:
    '''The database f: [0, 2**lc) -> [0, 2**lt) as an explicit table.

    Immutable once built; values is a read-only int64 array with one
    entry per control value.
    '''

    def __init__(self, lc, lt, values):
        register_state.check_widths(lc, lt)
        self.lc = int(lc)
        self.lt = int(lt)
        values = list(values)
        size = 1 << self.lc
        if len(values) != size:
            raise errors.TableValidationError(
                f'Expected {size} entries for lc={lc}, got {len(values)}',
                index=min(len(values), size)
            )
        for index, value in enumerate(values):
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise errors.TableValidationError(
                    f'Entry f({index})={value!r} is not an integer',
                    index=index
                )
            if not 0 <= value < (1 << self.lt):
                raise errors.TableValidationError(
                    f'Entry f({index})={value} is outside [0, {1 << self.lt})',
                    index=index
                )
        self.values = np.array(values, dtype=np.int64)
        self.values.flags.writeable = False

    @classmethod
    def from_values(cls, lc, lt, values):
        return cls(lc, lt, values)

    @classmethod
    def worked_example(cls):
        return cls(2, 2, WORKED_EXAMPLE_VALUES)

    @classmethod
    def random_permutation(cls, lc, seed=None):
        rng = np.random.default_rng(seed)
        return cls(lc, lc, rng.permutation(1 << lc).tolist())

    @classmethod
    def random_function(cls, lc, lt, seed=None):
        rng = np.random.default_rng(seed)
        return cls(lc, lt, rng.integers(0, 1 << lt, size=1 << lc).tolist())

    @classmethod
    def with_multiplicity(cls, lc, lt, f0, g, seed=None):
        '''A random table where exactly g control values map to f0.'''
        size = 1 << lc
        if not 0 <= f0 < (1 << lt):
            raise errors.DomainError(f'F0={f0} is outside [0, {1 << lt})')
        if not 0 <= g <= size:
            raise errors.DomainError(f'g={g} is outside [0, {size}]')
        rng = np.random.default_rng(seed)
        # Draw from the 2**lt - 1 other values, then skip over f0
        values = rng.integers(0, (1 << lt) - 1, size=size)
        values[values >= f0] += 1
        values[rng.choice(size, size=g, replace=False)] = f0
        return cls(lc, lt, values.tolist())

    @classmethod
    def load(cls, path):
        with open(path, encoding='utf-8') as table_file:
            lines = table_file.read().splitlines()
        logging.debug(f'Loading function table from {path}')
        records = [
            (number, line.split('#', 1)[0].split())
            for number, line in enumerate(lines, start=1)
        ]
        records = [(number, fields) for number, fields in records if fields]
        if not records:
            raise errors.TableFormatError('empty table file', line=1, path=path)

        number, fields = records[0]
        try:
            lc, lt = (int(field) for field in fields)
        except ValueError:
            raise errors.TableFormatError(
                f'header must be "lc lt", got {" ".join(fields)!r}',
                line=number, path=path
            )
        try:
            register_state.check_widths(lc, lt)
        except errors.ConfigurationError as error:
            raise errors.TableFormatError(str(error), line=number, path=path)

        size = 1 << lc
        values = [None] * size
        seen_on = {}
        for number, fields in records[1:]:
            try:
                i, f = (int(field) for field in fields)
            except ValueError:
                raise errors.TableFormatError(
                    f'entry must be "I F", got {" ".join(fields)!r}',
                    line=number, path=path
                )
            if not 0 <= i < size:
                raise errors.TableFormatError(
                    f'I={i} is outside [0, {size})', line=number, path=path
                )
            if i in seen_on:
                raise errors.TableFormatError(
                    f'duplicate entry for I={i} (first on line {seen_on[i]})',
                    line=number, path=path
                )
            if not 0 <= f < (1 << lt):
                raise errors.TableFormatError(
                    f'F={f} is outside [0, {1 << lt})', line=number, path=path
                )
            seen_on[i] = number
            values[i] = f

        missing = [i for i, value in enumerate(values) if value is None]
        if missing:
            raise errors.TableFormatError(
                f'incomplete table, no entry for I={missing[0]} '
                f'({len(missing)} missing)',
                line=len(lines), path=path
            )
        return cls(lc, lt, values)

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as table_file:
            table_file.write(f'{self.lc} {self.lt}\n')
            for i, f in enumerate(self.values):
                table_file.write(f'{i} {f}\n')
        logging.debug(f'Function table saved to {path}')

    def multiplicity(self, f0):
        if not 0 <= f0 < (1 << self.lt):
            raise errors.DomainError(f'F0={f0} is outside [0, {1 << self.lt})')
        preimages = tuple(int(i) for i in np.flatnonzero(self.values == f0))
        return MultiplicityInfo(f0=f0, g=len(preimages), preimages=preimages)

    def image(self):
        return sorted(set(self.values.tolist()))

    def is_bijective(self):
        return self.lc == self.lt and len(self.image()) == len(self)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return int(self.values[i])

    def __eq__(self, other):
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return (
            (self.lc, self.lt) == (other.lc, other.lt)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.lc, self.lt, self.values.tobytes()))

    def __repr__(self):
        return f'FunctionTable(lc={self.lc}, lt={self.lt}, values={self.values.tolist()})'


BUILTIN_TABLES = ('paper-example', 'random-permutation', 'random-function')


def builtin(name, lc=2, lt=2, seed=None):
    if name == 'paper-example':
        return FunctionTable.worked_example()
    if name == 'random-permutation':
        return FunctionTable.random_permutation(lc, seed)
    if name == 'random-function':
        return FunctionTable.random_function(lc, lt, seed)
    raise errors.ConfigurationError(
        f'Unknown builtin table {name!r}, choose one of {", ".join(BUILTIN_TABLES)}'
    )


from_values = FunctionTable.from_values
load = FunctionTable.load
random_permutation = FunctionTable.random_permutation
