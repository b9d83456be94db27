import logging
import math
from dataclasses import dataclass, field

import numpy as np

try:
    import analytic_model
    import errors
    import nmr_oracle
    import register_state
except ImportError:
    from grover_qt import analytic_model
    from grover_qt import errors
    from grover_qt import nmr_oracle
    from grover_qt import register_state


@dataclass(frozen=True)
class SearchOutcome:
    measured_i: int
    measured_f: int
    verified: bool
    iterations: int
    success_probability: float
    global_sign: int
    f0: int
    g: int
    nu: float
    state: object = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class SubspaceCoords:
    a1: complex
    a2: complex
    residual: float
    beta: float


def prepare_initial(table):
    ''' U_f H(c) |0>⊗|0> = 2**(-lc/2) sum_I |I>⊗|f(I)> '''
    state = register_state.TwoRegisterState.init_zero(table.lc, table.lt)
    return state.apply_hadamard_control().apply_uf(table)


def grover_steps(table, f0, nmr_params=None):
    '''The elementary operators of one Grover step, in application order.

    With nmr_params the target reflector is realized by a selective pulse
    on an auxiliary spin instead of the direct sign flip.
    '''
    if nmr_params is None:
        def reflect_target(state):
            return state.apply_phase_target(f0)
    else:
        def reflect_target(state):
            return nmr_oracle.selective_pi_pulse(state, f0, nmr_params)
    return (
        ('S(t)_F0', reflect_target),
        ('U_f', lambda state: state.apply_uf(table)),
        ('H(c)', lambda state: state.apply_hadamard_control()),
        ('S(c)_0', lambda state: state.apply_phase_control(0)),
        ('H(c)', lambda state: state.apply_hadamard_control()),
        ('U_f', lambda state: state.apply_uf(table)),
    )


def grover_operator(state, table, f0, nmr_params=None):
    for _, step in grover_steps(table, f0, nmr_params):
        step(state)
    return state


def iteration_count(lc, g):
    '''Returns (N, nu): nu = pi / (4 asin(sqrt(g / 2**lc))) - 1/2 and N
    its nearest integer, halves rounded away from zero.'''
    if g == 0:
        raise errors.NoSolutionError()
    nu = math.pi / (4 * analytic_model.beta_of(lc, g)) - 0.5
    # nu = 1/2 at lc = 1 comes out of asin a few ulps low
    n = max(0, math.floor(round(nu, 12) + 0.5))
    return n, nu


def success_probability(state, table, f0):
    preimages = list(table.multiplicity(f0).preimages)
    if not preimages:
        return 0.0
    weights = state.grid()[preimages, f0]
    return float(np.sum(weights.real ** 2 + weights.imag ** 2))


def amplification_trajectory(table, f0, k_max, nmr_params=None):
    '''Yields (k, state) for k = 0 ... k_max; the state object is reused.'''
    state = prepare_initial(table)
    yield 0, state
    for k in range(1, k_max + 1):
        grover_operator(state, table, f0, nmr_params)
        yield k, state


def search(table, f0, seed=None, iterations=None, oblivious=False,
           collapse=False, nmr_params=None):
    info = table.multiplicity(f0)
    g = info.g
    if g == 0:
        if not oblivious:
            raise errors.NoSolutionError(f0)
        logging.warning(
            f'F0={f0} has no preimage, running obliviously with g taken as 1'
        )
    n, nu = iteration_count(table.lc, max(g, 1))
    if iterations is not None:
        if iterations < 0:
            raise errors.ConfigurationError(
                f'Iteration count must be non-negative, got {iterations}'
            )
        n = iterations
    if nmr_params is not None:
        nmr_oracle.check_resolvable(f0, nmr_params)
    logging.info(
        f'Searching F0={f0} over 2^{table.lc} entries: g={g}, nu={nu:.6f}, N={n}'
    )

    state = prepare_initial(table)
    for _ in range(n):
        grover_operator(state, table, f0, nmr_params)
    probability = success_probability(state, table, f0)
    measured_i, measured_f = state.measure(seed, collapse=collapse)
    verified = table[measured_i] == f0
    if not verified:
        logging.warning(
            f'Measured I={measured_i} but f({measured_i})={table[measured_i]} != {f0}'
        )
    return SearchOutcome(
        measured_i=measured_i,
        measured_f=measured_f,
        verified=verified,
        iterations=n,
        success_probability=probability,
        global_sign=-1 if n % 2 else 1,
        f0=f0,
        g=g,
        nu=nu,
        state=state,
    )


def project_subspace(state, table, f0):
    '''Coordinates of state on Phi1 (equal superposition of the solution
    pairs) and Phi2 (equal superposition of the other pairs |I>⊗|f(I)>).

    The residual is the norm of what lies outside that plane, computed
    from the difference vector rather than by subtracting weights.
    '''
    info = table.multiplicity(f0)
    g = info.g
    if g == 0:
        raise errors.NoSolutionError(f0)
    size = 1 << table.lc
    grid = state.grid()
    solutions = np.array(info.preimages, dtype=np.int64)
    others = np.flatnonzero(table.values != f0)

    a1 = complex(grid[solutions, f0].sum() / math.sqrt(g))
    difference = grid.copy()
    difference[solutions, f0] -= a1 / math.sqrt(g)
    if g < size:
        a2 = complex(grid[others, table.values[others]].sum() / math.sqrt(size - g))
        difference[others, table.values[others]] -= a2 / math.sqrt(size - g)
    else:
        a2 = 0j
    residual = math.sqrt(float(np.vdot(difference, difference).real))
    return SubspaceCoords(
        a1=a1, a2=a2, residual=residual,
        beta=analytic_model.beta_of(table.lc, g)
    )
