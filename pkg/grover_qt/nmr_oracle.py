'''Spin-resonance model of the target phase oracle.

An auxiliary spin couples to every qubit of the target register with
strength lambda_l, so its spin-flip resonance depends on the target value
F. A perfectly selective 180 degree pulse at omega_res(F0) flips the
auxiliary spin only where the target holds F0; with the auxiliary
prepared in (|0> - |1>)/sqrt(2) the flip becomes a sign change of those
amplitudes, which is exactly the reflector S(t)_F0.

Energies and frequencies share one arbitrary unit (hbar = 1).
'''
import logging
from dataclasses import dataclass

import numpy as np

try:
    import errors
except ImportError:
    from grover_qt import errors


DEFAULT_MU_B = 100.0
RESOLUTION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class NmrParams:
    mu_b: float
    lambdas: tuple

    def __post_init__(self):
        object.__setattr__(self, 'lambdas', tuple(float(x) for x in self.lambdas))
        if not self.lambdas:
            raise errors.ConfigurationError('At least one coupling is needed')

    @classmethod
    def default(cls, lt, mu_b=DEFAULT_MU_B):
        ''' lambda_l = 2**(l-1): all signed sums of the couplings differ '''
        return cls(float(mu_b), tuple(float(1 << l) for l in range(lt)))

    @property
    def lt(self):
        return len(self.lambdas)


@dataclass(frozen=True)
class FrequencyTable:
    entries: tuple
    min_gap: float
    collisions: tuple


def _check_value(f_value, params):
    if not 0 <= f_value < (1 << params.lt):
        raise errors.DomainError(
            f'Target value {f_value} outside [0, {1 << params.lt})'
        )


def _coupling_sum(f_value, params, i=0):
    # f_l is bit l-1 of F
    return sum(
        lam * (-1) ** (i + ((f_value >> l) & 1))
        for l, lam in enumerate(params.lambdas)
    )


def hamiltonian_energy(i, f_value, params):
    '''Energy of the auxiliary spin in state |i> next to target value F.

    Each lambda_l enters with weight 1/2 so that the i=1 and i=0 levels
    are split by exactly resonance_frequency(F).
    '''
    if i not in (0, 1):
        raise errors.DomainError(f'Auxiliary state must be 0 or 1, got {i}')
    _check_value(f_value, params)
    return params.mu_b * (i - 0.5) + _coupling_sum(f_value, params, i) / 2


def resonance_frequency(f_value, params):
    _check_value(f_value, params)
    return params.mu_b - _coupling_sum(f_value, params)


def frequency_table(params):
    entries = tuple(
        (f_value, resonance_frequency(f_value, params))
        for f_value in range(1 << params.lt)
    )
    by_frequency = {}
    for f_value, omega in entries:
        by_frequency.setdefault(omega, []).append(f_value)
    collisions = tuple(
        (first, other)
        for same in by_frequency.values()
        for first in same[:1]
        for other in same[1:]
    )
    ordered = sorted(omega for _, omega in entries)
    min_gap = min(b - a for a, b in zip(ordered, ordered[1:]))
    return FrequencyTable(entries=entries, min_gap=min_gap, collisions=collisions)


def check_resolvable(f0, params):
    ''' Raises UnresolvablePulseError when another F shares omega_res(f0) '''
    _resonant_targets(f0, params)


def _resonant_targets(f0, params):
    _check_value(f0, params)
    frequencies = np.array(
        [resonance_frequency(f_value, params) for f_value in range(1 << params.lt)]
    )
    pulse = frequencies[f0]
    tolerance = RESOLUTION_TOLERANCE * max(1.0, abs(pulse))
    resonant = np.abs(frequencies - pulse) <= tolerance
    colliding = [int(f) for f in np.flatnonzero(resonant) if f != f0]
    if colliding:
        raise errors.UnresolvablePulseError(f0, colliding)
    return resonant


def _pulsed_extension(state, f0, params):
    if params.lt != state.lt:
        raise errors.ConfigurationError(
            f'Couplings given for {params.lt} target qubits, state has {state.lt}'
        )
    resonant = _resonant_targets(f0, params)
    logging.debug(
        f'Pulse at omega_res({f0})={resonance_frequency(f0, params)}'
    )
    grid = state.grid()
    # Auxiliary components (|0>, |1>) of psi ⊗ (|0> - |1>), left unscaled
    extension = np.stack([grid, -grid], axis=-1)
    extension[:, resonant, :] = extension[:, resonant, ::-1].copy()
    return extension


def auxiliary_amplitudes(state, f0, params):
    '''Amplitudes of the extended system right after the pulse, shape
    (2**(lc+lt), 2) with the auxiliary spin as the last axis.'''
    extension = _pulsed_extension(state, f0, params) * np.sqrt(0.5)
    return extension.reshape(state.dim, 2)


def selective_pi_pulse(state, f0, params):
    extension = _pulsed_extension(state, f0, params)
    # Project the auxiliary back on (|0> - |1>)/sqrt(2); the two 1/sqrt(2)
    # factors combine into an exact 1/2
    leaked = (extension[..., 0] + extension[..., 1]) / 2
    leak = float(np.vdot(leaked, leaked).real)
    if leak > 1e-24:
        raise errors.GroverError(f'Auxiliary spin left entangled (weight {leak})')
    state.grid()[...] = (extension[..., 0] - extension[..., 1]) / 2
    return state
