import numpy as np
import pytest
from PyQt5.QtCore import QSettings

from grover_qt import grover_qt
from grover_qt.database import FunctionTable
from grover_qt.register_state import TwoRegisterState
from grover_qt.settings import SimulatorSettings


@pytest.fixture(scope="session", autouse=True)
def qapp():
    """One QCoreApplication for the whole session"""
    return grover_qt.application()


@pytest.fixture(name="ini_settings")
def fixture_ini_settings(tmp_path):
    """Settings backed by a throwaway INI file"""
    store = QSettings(str(tmp_path / "grover-qt.ini"), QSettings.IniFormat)
    return SimulatorSettings(store)


@pytest.fixture(name="example_table")
def fixture_example_table():
    """f(I) = 3 - I on two-qubit registers"""
    return FunctionTable.from_values(2, 2, [3, 2, 1, 0])


@pytest.fixture(name="make_state")
def fixture_make_state():
    """Builds a state from {(i, k): amplitude}"""

    def _make_state(lc, lt, terms):
        amps = np.zeros(1 << (lc + lt), dtype=np.complex128)
        for (i, k), amp in terms.items():
            amps[(i << lt) + k] = amp
        return TwoRegisterState.from_amplitudes(lc, lt, amps)

    return _make_state


@pytest.fixture(name="random_state")
def fixture_random_state():
    """Generates a random normalized state"""

    def _random_state(lc, lt, seed):
        rng = np.random.default_rng(seed)
        dim = 1 << (lc + lt)
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        amps /= np.linalg.norm(amps)
        return TwoRegisterState.from_amplitudes(lc, lt, amps)

    return _random_state


@pytest.fixture(name="trace_state")
def fixture_trace_state():
    """Psi_n of the worked example as a state"""

    def _trace_state(n):
        return TwoRegisterState.from_amplitudes(
            2, 2, grover_qt.expected_amplitudes(n)
        )

    return _trace_state
