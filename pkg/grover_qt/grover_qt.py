# Purpose: Command line front end of the two-register Grover database search
# License: GPLv3

import csv
import datetime
import functools
import json
import logging
import os
import sys
import traceback
from dataclasses import dataclass

import numpy as np
from PyQt5.QtCore import (
    QCommandLineOption, QCommandLineParser, QCoreApplication, QEventLoop,
    QObject, QThread, pyqtSignal, pyqtSlot
)

try:
    import analytic_model
    import database
    import errors
    import grover_engine
    import nmr_oracle
    import register_state
    import settings
except ImportError:
    from grover_qt import analytic_model
    from grover_qt import database
    from grover_qt import errors
    from grover_qt import grover_engine
    from grover_qt import nmr_oracle
    from grover_qt import register_state
    from grover_qt import settings


__version__ = "1.0"

EXIT_OK = 0
EXIT_UNVERIFIED = 1
EXIT_USAGE = 2
EXIT_NO_SOLUTION = 3
EXIT_VALIDATION = 4
EXIT_RESOURCE = 5
EXIT_TRACE_MISMATCH = 6
EXIT_ORACLE_DEVIATION = 7
EXIT_UNRESOLVABLE_PULSE = 8

# Most specific classes first
ERROR_EXIT_CODES = (
    (errors.NoSolutionError, EXIT_NO_SOLUTION),
    (errors.TableFormatError, EXIT_VALIDATION),
    (errors.TableValidationError, EXIT_VALIDATION),
    (errors.DomainError, EXIT_VALIDATION),
    (errors.ResourceError, EXIT_RESOURCE),
    (errors.UnresolvablePulseError, EXIT_UNRESOLVABLE_PULSE),
    (errors.ConfigurationError, EXIT_USAGE),
    (OSError, EXIT_VALIDATION),
    (errors.GroverError, EXIT_VALIDATION),
)

COMMANDS = ('trace-example', 'search', 'sweep', 'oracle-check', 'nmr-freqs')
FORMATS = ('plain', 'csv', 'json')
ORACLES = ('reflector', 'nmr')

TRACE_TOLERANCE = 1e-12
WORKED_EXAMPLE_F0 = 2
_H = 0.5
# Worked example f(I) = 3 - I, F0 = 2: signed amplitudes of Psi0 ... Psi7
EXPECTED_TRACE = (
    {(0, 0): _H, (1, 0): _H, (2, 0): _H, (3, 0): _H},
    {(0, 3): _H, (1, 2): _H, (2, 1): _H, (3, 0): _H},
    {(0, 3): _H, (1, 2): -_H, (2, 1): _H, (3, 0): _H},
    {(0, 0): _H, (1, 0): -_H, (2, 0): _H, (3, 0): _H},
    {(0, 0): _H, (1, 0): _H, (2, 0): -_H, (3, 0): _H},
    {(0, 0): -_H, (1, 0): _H, (2, 0): -_H, (3, 0): _H},
    {(1, 0): -1.0},
    {(1, 2): -1.0},
)


@dataclass
class RunConfig:
    subcommand: str
    control_bits: int = 2
    target_bits: int = None
    table_path: str = None
    builtin: str = None
    f0: int = None
    iterations: int = None
    seed: int = 0
    samples: int = None
    output_format: str = 'plain'
    k_max: int = None
    oblivious: bool = False
    oracle: str = 'reflector'
    mu_b: float = nmr_oracle.DEFAULT_MU_B
    lambdas: tuple = None
    log_level: str = None


def build_parser():
    parser = QCommandLineParser()
    parser.setApplicationDescription(
        QCoreApplication.translate(
            'Command line help',
            'Grover database search on a two-register state vector simulator',
            'Application description'
        )
    )
    parser.addPositionalArgument(
        'command', ' | '.join(COMMANDS)
    )
    parser.addHelpOption()
    parser.addVersionOption()
    for names, description, value_name in (
        (['c', 'control-bits'], 'Width of the control register', 'bits'),
        (['t', 'target-bits'], 'Width of the target register', 'bits'),
        (['table'], 'Function table file ("lc lt" then "I F" lines)', 'path'),
        (['b', 'builtin'], 'Builtin table: ' + ', '.join(database.BUILTIN_TABLES), 'name'),
        (['f0'], 'Searched function value F0', 'value'),
        (['n', 'iterations'], 'Override the number of Grover steps', 'count'),
        (['s', 'seed'], 'Seed of every random draw', 'seed'),
        (['samples'], 'Measurements (search) or random states (oracle-check)', 'count'),
        (['format'], 'Output format: ' + ', '.join(FORMATS), 'format'),
        (['k-max'], 'Last iteration of the sweep', 'k'),
        (['mu-b'], 'Larmor term of the auxiliary spin', 'energy'),
        (['lambdas'], 'Comma separated couplings lambda_1,...', 'list'),
        (['oracle'], 'Target reflector of search: ' + ', '.join(ORACLES), 'kind'),
        (['log-level'], 'Logging level for this run', 'level'),
    ):
        parser.addOption(QCommandLineOption(names, description, value_name))
    parser.addOption(QCommandLineOption(
        ['oblivious'], 'Search even when no entry maps to F0'
    ))
    return parser


def _typed_option(parser, name, kind):
    if not parser.isSet(name):
        return None
    raw = parser.value(name)
    try:
        return kind(raw)
    except ValueError:
        raise errors.ConfigurationError(f'--{name} expects a {kind.__name__}, got {raw!r}')


def _lambdas(raw):
    return tuple(float(x) for x in raw.split(',') if x.strip())


def parse_args(argv, simulator_settings):
    ''' argv includes the program name, as sys.argv does '''
    parser = build_parser()
    if not parser.parse(list(argv)):
        raise errors.ConfigurationError(parser.errorText())
    if parser.isSet('help') or parser.isSet('version'):
        return None, parser
    positional = parser.positionalArguments()
    if len(positional) != 1 or positional[0] not in COMMANDS:
        raise errors.ConfigurationError(
            f'Expected exactly one command among {", ".join(COMMANDS)}, got {positional}'
        )
    control_bits = _typed_option(parser, 'control-bits', int)
    if control_bits is None:
        control_bits = 2
    target_bits = _typed_option(parser, 'target-bits', int)
    output_format = parser.value('format') or simulator_settings.output_format()
    if output_format not in FORMATS:
        raise errors.ConfigurationError(
            f'Unknown format {output_format!r}, choose one of {", ".join(FORMATS)}'
        )
    oracle = parser.value('oracle') or 'reflector'
    if oracle not in ORACLES:
        raise errors.ConfigurationError(
            f'Unknown oracle {oracle!r}, choose one of {", ".join(ORACLES)}'
        )
    config = RunConfig(
        subcommand=positional[0],
        control_bits=control_bits,
        target_bits=control_bits if target_bits is None else target_bits,
        table_path=parser.value('table') or None,
        builtin=parser.value('builtin') or None,
        f0=_typed_option(parser, 'f0', int),
        iterations=_typed_option(parser, 'iterations', int),
        seed=_typed_option(parser, 'seed', int),
        samples=_typed_option(parser, 'samples', int),
        output_format=output_format,
        k_max=_typed_option(parser, 'k-max', int),
        oblivious=parser.isSet('oblivious'),
        oracle=oracle,
        mu_b=_typed_option(parser, 'mu-b', float),
        lambdas=_typed_option(parser, 'lambdas', _lambdas),
        log_level=parser.value('log-level') or None,
    )
    if config.seed is None:
        config.seed = simulator_settings.seed()
    if config.mu_b is None:
        config.mu_b = simulator_settings.mu_b()
    if config.table_path and config.builtin:
        raise errors.ConfigurationError('Give either --table or --builtin, not both')
    return config, parser


def load_table(config, simulator_settings):
    if config.table_path and config.builtin:
        raise errors.ConfigurationError('Give either --table or --builtin, not both')
    if config.table_path:
        return database.FunctionTable.load(config.table_path)
    name = config.builtin or simulator_settings.builtin_table()
    return database.builtin(
        name, config.control_bits, config.target_bits, config.seed
    )


def _required_f0(config):
    if config.f0 is None:
        raise errors.ConfigurationError(
            f'The {config.subcommand} command needs --f0'
        )
    return config.f0


def nmr_params(config, lt):
    if config.lambdas:
        return nmr_oracle.NmrParams(config.mu_b, config.lambdas)
    return nmr_oracle.NmrParams.default(lt, config.mu_b)


def _float(value):
    # + 0.0 turns -0.0 into 0.0
    return float(value) + 0.0


def _csv_writer(out):
    return csv.writer(out, lineterminator='\n')


def reports_errors(command):
    ''' Maps simulator errors raised by a command to its exit code '''
    @functools.wraps(command)
    def wrapper(config, simulator_settings=None, out=None, err=None):
        if simulator_settings is None:
            simulator_settings = settings.SimulatorSettings()
        out = sys.stdout if out is None else out
        err = sys.stderr if err is None else err
        try:
            return command(config, simulator_settings, out, err)
        except tuple(error for error, _ in ERROR_EXIT_CODES) as error:
            for error_class, code in ERROR_EXIT_CODES:
                if isinstance(error, error_class):
                    break
            logging.error(f'{config.subcommand}: {error}')
            err.write(f'{config.subcommand}: {error}\n')
            return code
    return wrapper


def trace_states(table, f0):
    ''' [(operator, state copy)] for Psi0 ... Psi7 of the worked example '''
    state = register_state.TwoRegisterState.init_zero(table.lc, table.lt)
    steps = (
        ('H(c)', lambda s: s.apply_hadamard_control()),
        ('U_f', lambda s: s.apply_uf(table)),
    ) + grover_engine.grover_steps(table, f0)
    trace = []
    for name, step in steps:
        step(state)
        trace.append((name, state.copy()))
    return trace


def expected_amplitudes(index, lc=2, lt=2):
    expected = np.zeros(1 << (lc + lt), dtype=np.complex128)
    for (i, k), amp in EXPECTED_TRACE[index].items():
        expected[(i << lt) + k] = amp
    return expected


@reports_errors
def trace_example(config, simulator_settings, out, err):
    table = database.FunctionTable.worked_example()
    trace = trace_states(table, WORKED_EXAMPLE_F0)
    mismatch = None
    for step, (name, state) in enumerate(trace):
        deviation = float(np.max(np.abs(state.amps - expected_amplitudes(step))))
        logging.debug(f'Psi{step} after {name}: deviation {deviation:.3e}')
        if deviation > TRACE_TOLERANCE:
            mismatch = (step, name, deviation)
            break

    if config.output_format == 'json':
        records = [
            {
                'step': step,
                'label': f'Psi{step}',
                'operator': name,
                'amplitudes': [[_float(a.real), _float(a.imag)] for a in state.amps],
            }
            for step, (name, state) in enumerate(trace)
        ]
        json.dump(records, out, indent=1)
        out.write('\n')
    elif config.output_format == 'csv':
        writer = _csv_writer(out)
        writer.writerow(['step', 'label', 'operator', 'index', 're', 'im'])
        for step, (name, state) in enumerate(trace):
            for index, amp in enumerate(state.amps):
                writer.writerow(
                    [step, f'Psi{step}', name, index, _float(amp.real), _float(amp.imag)]
                )
    else:
        for step, (name, state) in enumerate(trace):
            out.write(f'# Psi{step} after {name}: {state.ket()}\n')
            state.dump(out)
        out.write(f'final state: {trace[-1][1].ket()}\n')

    if mismatch is not None:
        step, name, deviation = mismatch
        err.write(
            QCoreApplication.translate(
                'Trace report', 'Trace mismatch', 'Command line output'
            )
            + f' at Psi{step} (after {name}): max deviation {deviation:.3e}\n'
        )
        return EXIT_TRACE_MISMATCH
    return EXIT_OK


@reports_errors
def search_cmd(config, simulator_settings, out, err):
    table = load_table(config, simulator_settings)
    f0 = _required_f0(config)
    outcome = grover_engine.search(
        table, f0, seed=config.seed, iterations=config.iterations,
        oblivious=config.oblivious,
        nmr_params=nmr_params(config, table.lt) if config.oracle == 'nmr' else None
    )
    samples = config.samples or simulator_settings.samples()
    if samples > 1:
        draws = outcome.state.sample(config.seed, samples)
        verified_rate = float(np.mean(table.values[draws[:, 0]] == f0))
    else:
        verified_rate = 1.0 if outcome.verified else 0.0
    result = {
        'I': outcome.measured_i,
        'F': outcome.measured_f,
        'verified': outcome.verified,
        'iterations': outcome.iterations,
        'g': outcome.g,
        'nu': outcome.nu,
        'success_probability': outcome.success_probability,
        'global_sign': outcome.global_sign,
        'samples': samples,
        'verified_rate': verified_rate,
    }
    if config.output_format == 'json':
        json.dump(result, out, indent=1)
        out.write('\n')
    elif config.output_format == 'csv':
        writer = _csv_writer(out)
        writer.writerow(list(result))
        writer.writerow(list(result.values()))
    else:
        status = 'verified' if outcome.verified else 'NOT verified'
        out.write(f'I={outcome.measured_i} F={outcome.measured_f} {status}\n')
        out.write(
            f'iterations={outcome.iterations} g={outcome.g} nu={outcome.nu:.6f} '
            f'success_probability={outcome.success_probability:.12f} '
            f'global_sign={outcome.global_sign:+d}\n'
        )
        if samples > 1:
            out.write(f'verified_rate={verified_rate:.6f} over {samples} samples\n')

    if outcome.g == 0:
        err.write(
            QCoreApplication.translate(
                'Search report', 'No solution', 'Command line output'
            )
            + f': no entry maps to F0={f0} (g=0)\n'
        )
        return EXIT_NO_SOLUTION
    return EXIT_OK if outcome.verified else EXIT_UNVERIFIED


class SweepWorker(QThread):
    row = pyqtSignal(int, float, float)
    error = pyqtSignal(['QString'])

    def __init__(self, table, f0, k_max, nmr_params=None, parent=None):
        QThread.__init__(self, parent)
        self.table = table
        self.f0 = f0
        self.k_max = k_max
        self.nmr_params = nmr_params

    def run(self):
        g = self.table.multiplicity(self.f0).g
        try:
            for k, state in grover_engine.amplification_trajectory(
                    self.table, self.f0, self.k_max, self.nmr_params):
                self.row.emit(
                    k,
                    grover_engine.success_probability(state, self.table, self.f0),
                    analytic_model.predicted_success(self.table.lc, g, k)
                )
        except errors.GroverError as error:
            logging.error(f'Sweep stopped: {error}')
            self.error['QString'].emit(str(error))
        logging.debug('Sweep thread done')


class SweepCollector(QObject):

    def __init__(self, parent=None):
        super(SweepCollector, self).__init__(parent)
        self.rows = []
        self.failure = None

    @pyqtSlot(int, float, float)
    def add_row(self, k, p_full_sim, p_analytic):
        self.rows.append((k, p_full_sim, p_analytic, abs(p_full_sim - p_analytic)))

    @pyqtSlot('QString')
    def fail(self, message):
        self.failure = message


_application = None


def application():
    global _application
    if QCoreApplication.instance() is None:
        # keep a reference, Qt destroys the application with its wrapper
        _application = QCoreApplication(sys.argv[:1])
    return QCoreApplication.instance()


@reports_errors
def sweep_cmd(config, simulator_settings, out, err):
    table = load_table(config, simulator_settings)
    f0 = _required_f0(config)
    g = table.multiplicity(f0).g
    if g == 0:
        raise errors.NoSolutionError(f0)
    k_max = config.k_max
    if k_max is None:
        k_max = max(2 * grover_engine.iteration_count(table.lc, g)[0], 1)
    if k_max < 0:
        raise errors.ConfigurationError(f'--k-max must be non-negative, got {k_max}')

    params = None
    if config.oracle == 'nmr':
        params = nmr_params(config, table.lt)
        nmr_oracle.check_resolvable(f0, params)

    application()
    worker = SweepWorker(table, f0, k_max, params)
    collector = SweepCollector()
    worker.row.connect(collector.add_row)
    worker.error['QString'].connect(collector.fail)
    loop = QEventLoop()
    worker.finished.connect(loop.quit)
    worker.start()
    loop.exec_()
    worker.wait()
    if collector.failure is not None:
        raise errors.GroverError(collector.failure)

    if config.output_format == 'json':
        json.dump(
            [
                {'iter': k, 'p_full_sim': p_sim, 'p_analytic': p_model, 'abs_diff': diff}
                for k, p_sim, p_model, diff in collector.rows
            ],
            out, indent=1
        )
        out.write('\n')
    else:
        writer = _csv_writer(out)
        writer.writerow(['iter', 'p_full_sim', 'p_analytic', 'abs_diff'])
        for k, p_sim, p_model, diff in collector.rows:
            writer.writerow([k, f'{p_sim:.12f}', f'{p_model:.12f}', f'{diff:.3e}'])
    return EXIT_OK


def _random_state(rng, lc, lt):
    dim = 1 << (lc + lt)
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    amps /= np.linalg.norm(amps)
    return register_state.TwoRegisterState(lc, lt, amps)


def oracle_deviations(table, f0, samples, seed):
    ''' Largest |fast - dense| per kernel over random states, plus the
    unitarity defect of the dense Grover step '''
    dense = analytic_model.dense_operator_oracle(table, f0)
    rng = np.random.default_rng(seed)
    deviations = dict.fromkeys(
        ('H(c)', 'U_f', 'S(c)_I', 'S(t)_F', 'O'), 0.0
    )
    for sample in range(samples):
        state = _random_state(rng, table.lc, table.lt)
        # cycle the reflected value so every i0 / F gets covered
        i0 = sample % (1 << table.lc)
        k0 = sample % (1 << table.lt)
        # one dense reflector at a time, near the cap each is 16 MiB
        control_reflector = analytic_model.phase_control_matrix(table.lc, table.lt, i0)
        target_reflector = analytic_model.phase_target_matrix(table.lc, table.lt, k0)
        for name, fast, matrix in (
            ('H(c)', lambda s: s.apply_hadamard_control(), dense.hadamard),
            ('U_f', lambda s: s.apply_uf(table), dense.uf),
            ('S(c)_I', lambda s: s.apply_phase_control(i0), control_reflector),
            ('S(t)_F', lambda s: s.apply_phase_target(k0), target_reflector),
            ('O', lambda s: grover_engine.grover_operator(s, table, f0), dense.product),
        ):
            result = fast(state.copy()).amps
            deviation = float(np.max(np.abs(result - matrix @ state.amps)))
            deviations[name] = max(deviations[name], deviation)
    product = dense.product
    deviations['unitarity'] = float(
        np.max(np.abs(product @ product.conj().T - np.eye(product.shape[0])))
    )
    return deviations


@reports_errors
def oracle_check_cmd(config, simulator_settings, out, err):
    table = load_table(config, simulator_settings)
    if table.lc + table.lt > analytic_model.DENSE_MAX_BITS:
        raise errors.ResourceError(
            f'Dense check is capped at {analytic_model.DENSE_MAX_BITS} qubits, '
            f'table has lc + lt = {table.lc + table.lt}'
        )
    f0 = config.f0 if config.f0 is not None else 0
    samples = config.samples or simulator_settings.oracle_samples()
    tolerance = simulator_settings.oracle_tolerance()
    deviations = oracle_deviations(table, f0, samples, config.seed)
    worst = max(deviations.values())

    if config.output_format == 'json':
        json.dump(
            {'deviations': deviations, 'max_deviation': worst, 'tolerance': tolerance},
            out, indent=1
        )
        out.write('\n')
    elif config.output_format == 'csv':
        writer = _csv_writer(out)
        writer.writerow(['kernel', 'max_deviation'])
        for name, deviation in deviations.items():
            writer.writerow([name, f'{deviation:.3e}'])
    else:
        for name, deviation in deviations.items():
            out.write(f'{name} {deviation:.3e}\n')
        out.write(f'max deviation: {worst:.3e}\n')

    if worst > tolerance:
        err.write(f'Deviation {worst:.3e} exceeds {tolerance:.1e}\n')
        return EXIT_ORACLE_DEVIATION
    return EXIT_OK


@reports_errors
def nmr_freqs_cmd(config, simulator_settings, out, err):
    table = nmr_oracle.frequency_table(nmr_params(config, config.target_bits))
    for first, other in table.collisions:
        logging.warning(f'Resonance collision between F={first} and F={other}')
        err.write(f'collision between F={first} and F={other}\n')

    if config.output_format == 'json':
        json.dump(
            {
                'entries': [{'F': f, 'omega_res': omega} for f, omega in table.entries],
                'min_gap': table.min_gap,
                'collisions': [list(pair) for pair in table.collisions],
            },
            out, indent=1
        )
        out.write('\n')
    else:
        writer = _csv_writer(out)
        writer.writerow(['F', 'omega_res', 'min_gap'])
        for f_value, omega in table.entries:
            writer.writerow([f_value, _float(omega), _float(table.min_gap)])
    return EXIT_OK


DISPATCH = {
    'trace-example': trace_example,
    'search': search_cmd,
    'sweep': sweep_cmd,
    'oracle-check': oracle_check_cmd,
    'nmr-freqs': nmr_freqs_cmd,
}


def trim_log(log_file, max_bytes):
    '''Cuts a log grown past max_bytes down to its newest half, starting
    on a whole line. Returns True when the file was trimmed.'''
    if not os.path.isfile(log_file) or os.stat(log_file).st_size <= max_bytes:
        return False
    with open(log_file, 'rb') as stream:
        stream.seek(-(max_bytes // 2), os.SEEK_END)
        tail = stream.read()
    with open(log_file, 'wb') as stream:
        stream.write(tail[tail.find(b'\n') + 1:])
    return True


def setup_logging(simulator_settings, level=None):
    log_file = simulator_settings.log_file()
    os.makedirs(os.path.dirname(log_file), exist_ok=True)
    max_bytes = simulator_settings.log_max_bytes()
    trimmed = trim_log(log_file, max_bytes)

    logging.basicConfig(
        format='%(asctime)s %(levelname)s: %(message)s'
        ' - %(lineno)s: %(module)s',
        datefmt='%Y/%m/%d %H:%M:%S',
        filename=log_file, level=(level or simulator_settings.log_level()).upper()
    )
    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setLevel(logging.WARNING)
    stderr_handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    logging.getLogger().addHandler(stderr_handler)
    if trimmed:
        logging.info(f'Log file cut to its newest {max_bytes // 2} bytes')


def main(argv=None):
    argv = sys.argv if argv is None else argv
    app = application()
    app.setOrganizationName('grover-qt')
    app.setOrganizationDomain('grover-qt')
    app.setApplicationName('grover-qt')
    app.setApplicationVersion(__version__)
    simulator_settings = settings.SimulatorSettings()

    try:
        config, parser = parse_args(argv, simulator_settings)
    except errors.ConfigurationError as error:
        sys.stderr.write(f'{error}\n')
        return EXIT_USAGE
    if config is None:
        if parser.isSet('version'):
            sys.stdout.write(f'grover-qt {__version__}\n')
        else:
            sys.stdout.write(parser.helpText())
        return EXIT_OK

    setup_logging(simulator_settings, config.log_level)
    logging.debug(f'Run configuration: {config}')
    return DISPATCH[config.subcommand](config, simulator_settings)


def excepthook(exc_type, exc_value, tracebackobj):
    '''Reports an unhandled exception through the run log, or on stderr
    when logging is not set up yet.'''
    report = ''.join(
        [f'{datetime.datetime.now():%Y/%m/%d %H:%M:%S} CRASH: '
         f'{exc_type.__name__}: {exc_value}\n']
        + traceback.format_tb(tracebackobj)
    )
    if logging.getLogger().handlers:
        logging.critical(report)
    else:
        sys.stderr.write(report)


sys.excepthook = excepthook

if __name__ == '__main__':
    sys.exit(main())
