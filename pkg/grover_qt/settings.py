import logging
import os

from PyQt5.QtCore import QObject, QSettings


class SimulatorSettings(QObject):
    ''' Persistent defaults of the command line front end.

    Values are kept as strings in QSettings, every read falls back to
    the built-in default when the key is missing or empty.
    '''
    defaults = {
        'Logging/Level': 'INFO',
        'Logging/MaxBytes': '10240000',
        'Run/Seed': '0',
        'Run/Samples': '1',
        'Output/Format': 'plain',
        'Oracle/Samples': '100',
        'Oracle/Tolerance': '1e-12',
        'Nmr/MuB': '100.0',
        'Defaults/Builtin': 'paper-example',
    }

    def __init__(self, settings=None, parent=None):
        super(SimulatorSettings, self).__init__(parent)
        self.settings = settings if settings is not None else QSettings()

    def value(self, key):
        return self.settings.value(key) or self.defaults[key]

    def setValue(self, key, value):
        self.settings.setValue(key, str(value))

    def fileName(self):
        return self.settings.fileName()

    def log_level(self):
        level = self.settings.value('Logging/Level')
        if level == '' or level is None:
            # first run: store the default so it can be edited in place
            level = self.defaults['Logging/Level']
            self.settings.setValue('Logging/Level', level)
        return level

    def log_max_bytes(self):
        return self._number('Logging/MaxBytes', int)

    def log_file(self):
        ''' grover-qt.log next to the settings file '''
        return os.path.join(os.path.dirname(self.fileName()), 'grover-qt.log')

    def seed(self):
        return self._number('Run/Seed', int)

    def samples(self):
        return self._number('Run/Samples', int)

    def output_format(self):
        return self.value('Output/Format')

    def oracle_samples(self):
        return self._number('Oracle/Samples', int)

    def oracle_tolerance(self):
        return self._number('Oracle/Tolerance', float)

    def mu_b(self):
        return self._number('Nmr/MuB', float)

    def builtin_table(self):
        return self.value('Defaults/Builtin')

    def _number(self, key, kind):
        raw = self.value(key)
        try:
            return kind(raw)
        except (TypeError, ValueError):
            logging.warning(
                f'Setting {key}={raw!r} is not a valid {kind.__name__}, '
                f'using {self.defaults[key]}'
            )
            return kind(self.defaults[key])
