class GroverError(Exception):
    ''' Base class of every error raised by the simulator '''


class ConfigurationError(GroverError, ValueError):
    pass


class DomainError(GroverError, ValueError):
    pass


class TableValidationError(GroverError, ValueError):

    def __init__(self, message, index=None):
        super(TableValidationError, self).__init__(message)
        self.index = index


class TableFormatError(GroverError, ValueError):

    def __init__(self, message, line=None, path=None):
        location = f'{path or "<table>"}:{line}' if line else str(path or '<table>')
        super(TableFormatError, self).__init__(f'{location}: {message}')
        self.line = line
        self.path = path


class NoSolutionError(GroverError):

    def __init__(self, f0=None):
        searched = 'the searched value' if f0 is None else f'F0={f0}'
        super(NoSolutionError, self).__init__(
            f'No entry of the table maps to {searched} (g=0)'
        )
        self.f0 = f0


class StateCorruptionError(GroverError):

    def __init__(self, norm):
        super(StateCorruptionError, self).__init__(
            f'State norm is {norm!r}, cannot sample a measurement'
        )
        self.norm = norm


class ResourceError(GroverError):
    pass


class UnresolvablePulseError(GroverError):

    def __init__(self, f0, colliding):
        super(UnresolvablePulseError, self).__init__(
            f'Resonance of F0={f0} collides with F={sorted(colliding)}'
        )
        self.f0 = f0
        self.colliding = tuple(sorted(colliding))
