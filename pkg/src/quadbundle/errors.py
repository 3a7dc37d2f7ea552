"""Exception hierarchy. Messages are prefixed with the raising module."""


class QuadBundleError(Exception):
    """Base class for every error raised by the package."""


class DomainError(QuadBundleError, ValueError):
    """An operation was applied outside its mathematical domain."""


class UnsupportedCharacteristicError(DomainError):
    """Characteristic 2 (or another excluded characteristic) was supplied."""


class PreconditionError(QuadBundleError, ValueError):
    """An operation's documented precondition does not hold."""


class StratificationGapError(QuadBundleError):
    """A parameter point belongs to no stratum."""


class ConfigError(QuadBundleError):
    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        prefix = f"config ({', '.join(where)}): " if where else "config: "
        super().__init__(prefix + message)
