"""Exception hierarchy for the simulator."""


class QkdMetroError(Exception):
    """Base class for all domain errors."""


class DomainError(QkdMetroError):
    """Argument outside its mathematical domain."""


class NoChannel(QkdMetroError):
    """Wavelength falls between channel passbands."""


class NoQuantumChannel(QkdMetroError):
    """Channel plan lacks a (unique) quantum channel."""


class DegenerateChannel(QkdMetroError):
    """Gain is zero; QBER undefined."""


class BoundCollapse(QkdMetroError):
    """Decoy bound cannot prove any single-photon contribution."""


class NoPositiveRate(QkdMetroError):
    """Secret rate non-positive over the whole search range."""


class NoPath(QkdMetroError):
    """Endpoints not optically connected."""


class SplitTooLarge(QkdMetroError):
    """GPON splitting factor above the supported maximum."""


class ConfigError(QkdMetroError):
    """Base class for configuration-file problems."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParseError(ConfigError):
    pass


class UnknownKey(ConfigError):
    pass


class MissingSection(ConfigError):
    pass


class NoImprovement(QkdMetroError):
    """Calibration refinement failed to reach an acceptable residual."""
