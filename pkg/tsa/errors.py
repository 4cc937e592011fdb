"""
Typed errors raised across the toolkit.

Each error class carries the process exit code the command line front end
uses when the error reaches it.
"""


class TsaError(Exception):
    """Base class for every error the toolkit raises on purpose"""
    exit_code = 1


class FormatError(TsaError):
    """Malformed input: TLE text, station CSV or scenario file"""
    exit_code = 2


class ChecksumError(FormatError):
    """A TLE line checksum does not match its content"""


class RangeError(FormatError):
    """A value lies outside its documented range"""


class MissingFileError(FormatError, FileNotFoundError):
    """A file named by the scenario does not exist"""


class CrossReferenceError(FormatError):
    """An identifier refers to something the scenario does not define"""


class FilterError(FormatError):
    """A command line filter matched nothing"""

    def __init__(self, message: str, available=()):
        self.available = list(available)
        if self.available:
            message = f"{message}; available: {', '.join(self.available)}"
        super().__init__(message)


class DimensionError(TsaError):
    """Spectra do not line up with the station or satellite lists"""
    exit_code = 2


class DecayError(TsaError):
    """SGP4 reported a decayed orbit or elements outside the model domain"""
    exit_code = 2


class EmptyNetworkError(TsaError):
    """No access window exists anywhere in scope, so no network exists"""
    exit_code = 3


class DivisionError(EmptyNetworkError, ZeroDivisionError):
    """A global window of zero duration was used as a divisor"""


class ConvergenceError(TsaError):
    """An iterative eigensolver hit its iteration cap"""
    exit_code = 4
