"""Exception hierarchy. Each family maps to a distinct CLI exit status."""


class OqftError(Exception):
    exit_code = 1


class ConfigError(OqftError, ValueError):
    """Bad run configuration, unknown code name, malformed config file."""

    exit_code = 2


class CapacityError(OqftError):
    """Requested size exceeds what can be enumerated densely."""

    exit_code = 3


class BracketError(OqftError):
    """No sign change of ``ratio - 1`` over the search interval."""

    exit_code = 4

    def __init__(self, message, lo=None, hi=None, f_lo=None, f_hi=None):
        super().__init__(message)
        self.lo, self.hi = lo, hi
        self.f_lo, self.f_hi = f_lo, f_hi


class VerificationError(OqftError):
    exit_code = 5


class OutputError(OqftError):
    exit_code = 6


class CodeConstructionError(OqftError, ValueError):
    """Generators or logical operators violate the stabilizer-code invariants."""

    exit_code = 2


class UnsupportedCodeError(OqftError):
    exit_code = 2


class ContractError(OqftError, ValueError):
    """A documented precondition of an operation was violated."""


class PipelineError(OqftError, ValueError):
    """Dimension chain of a channel pipeline is broken at a named stage."""

    def __init__(self, stage, message):
        super().__init__(f"stage {stage!r}: {message}")
        self.stage = stage
