"""Exception types raised by the library and mapped to CLI exit codes."""


class StarCIError(Exception):
    """Base class for all library errors."""


class InputError(StarCIError, ValueError):
    """Bad observation data: empty samples, values outside [0, 1], malformed files."""


class ConfigurationError(StarCIError, ValueError):
    """Invalid or incomplete strategy / experiment configuration."""


class ContractError(StarCIError, ValueError):
    """A caller broke an operation precondition (e.g. a bet outside its admissible range)."""


class ObservationRangeError(InputError):
    """An observation outside the support a method accepts ([0, 1], or {0, 1} for binomial methods)."""
