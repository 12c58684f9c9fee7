"""Exception hierarchy shared across the package."""


class CliffordLabError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(CliffordLabError, ValueError):
    """Operands act on different numbers of qubits."""


class ContractViolation(CliffordLabError, ValueError):
    """An input breaks a documented precondition (e.g. a non-normalized state)."""


class CapacityError(CliffordLabError, ValueError):
    """A request exceeds what the circuit geometry can hold (e.g. too many T-gates)."""


class ConfigError(CliffordLabError, ValueError):
    """A run configuration is malformed or inconsistent (CLI exit code 2)."""


class ResourceCapError(CliffordLabError, RuntimeError):
    """A run would exceed the configured memory/size budget for its experiment kind."""


class NumericalError(CliffordLabError, RuntimeError):
    """A numerical routine produced results outside its validity tolerance."""
