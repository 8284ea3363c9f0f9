"""Exception types shared across the package."""


class TdhoError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TdhoError):
    """A time or grid argument lies outside a scenario's valid domain."""


class SingularityError(DomainError):
    """Evaluation requested too close to a mass zero, or the auxiliary
    amplitude collapsed below its floor during integration."""


class UnsupportedScenario(TdhoError):
    """The requested closed form does not exist for this scenario kind."""


class GridTooSmall(TdhoError):
    """The spatial grid does not contain the state: edge density above
    the decay threshold would alias the momentum-space transform."""


class CausticError(TdhoError):
    """The boundary times enclose (or sit on) a kernel caustic."""


class QuadratureError(TdhoError):
    """An oscillatory quadrature failed to stabilize under extrapolation."""


class NormalizationError(TdhoError):
    """A density handed to an entropy quadrature is not normalized."""


class BoundViolation(TdhoError):
    """Joint entropy fell below the pure-state lower bound by more than
    the numerical tolerance. Signals a numerics bug, never physics."""


class ConfigError(TdhoError):
    """Malformed run configuration (bad JSON, unknown keys, bad semantics)."""


class IoError(TdhoError):
    """Failed to write an output file."""


class DivergenceWarning(UserWarning):
    """A truncated series was evaluated in a regime where it may not have
    converged to the quoted accuracy."""
