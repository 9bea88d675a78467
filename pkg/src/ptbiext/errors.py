"""Exception types raised across the package."""


class PtBiextError(Exception):
    """Base class for all package errors."""


class RankDeficient(PtBiextError):
    """A boundary condition has fewer independent rows than its variant needs."""

    def __init__(self, message, singular_values=()):
        super().__init__(message)
        self.singular_values = tuple(float(s) for s in singular_values)

    def __str__(self):
        base = super().__str__()
        if self.singular_values:
            sv = ", ".join(f"{s:.3e}" for s in self.singular_values)
            return f"{base} (singular values: {sv})"
        return base


class StepSizeUnderflow(PtBiextError):
    """The ODE integrator could not reach the end of the interval."""


class NonFiniteValue(PtBiextError):
    """The ODE integrator produced inf or nan."""


class NodeMissing(PtBiextError):
    """A requested evaluation point is not a grid node."""


class AsymmetricGrid(PtBiextError):
    """The grid is not closed under x -> -x."""


class NoRootInBracket(PtBiextError):
    pass


class MaxIterations(PtBiextError):
    pass


class ConfigError(PtBiextError):
    """Invalid run configuration (bad tolerances, X <= 1, ...)."""
