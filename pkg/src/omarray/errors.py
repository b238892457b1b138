"""Exception and warning types shared across the package."""


class ParameterError(ValueError):
    """Raised for invalid or out-of-range inputs and configuration values."""


class ContractError(ValueError):
    """Raised when an input violates a numerical contract (norm, unitarity, ...)."""


class InstabilityError(RuntimeError):
    """Raised when a drift matrix is not Hurwitz and no steady state exists."""


class IntegrationError(RuntimeError):
    """Raised when a numerical tolerance cannot be met."""


class AdiabaticRegimeWarning(UserWarning):
    """Emitted when parameters fall outside the adiabatic-elimination regime."""


class GoodCavityWarning(UserWarning):
    """Emitted when parameters fall outside the coherent-exchange regime."""
