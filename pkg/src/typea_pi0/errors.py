"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An operation was called with arguments outside its precondition."""


class CapacityError(ValueError):
    """The requested computation exceeds the configured enumeration bound."""


class UnsupportedModeError(NotImplementedError):
    """The requested mode is not modeled for this setup."""


class VerificationError(RuntimeError):
    """A constructed certificate failed independent verification.

    Raised only for internal failures: every certificate the engine builds is
    supposed to verify, so this signals a bug rather than bad input.
    """
