"""Exception types shared across the package."""


class SpinorError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(SpinorError, ValueError):
    pass


class RepresentationError(SpinorError, ValueError):
    """A gamma representation violates one of its defining identities.

    ``identity`` names the first identity that failed.
    """

    def __init__(self, identity, violation=None, message=None):
        self.identity = identity
        self.violation = violation
        if message is None:
            message = f"representation invalid: {identity}"
            if violation is not None:
                message += f" (violation {violation:.3e})"
        super().__init__(message)


class EntangledGammaError(RepresentationError):
    """gamma4 does not factor as kappa_A (x) kappa_B."""


class NullSpinorError(SpinorError, ValueError):
    pass


class NotDecomposableError(SpinorError, ArithmeticError):
    """No generalized Schmidt decomposition exists for the given spinor.

    ``code`` is a short machine-readable diagnostic:
    ``complex-spectrum``, ``null-eigenvector``, ``coefficient-range`` or
    ``not-decomposable-at-tau``.
    """

    def __init__(self, code, message=None):
        self.code = code
        super().__init__(message or f"not decomposable ({code})")


class UnsupportedTPSError(SpinorError, ValueError):
    """The chosen tensor product structure admits no decomposition engine."""
