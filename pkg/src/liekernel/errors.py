"""Exception hierarchy shared by all modules."""


class LieKernelError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(LieKernelError):
    """Unsupported family, rank, or group specification."""


class ArgumentError(LieKernelError, ValueError):
    """Invalid argument values for an otherwise supported operation."""


class InternalError(LieKernelError):
    """Consistency check failed; indicates a malformed object or a bug."""


class SingularPointError(LieKernelError):
    """Evaluation requested on a Weyl wall where the expression is 0/0."""


class PoleError(LieKernelError):
    """Resolvent evaluated at (or too near) one of its poles."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BranchPointError(LieKernelError):
    """Resolvent evaluated at a branch point."""


class ResourceError(LieKernelError):
    """A truncation or closure bound would require too many terms."""


class ConvergenceError(LieKernelError):
    """Series does not converge for the requested time parameter."""


class NotInGroupError(LieKernelError):
    """Matrix does not satisfy the family's defining relation."""


class ClassificationError(LieKernelError):
    """Eigenvalue pattern matches no evolution domain within tolerance."""

    def __init__(self, message, eigenvalues=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues


class UnsupportedOperationError(LieKernelError):
    """Operation is declared out of scope for these inputs."""
