"""Exception hierarchy shared by all modules."""


class BishopError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(BishopError, ValueError):
    """An argument violates a documented precondition."""


class OutOfDomain(BishopError, ValueError):
    """A point lies outside the open unit disc (or another model domain)."""


class Unsupported(BishopError):
    """The requested operation needs more regularity than the input carries."""


class DegenerateManifold(BishopError):
    """No cutoff radius makes the gradient of the localized graph small enough."""


class DegenerateBoundary(BishopError):
    """The defining function has vanishing differential at a boundary sample."""


class NonContraction(BishopError, RuntimeError):
    """Picard iterates stopped contracting."""


class NoConvergence(BishopError, RuntimeError):
    """Picard iteration hit the iteration cap before reaching the residual floor."""


class NotLocalized(BishopError):
    """The solution of the global equation leaves the ball where the cutoff is inactive."""


class HolomorphyFailure(BishopError):
    """Boundary trace carries too much negative-frequency content."""


class AttachmentFailure(BishopError):
    """Boundary trace leaves the manifold on the upper semicircle."""


class DomainViolation(BishopError):
    """A disc image exits the model domain."""


class HypothesisViolation(BishopError):
    """A holomorphic map does not send the edge into the target manifold."""
