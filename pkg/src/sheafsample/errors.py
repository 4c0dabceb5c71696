"""Exception hierarchy shared by all modules."""


class SheafError(Exception):
    """Base class for every error raised by this package."""


class InvalidFace(SheafError):
    """A face is empty, has repeated vertices, or uses negative ids."""


class UnknownFace(SheafError):
    """A face or vertex is not part of the complex it was looked up in."""


class NotClosed(SheafError):
    """A collection of faces is not closed under taking subsets."""


class ShapeMismatch(SheafError):
    """A matrix does not have the shape implied by the stalk dimensions."""


class MissingRestriction(SheafError):
    """A codimension-1 attachment between nonzero stalks has no restriction."""


class FieldMismatch(SheafError):
    """Real and complex data were mixed in one sheaf or morphism."""


class IllConditioned(SheafError):
    """The numerical rank decision sits too close to the tolerance.

    Attributes:
        gap_ratio: smallest kept singular value over largest dropped one.
        result: the (unreliable) result that would have been returned.
    """

    def __init__(self, message, gap_ratio=None, result=None):
        super().__init__(message)
        self.gap_ratio = gap_ratio
        self.result = result


class UnsupportedSupport(SheafError):
    """A sampling support contains something other than vertices of the base."""


class InvalidMap(SheafError):
    """A vertex map does not define a simplicial map."""


class NotSurjective(SheafError):
    """A sampling component fails to be surjective on its stalk."""

    def __init__(self, message, faces=()):
        super().__init__(message)
        self.faces = tuple(faces)


class NonInvariantKernel(SheafError):
    """A restriction does not carry one component kernel into the next."""

    def __init__(self, message, faces=()):
        super().__init__(message)
        self.faces = tuple(faces)


class IsolatedVertex(SheafError):
    """A construction needs every vertex to have positive degree."""


class HypothesisViolated(SheafError):
    """A closed-form result was requested outside the range where it holds."""


class FormulaMismatch(SheafError):
    """A closed-form dimension disagrees with the numerically computed one."""
