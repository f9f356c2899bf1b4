"""Exception hierarchy shared by every greenfields module."""


class GreenfieldsError(Exception):
    """Base class for all errors raised by the library."""


class CatalogError(GreenfieldsError):
    """Unknown or malformed catalog group specification."""


class BoundExceededError(GreenfieldsError):
    """A group (or intermediate product) is larger than the configured bound."""

    def __init__(self, what: str, order: int, bound: int):
        self.what = what
        self.order = order
        self.bound = bound
        super().__init__(
            f"{what} has order {order}, above the configured bound {bound} "
            "(raise it with --bound or GREENFIELDS_BOUND)"
        )


class GroupStructureError(GreenfieldsError):
    """Invalid group-theoretic data: non-normal subgroup, non-homomorphism, ..."""


class FieldMismatchError(GreenfieldsError):
    """Mixed scalar fields or incompatible dimensions in linear algebra."""


class SpecSyntaxError(GreenfieldsError):
    """A functor spec, biset word or expression could not be parsed."""


class NotAFieldError(GreenfieldsError):
    """A(1) is not a field where a rank over it was requested."""


class CharacteristicError(GreenfieldsError):
    """The operation needs characteristic 0 (or an invertible denominator)."""


class ZeroElementError(GreenfieldsError):
    """A nonzero element was required."""
