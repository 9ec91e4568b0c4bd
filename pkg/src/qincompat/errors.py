"""Exception types shared across the package."""


class ValidityError(ValueError):
    """An object violates its defining constraints (bias range, sharpness cap, ...)."""


class ShapeError(ValueError):
    """Mismatched dimensions, outcome counts, or axis indices."""


class CompletenessError(ValueError):
    """A collection of effects does not sum to the identity."""


class DomainError(ValueError):
    """A numeric argument lies outside the domain of a closed-form expression."""
