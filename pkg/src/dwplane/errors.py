class DWPlaneError(Exception):
    """Base class for all library errors."""


class SpecError(DWPlaneError, ValueError):
    """A norm description is malformed or does not describe a norm."""


class GeometryError(DWPlaneError, ValueError):
    """Degenerate polygon geometry (e.g. parallel support lines)."""


class ArgumentError(DWPlaneError, ValueError):
    """An operation was called outside its precondition."""


class ExcludedPairError(ArgumentError):
    """The pair (u, v) is antipodal, so u + v vanishes."""


class InternalError(DWPlaneError, RuntimeError):
    """A numerical invariant failed; indicates a broken evaluator or bug."""
