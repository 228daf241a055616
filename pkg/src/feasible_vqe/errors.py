"""Exception types shared across the package."""


class CapacityError(ValueError):
    """A register or enumeration exceeds the configured size cap."""


class DimensionError(ValueError):
    """Mismatched vector/register lengths."""


class DegenerateSpectrumError(ValueError):
    """Min-max normalization requested on a flat spectrum (e_max == e_min)."""
