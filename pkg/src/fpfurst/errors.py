class DegenerateScaleError(ValueError):
    """Raised when a construction cannot be realized nondegenerately at the
    requested prime, e.g. a required point or slope range is empty."""
