"""
Base class for maps between flow phase spaces.
"""
import abc


class ChartMap:
    """
    Base class for smooth maps between tori and Euclidean charts.

    Subclasses carry an exact Jacobian rule, so the differential used by
    morphism checks and pullbacks never comes from finite differences.

    Parameters
    ----------
    source_dim : int
        Dimension of the source torus.

    target_dim : int
        Dimension of the target.

    periodic : bool
        Whether the target is a torus (values are reduced mod 1).
    """

    def __init__(self, source_dim, target_dim, periodic=True):
        if source_dim < 1 or target_dim < 1:
            raise ValueError("dimensions must be positive")
        self.source_dim = int(source_dim)
        self.target_dim = int(target_dim)
        self.periodic = periodic

    # Force subclasses to implement this
    @abc.abstractmethod
    def __call__(self, y):
        """Evaluate at points of shape (..., source_dim)."""
        raise NotImplementedError

    # Force subclasses to implement this
    @abc.abstractmethod
    def jacobian(self, y):
        """Exact Jacobian, shape (..., target_dim, source_dim)."""
        raise NotImplementedError

    def affine_part(self):
        """Return ``(A, b)`` when the map is affine, otherwise None."""
        return None

    def __matmul__(self, inner):
        from .chart_map import ComposedMap

        return ComposedMap(self, inner)
