"""
Base class for pywell optimizers.
"""
import abc

from sklearn.base import BaseEstimator


class BaseOptimizer(BaseEstimator):
    """
    Base class for pywell optimizers. Subclasses must implement
    a _reduce method for carrying out the bulk of the work of
    fitting a model.

    Parameters
    ----------
    max_iter : int, optional (default 20)
        Maximum iterations of the optimization algorithm.

    Attributes
    ----------
    coef_ : array or list
        Solution vector.

    history_ : list
        History of the objective (or residual norm) over iterations.

    n_iter_ : int
        Number of iterations performed.
    """

    def __init__(self, max_iter=20):
        if max_iter <= 0:
            raise ValueError("max_iter must be positive")

        self.max_iter = max_iter

    # Force subclasses to implement this
    @abc.abstractmethod
    def _reduce(self, *args, **kwargs):
        """
        Carry out the bulk of the work of the fit function.

        Subclass implementations MUST update self.coef_.
        """
        raise NotImplementedError

    def fit(self, *args, **reduce_kws):
        """
        Fit the model.

        Positional arguments are problem data specific to the subclass
        and are forwarded to ``_reduce`` together with ``reduce_kws``.

        Returns
        -------
        self : returns an instance of self
        """
        self.n_iter_ = 0
        self.history_ = []
        self._reduce(*args, **reduce_kws)
        return self
