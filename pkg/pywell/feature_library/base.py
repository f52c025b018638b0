"""
Base class for libraries of functions on the torus.
"""
import abc

import numpy as np
from sklearn.base import TransformerMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted


class BaseFeatureLibrary(TransformerMixin):
    """
    Base class for feature libraries on (R/Z)^n.

    Subclasses enumerate their features in ``fit``, evaluate them in
    ``transform`` and turn a coefficient vector back into a TrigPoly in
    ``coefficients_to_trigpoly``; least-squares fitting is shared.
    """

    def __init__(self, **kwargs):
        pass

    @abc.abstractmethod
    def fit(self, X, y=None):
        """
        Enumerate the features for the torus dimension of X.

        Parameters
        ----------
        X : array-like, shape (n_samples, n_features)
            Points on the torus.

        Returns
        -------
        self : instance
        """
        raise NotImplementedError

    @abc.abstractmethod
    def transform(self, X):
        """
        Evaluate every feature at the rows of X.

        Returns
        -------
        XP : np.ndarray, shape [n_samples, n_output_features]
        """
        raise NotImplementedError

    @abc.abstractmethod
    def get_feature_names(self, input_features=None):
        raise NotImplementedError

    @abc.abstractmethod
    def coefficients_to_trigpoly(self, coef):
        raise NotImplementedError

    def _validate_points(self, X):
        check_is_fitted(self)
        X = check_array(X)
        if X.shape[1] != self.n_input_features_:
            raise ValueError(
                "points have dimension {}, library was fit on {}".format(
                    X.shape[1], self.n_input_features_
                )
            )
        return X

    def fit_values(self, X, values):
        """Least-squares trig polynomial through ``values`` sampled at ``X``.

        Returns the fitted TrigPoly and the largest absolute residual at the
        sample points.
        """
        XP = self.transform(X)
        values = np.asarray(values, dtype=float).ravel()
        if values.size != XP.shape[0]:
            raise ValueError(
                "got {} values for {} points".format(values.size, XP.shape[0])
            )
        coef = np.linalg.lstsq(XP, values, rcond=None)[0]
        residual = float(np.max(np.abs(XP @ coef - values))) if values.size else 0.0
        return self.coefficients_to_trigpoly(coef), residual

    @property
    def size(self):
        check_is_fitted(self)
        return self.n_output_features_
