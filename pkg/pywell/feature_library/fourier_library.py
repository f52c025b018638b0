import numpy as np
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .base import BaseFeatureLibrary
from .trig_polynomial import frequency_box
from .trig_polynomial import TrigPoly
from .trig_polynomial import TWO_PI


class TorusFourierLibrary(BaseFeatureLibrary):
    """
    Generate a library of trigonometric monomials on the torus (R/Z)^n.

    Parameters
    ----------
    degree : int, optional (default 1)
        Largest sup-norm of the frequency vectors k. The library contains
        :math:`\\cos(2\\pi k \\cdot x)` for every canonical k (first nonzero
        entry positive, plus k = 0) and :math:`\\sin(2\\pi k \\cdot x)` for
        every canonical k other than 0.

    include_constant : boolean, optional (default True)
        If False, drop the constant feature k = 0.

    Attributes
    ----------
    n_input_features_ : int
        The torus dimension n.

    n_output_features_ : int
        The total number of output features.

    features_ : list of (tuple, str)
        Frequency vector and kind ("cos" or "sin") of every output column.

    Examples
    --------
    >>> import numpy as np
    >>> from pywell.feature_library import TorusFourierLibrary
    >>> X = np.array([[0.], [0.25]])
    >>> lib = TorusFourierLibrary(degree=1).fit(X)
    >>> lib.transform(X).round(12)
    array([[1., 1., 0.],
           [1., 0., 1.]])
    >>> lib.get_feature_names()
    ['1', 'cos(2pi(x0))', 'sin(2pi(x0))']
    """

    def __init__(self, degree=1, include_constant=True):
        super(TorusFourierLibrary, self).__init__()
        if not isinstance(degree, (int, np.integer)) or degree < 0:
            raise ValueError("degree must be a nonnegative integer")
        if degree == 0 and not include_constant:
            raise ValueError("a degree-0 library without the constant is empty")
        self.degree = degree
        self.include_constant = include_constant

    def fit(self, X, y=None):
        """
        Enumerate the frequency vectors for the torus dimension of X.

        Parameters
        ----------
        X : array-like, shape (n_samples, n_features)
            Points on the torus.

        Returns
        -------
        self : instance
        """
        n_samples, n_features = check_array(X).shape
        self.n_input_features_ = n_features
        features = []
        for k in frequency_box(n_features, self.degree, canonical=True):
            if not any(k):
                if self.include_constant:
                    features.append((k, "cos"))
                continue
            features.append((k, "cos"))
            features.append((k, "sin"))
        # constant first, then by degree
        features.sort(key=lambda f: (max(abs(v) for v in f[0]), f[0], f[1]))
        self.features_ = features
        self._frequencies = np.array([f[0] for f in features], dtype=float)
        self._is_sin = np.array([f[1] == "sin" for f in features])
        self.n_output_features_ = len(features)
        return self

    def get_feature_names(self, input_features=None):
        """
        Return feature names for output features

        Parameters
        ----------
        input_features : list of string, length n_features, optional
            String names for input features if available. By default,
            "x0", "x1", ... "xn_features" is used.

        Returns
        -------
        output_feature_names : list of string, length n_output_features
        """
        check_is_fitted(self)
        if input_features is None:
            input_features = ["x%d" % i for i in range(self.n_input_features_)]
        feature_names = []
        for k, kind in self.features_:
            if not any(k):
                feature_names.append("1")
                continue
            phase = []
            for ki, name in zip(k, input_features):
                if ki == 0:
                    continue
                elif ki == 1:
                    phase.append(name)
                else:
                    phase.append("{} {}".format(ki, name))
            feature_names.append("{}(2pi({}))".format(kind, " + ".join(phase)))
        return feature_names

    def _phases(self, X):
        X = self._validate_points(X)
        return TWO_PI * (X @ self._frequencies.T)

    def transform(self, X):
        """Evaluate every trigonometric monomial at the rows of X.

        Parameters
        ----------
        X : array-like, shape [n_samples, n_features]
            Points on the torus, row by row.

        Returns
        -------
        XP : np.ndarray, shape [n_samples, n_output_features]
        """
        phases = self._phases(X)
        return np.where(self._is_sin, np.sin(phases), np.cos(phases))

    def derivative_transform(self, X, i):
        """Partial derivative in coordinate ``i`` of every feature."""
        phases = self._phases(X)
        if not 0 <= i < self.n_input_features_:
            raise ValueError("coordinate index {} out of range".format(i))
        factor = TWO_PI * self._frequencies[:, i]
        return factor * np.where(self._is_sin, np.cos(phases), -np.sin(phases))

    def coefficients_to_trigpoly(self, coef):
        """Assemble a TrigPoly from one coefficient per feature."""
        check_is_fitted(self)
        coef = np.asarray(coef, dtype=float).ravel()
        if coef.size != self.n_output_features_:
            raise ValueError(
                "expected {} coefficients, got {}".format(
                    self.n_output_features_, coef.size
                )
            )
        terms = {}
        for (k, kind), c in zip(self.features_, coef):
            a, b = terms.get(k, (0.0, 0.0))
            terms[k] = (a + c, b) if kind == "cos" else (a, b + c)
        return TrigPoly(self.n_input_features_, terms)

    def trigpoly_to_coefficients(self, poly):
        """Inverse of ``coefficients_to_trigpoly`` for polynomials in the span."""
        check_is_fitted(self)
        coef = np.zeros(self.n_output_features_)
        for j, (k, kind) in enumerate(self.features_):
            a, b = poly.coefficient(k)
            coef[j] = float(a) if kind == "cos" else float(b)
        return coef
