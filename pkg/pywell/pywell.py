import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.validation import check_is_fitted

from pywell.embedder import build_metric
from pywell.embedder import build_potential
from pywell.embedder import flat_embedding
from pywell.embedder import MetricField
from pywell.embedder import optimize_embedding
from pywell.embedder import verify_embedding
from pywell.feature_library import TorusFourierLibrary
from pywell.hamiltonian import integrate_well
from pywell.utils import print_terms
from pywell.utils import validate_input


class WellEmbedding(BaseEstimator):
    """
    Realize a torus flow with a strongly adapted 1-form as a potential well.

    ``fit`` builds the metric in which the flow field and the form are dual,
    embeds the torus isometrically into R^m, and extends the on-manifold
    potential to all of R^m. Trajectories of the resulting well started on
    the image of the torus are the images of the flow trajectories.

    Parameters
    ----------
    g0 : MetricField, optional
        Base metric of the construction, the identity by default.

    delta : float, optional (default 1e-3)
        Certified lower bound required of the metric's eigenvalues.

    optimize : boolean, optional (default False)
        Use the Gauss-Newton embedding even when the metric is constant.
        Nonconstant metrics always use it.

    m : int, optional
        Target dimension of the optimized embedding. Defaults to the larger
        of ``2 n + 2`` and the dimension of the flat starting embedding.

    degree : int, optional (default 4)
        Degree of the optimized embedding.

    iters : int, optional (default 50)
        Gauss-Newton budget.

    max_frequency : int, optional (default 3)
        Frequency bound of the flat embedding search.

    tau : float, optional (default 1)
        Strength of the quadratic tail of the potential.

    grid_res : int, optional
        Grid resolution of the potential samples.

    random_state : int or RandomState, optional
        Seeds the padding of the optimized embedding.

    Attributes
    ----------
    metric_ : MetricField

    embedding_ : EmbeddingMap
        Carries the flow, so ``embedding_.p`` is the momentum map.

    potential_ : ExtendedPotential

    report_ : EmbeddingReport
        Set by ``score``.

    Examples
    --------
    >>> from pywell import WellEmbedding
    >>> from pywell.flows import TorusFlow
    >>> from pywell.forms import OneForm
    >>> flow, theta = TorusFlow.circle_shift(), OneForm.coordinate(1, 0)
    >>> model = WellEmbedding().fit(flow, theta)
    >>> model.embedding_.m
    2
    """

    def __init__(
        self,
        g0=None,
        delta=1e-3,
        optimize=False,
        m=None,
        degree=4,
        iters=50,
        max_frequency=3,
        tau=1.0,
        grid_res=None,
        random_state=None,
    ):
        self.g0 = g0
        self.delta = delta
        self.optimize = optimize
        self.m = m
        self.degree = degree
        self.iters = iters
        self.max_frequency = max_frequency
        self.tau = tau
        self.grid_res = grid_res
        self.random_state = random_state

    def _embed(self, metric):
        n = metric.dim
        if metric.is_constant(1e-14) and not self.optimize:
            return flat_embedding(metric, max_frequency=self.max_frequency)
        m = self.m
        if m is None:
            flat = flat_embedding(
                MetricField.constant(metric.constant_part()),
                max_frequency=self.max_frequency,
            )
            m = max(2 * n + 2, flat.m)
        embedding = optimize_embedding(
            metric,
            m,
            degree=self.degree,
            iters=self.iters,
            random_state=self.random_state,
        )
        if not embedding.converged:
            warnings.warn(
                "embedding optimization stopped at Gram residual {:.2e}".format(
                    embedding.residual
                ),
                ConvergenceWarning,
            )
        return embedding

    def fit(self, flow, theta, quiet=False):
        """
        Build metric, embedding and potential.

        Parameters
        ----------
        flow : TorusFlow

        theta : OneForm
            Strongly adapted to ``flow``.

        quiet : boolean, optional (default False)
            Suppress convergence and fit-residual warnings.

        Returns
        -------
        self : returns an instance of self
        """
        if theta.dim != flow.dim:
            raise ValueError("flow and form live on different tori")
        action = "ignore" if quiet else "default"
        with warnings.catch_warnings():
            warnings.filterwarnings(action, category=ConvergenceWarning)
            warnings.filterwarnings(action, category=UserWarning)
            self.metric_ = build_metric(flow, theta, g0=self.g0, delta=self.delta)
            embedding = self._embed(self.metric_)
        self.flow_ = flow
        self.embedding_ = embedding.with_flow(flow)
        self.potential_ = build_potential(
            self.embedding_, flow, tau=self.tau, grid_res=self.grid_res
        )
        return self

    def initial_state(self, y0):
        """The well state ``(q(y0), p(y0))``."""
        check_is_fitted(self, "potential_")
        y0 = validate_input(y0, self.flow_.dim, name="y0")
        return self.embedding_.state(y0)

    def simulate(self, y0, T, dt=1e-3):
        """
        Integrate the well from the image of ``y0``.

        Returns
        -------
        trajectory : WellTrajectory
        """
        return integrate_well(self.potential_, self.initial_state(y0), T, dt)

    def score(self, y0_samples, T, tol=1e-4, dt=1e-3, n_checkpoints=20):
        """
        Negated largest gap between well and embedded flow trajectories.

        The full comparison is kept in ``report_``.
        """
        check_is_fitted(self, "potential_")
        self.report_ = verify_embedding(
            self.flow_,
            self.embedding_,
            self.potential_,
            y0_samples,
            T,
            tol=tol,
            dt=dt,
            n_checkpoints=n_checkpoints,
        )
        return -self.report_.max_deviation

    def equations(self, input_features=None, precision=3):
        """The embedding components ``q_i(y)`` as strings."""
        check_is_fitted(self, "embedding_")
        degree = max(c.degree for c in self.embedding_.components)
        lib = TorusFourierLibrary(degree=degree).fit(np.zeros((1, self.flow_.dim)))
        names = lib.get_feature_names(input_features)
        return [
            print_terms(lib.trigpoly_to_coefficients(c), names, precision)
            for c in self.embedding_.components
        ]

    def print(self, precision=3):
        for i, eq in enumerate(self.equations(precision=precision)):
            print("q{} = {}".format(i + 1, eq))
