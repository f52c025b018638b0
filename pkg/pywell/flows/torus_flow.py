import numpy as np

from pywell.feature_library import TrigPoly
from pywell.feature_library import TrigPolyStack
from pywell.utils import decimal_fraction
from pywell.utils import print_terms
from pywell.utils import require
from pywell.utils import SpecError
from pywell.utils import validate_input


class TorusFlow:
    """
    Smooth vector field on the torus (R/Z)^n with trig-polynomial components.

    Instances are immutable values; derived data (Jacobian stack,
    nonsingularity certificate) is computed lazily and cached.

    Parameters
    ----------
    components : list of TrigPoly
        The n components Y_1, ..., Y_n, each a TrigPoly on (R/Z)^n.

    name : str, optional
        Label used in logs and manifests.

    Examples
    --------
    >>> from pywell.flows import TorusFlow
    >>> flow = TorusFlow.bryant()
    >>> flow.eval_field([0.25, 0.7]).round(12)
    array([1., 0.])
    """

    def __init__(self, components, name=None):
        components = list(components)
        if not components:
            raise ValueError("a flow needs at least one component")
        for c in components:
            if not isinstance(c, TrigPoly):
                raise TypeError("flow components must be TrigPoly instances")
        dim = len(components)
        if any(c.dim != dim for c in components):
            raise ValueError("every component must live on the {}-torus".format(dim))
        self.dim = dim
        self.components = tuple(components)
        self.name = name
        self._field = None
        self._jac = None
        self._certificate = None

    # constructors -----------------------------------------------------------

    @classmethod
    def rotation(cls, alpha, name="rotation"):
        """Constant field alpha."""
        alpha = [float(a) for a in np.atleast_1d(alpha)]
        n = len(alpha)
        return cls([TrigPoly.constant(n, a) for a in alpha], name=name)

    @classmethod
    def bryant(cls):
        """``sin(2 pi x) d/dx + cos(2 pi x) d/dy`` on the 2-torus."""
        return cls(
            [TrigPoly.sin((1, 0), 1.0), TrigPoly.cos((1, 0), 1.0)], name="bryant"
        )

    @classmethod
    def circle_shift(cls):
        return cls.rotation([1.0], name="circle_shift")

    def product_with_circle(self):
        """The flow (Y, 1) on the torus of one dimension more."""
        n = self.dim + 1
        comps = [c.embed(n, list(range(self.dim))) for c in self.components]
        comps.append(TrigPoly.constant(n, 1.0))
        return TorusFlow(comps, name="{}_x_circle".format(self.name or "flow"))

    # evaluation --------------------------------------------------------------

    @property
    def degree(self):
        return max(c.degree for c in self.components)

    def eval_field(self, x):
        x = validate_input(x, self.dim)
        if self._field is None:
            self._field = TrigPolyStack(self.components)
        return self._field(x)

    __call__ = eval_field

    def derivative_polys(self):
        """Nested list ``[i][j]`` of dY_i/dx_j as TrigPoly."""
        return [[c.derivative(j) for j in range(self.dim)] for c in self.components]

    def jacobian(self, x):
        """Exact Jacobian dY_i/dx_j, shape (..., n, n)."""
        x = validate_input(x, self.dim)
        if self._jac is None:
            self._jac = TrigPolyStack(
                [p for row in self.derivative_polys() for p in row]
            )
        return self._jac(x).reshape(x.shape[:-1] + (self.dim, self.dim))

    def speed_squared(self):
        total = TrigPoly.zero(self.dim)
        for c in self.components:
            total = total + c * c
        return total

    def is_constant(self):
        return all(c.is_constant() for c in self.components)

    def constant_vector(self):
        return np.array([float(c.constant_term) for c in self.components])

    # nonsingularity ------------------------------------------------------------

    def certify_nonsingular(self, grid_res=None):
        """
        Certified lower bound for |Y|^2 over the torus.

        Returns ``(nonsingular, lower_bound)``: the grid minimum of |Y|^2 minus
        the Lipschitz margin from coefficient norms and grid spacing.
        """
        lower = self.speed_squared().certified_minimum(grid_res)
        return lower > 0, lower

    @property
    def nonsingular(self):
        if self._certificate is None:
            self._certificate = self.certify_nonsingular()
        return self._certificate[0]

    # conversion ---------------------------------------------------------------

    def as_fractions(self):
        """Copy with exact rational coefficients read from their decimal form."""
        return TorusFlow(
            [_decimal_fractions(c) for c in self.components], name=self.name
        )

    def equations(self, input_features=None, precision=3):
        from pywell.feature_library import TorusFourierLibrary

        lib = TorusFourierLibrary(degree=self.degree).fit(np.zeros((1, self.dim)))
        names = lib.get_feature_names(input_features)
        return [
            print_terms(lib.trigpoly_to_coefficients(c), names, precision)
            for c in self.components
        ]

    def print(self, lhs=None, precision=3):
        """Print the field component by component."""
        lhs = lhs or ["x%d'" % i for i in range(self.dim)]
        for name, eq in zip(lhs, self.equations(precision=precision)):
            print("{} = {}".format(name, eq))

    def to_spec(self):
        return {
            "kind": "flow",
            "dim": self.dim,
            "components": [c.to_spec() for c in self.components],
        }

    @classmethod
    def from_spec(cls, spec):
        dim = require(spec, "dim", int)
        comps = require(spec, "components", list)
        if len(comps) != dim:
            raise SpecError(
                "field 'components' has {} entries, expected dim={}".format(
                    len(comps), dim
                )
            )
        try:
            polys = [TrigPoly.from_spec(dim, c) for c in comps]
        except (TypeError, ValueError) as e:
            raise SpecError("field 'components': {}".format(e))
        return cls(polys, name=spec.get("name"))

    def __eq__(self, other):
        return isinstance(other, TorusFlow) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "TorusFlow(dim={}, name={!r})".format(self.dim, self.name)


def _decimal_fractions(poly):
    return TrigPoly(
        poly.dim,
        {k: (decimal_fraction(a), decimal_fraction(b)) for k, (a, b) in poly.items()},
    )


def eval_field(flow, x):
    """Evaluate the vector field of ``flow`` at ``x``."""
    return flow.eval_field(x)
