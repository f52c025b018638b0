from pywell.feature_library import TrigPoly
from pywell.feature_library import TrigPolyStack
from pywell.utils import decimal_fraction
from pywell.utils import require
from pywell.utils import SpecError
from pywell.utils import validate_input


class OneForm:
    """
    1-form ``sum_i theta_i(y) dy_i`` on (R/Z)^n with trig-polynomial
    coefficients.

    Parameters
    ----------
    components : list of TrigPoly
        The coefficients of dy_1, ..., dy_n.

    name : str, optional
        Label used in logs and manifests.

    residual : float, optional (default 0)
        Fit residual when the form was produced by least squares; exact
        constructions leave it at 0.

    Examples
    --------
    >>> from pywell.flows import TorusFlow
    >>> from pywell.forms import OneForm
    >>> theta = OneForm.coordinate(2, 1)
    >>> theta.contract(TorusFlow.bryant())([0.5, 0.0])
    -1.0
    """

    def __init__(self, components, name=None, residual=0.0):
        components = list(components)
        if not components:
            raise ValueError("a 1-form needs at least one component")
        for c in components:
            if not isinstance(c, TrigPoly):
                raise TypeError("form components must be TrigPoly instances")
        dim = len(components)
        if any(c.dim != dim for c in components):
            raise ValueError("every component must live on the {}-torus".format(dim))
        self.dim = dim
        self.components = tuple(components)
        self.name = name
        self.residual = float(residual)
        self._stack = None

    @classmethod
    def zero(cls, dim):
        return cls([TrigPoly.zero(dim) for _ in range(dim)], name="0")

    @classmethod
    def coordinate(cls, dim, i, coef=1):
        """The form ``coef * dy_i``."""
        comps = [TrigPoly.zero(dim) for _ in range(dim)]
        comps[i] = TrigPoly.constant(dim, coef)
        return cls(comps, name="dy%d" % i)

    @classmethod
    def constant(cls, coefs):
        coefs = list(coefs)
        n = len(coefs)
        return cls([TrigPoly.constant(n, c) for c in coefs])

    @classmethod
    def differential(cls, L, scale=None):
        """The exact form ``dL``."""
        kw = {} if scale is None else {"scale": scale}
        return cls(L.gradient(**kw))

    @property
    def degree(self):
        return max(c.degree for c in self.components)

    def __call__(self, y):
        """Coefficient vector at points of shape ``(..., dim)``."""
        y = validate_input(y, self.dim, name="y")
        if self._stack is None:
            self._stack = TrigPolyStack(self.components)
        return self._stack(y)

    def contract(self, flow):
        """The function ``theta(Y) = sum_i theta_i Y_i`` as a TrigPoly."""
        if flow.dim != self.dim:
            raise ValueError(
                "form dimension {} != flow dimension {}".format(self.dim, flow.dim)
            )
        total = TrigPoly.zero(self.dim)
        for t, y in zip(self.components, flow.components):
            total = total + t * y
        return total

    def exterior_derivative(self, scale=None):
        """Coefficients ``d_i theta_j - d_j theta_i`` of ``dy_i ^ dy_j``, i < j."""
        kw = {} if scale is None else {"scale": scale}
        return {
            (i, j): self.components[j].derivative(i, **kw)
            - self.components[i].derivative(j, **kw)
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
        }

    def is_closed(self, tol=0):
        return all(c.is_zero(tol) for c in self.exterior_derivative().values())

    def periods(self):
        """Constant terms of the components, the integrals over the coordinate
        circles when the form is closed."""
        return [c.constant_term for c in self.components]

    def as_fractions(self):
        """Exact copy with coefficients read from their decimal form."""
        return OneForm(
            [
                TrigPoly(
                    self.dim,
                    {
                        k: (decimal_fraction(a), decimal_fraction(b))
                        for k, (a, b) in c.items()
                    },
                )
                for c in self.components
            ],
            name=self.name,
        )

    def as_floats(self):
        return OneForm([c.as_floats() for c in self.components], name=self.name)

    def max_difference(self, other):
        pairs = zip(self.components, other.components)
        return max(a.max_difference(b) for a, b in pairs)

    def __add__(self, other):
        self._check(other)
        return OneForm([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check(other)
        return OneForm([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return OneForm([-c for c in self.components])

    def scale(self, c):
        return OneForm([p.scale(c) for p in self.components])

    def _check(self, other):
        if not isinstance(other, OneForm):
            raise TypeError("expected a OneForm")
        if other.dim != self.dim:
            raise ValueError("dimension mismatch: {} vs {}".format(self.dim, other.dim))

    def __eq__(self, other):
        return isinstance(other, OneForm) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "OneForm(dim={}, name={!r})".format(self.dim, self.name)

    def to_spec(self):
        return {
            "kind": "form",
            "dim": self.dim,
            "components": [c.to_spec() for c in self.components],
        }

    @classmethod
    def from_spec(cls, spec):
        if spec.get("kind", "form") != "form":
            raise SpecError(
                "field 'kind' must be 'form', got {!r}".format(spec["kind"])
            )
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
