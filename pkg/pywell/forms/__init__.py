from .adaptation import AdaptationReport
from .adaptation import arc_nonvanishing
from .adaptation import ArcReport
from .adaptation import average
from .adaptation import check_adapted
from .adaptation import obstruction_hamiltonian
from .calculus import Exactness
from .calculus import FitResidualWarning
from .calculus import is_exact
from .calculus import lie_derivative
from .calculus import pullback
from .calculus import UnsupportedMapError
from .canonical import canonical_form_check
from .canonical import canonical_theta_x
from .one_form import OneForm
