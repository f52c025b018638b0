from pkg_resources import DistributionNotFound
from pkg_resources import get_distribution

try:
    __version__ = get_distribution(__name__).version
except DistributionNotFound:
    pass


from .pywell import WellEmbedding
from pywell.adapted_lp import *
from pywell.differentiation import *
from pywell.embedder import *
from pywell.feature_library import *
from pywell.flows import *
from pywell.forms import *
from pywell.hamiltonian import *
from pywell.optimizers import *
from pywell.turing import *
from pywell.utils import *
