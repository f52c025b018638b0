from .embedding import EmbeddingError
from .embedding import EmbeddingMap
from .embedding import flat_embedding
from .embedding import generates_lattice
from .embedding import optimize_embedding
from .embedding import tautological_form
from .metric import build_metric
from .metric import MetricField
from .metric import NotStronglyAdaptedError
from .potential import build_potential
from .potential import cutoff
from .potential import estimate_reach
from .potential import ExtendedPotential
from .verify import EmbeddingReport
from .verify import verify_embedding
