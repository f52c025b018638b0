from .base import decimal_fraction
from .base import file_sha256
from .base import fraction_from_str
from .base import fraction_to_str
from .base import load_spec
from .base import print_terms
from .base import reduce_mod1
from .base import require
from .base import SpecError
from .base import torus_difference
from .base import torus_distance
from .base import validate_input
from .base import validate_positive
