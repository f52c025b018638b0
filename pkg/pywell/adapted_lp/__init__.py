from .certificate import AdaptedCertificate
from .certificate import FarkasWarning
from .certificate import FEASIBLE
from .certificate import GRID_FEASIBLE
from .certificate import INFEASIBLE
from .certificate import solve
from .cycles import bryant_obstruction
from .cycles import BryantObstruction
from .cycles import circle_average
from .cycles import cycle_integral
from .program import AdaptedLP
from .program import build_lp
