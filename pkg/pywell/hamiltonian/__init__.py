from .base import BasePotential
from .lift import cotangent_lift
from .lift import LiftedSystem
from .nlw import integrate_nlw
from .nlw import laplacian
from .nlw import max_stable_step
from .nlw import nlw_energy
from .nlw import nlw_state_at
from .nlw import NLWState
from .nlw import StabilityError
from .potential import PolynomialPotential
from .potential import potential_from_spec
from .potential import RBFPotential
from .potential import smoothstep
from .potential import smoothstep_derivative
from .potential import TrigPotential
from .well import energy
from .well import integrate_well
from .well import leapfrog_path
from .well import leapfrog_step
from .well import symplectic_defect
from .well import WellState
from .well import WellTrajectory
