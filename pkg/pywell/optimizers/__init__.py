from .base import BaseOptimizer
from .gauss_newton import GaussNewton
from .rational_simplex import RationalSimplex
from .rational_simplex import verify_optimality
