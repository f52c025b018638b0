from .base import ChartMap
from .chart_map import AffineMap
from .chart_map import ComposedMap
from .chart_map import IdentityMap
from .chart_map import ProductMap
from .chart_map import ProjectionMap
from .chart_map import TrigPolyMap
from .integrators import field_residual
from .integrators import flow_map
from .integrators import integrate
from .integrators import RichardsonWarning
from .integrators import rk4_path
from .integrators import SingularPointError
from .integrators import step_count
from .integrators import Trajectory
from .morphism import check_morphism
from .morphism import MorphismReport
from .torus_flow import eval_field
from .torus_flow import TorusFlow
