from .compiled import compile_machine
from .compiled import CompiledDiffeo
from .compiled import halting_set
from .compiled import HaltingSet
from .compiled import LayoutError
from .compiled import orbit_distances
from .compiled import OrbitResult
from .compiled import OutsidePieces
from .compiled import run_orbit
from .compiled import step_point
from .encoding import check_base
from .encoding import decode_window
from .encoding import encode_tape
from .encoding import find_rect
from .encoding import inverse_shift_map
from .encoding import random_tape
from .encoding import shift_check
from .encoding import shift_map
from .encoding import TapePoint
from .machine import BudgetExhausted
from .machine import Halted
from .machine import RunResult
from .machine import symbolic_run
from .machine import symbolic_step
from .machine import symbolic_trace
from .machine import Tape
from .machine import TuringMachine
from .machines import copier
from .machines import counter
from .machines import incrementer
from .machines import MACHINES
from .machines import self_loop
from .machines import writer
from .suspension import suspend
from .suspension import suspension_enters
from .suspension import suspension_eval
from .suspension import SuspensionFlow
