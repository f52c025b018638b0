from .base import BaseFeatureLibrary
from .fourier_library import TorusFourierLibrary
from .trig_polynomial import canonical_frequency
from .trig_polynomial import frequency_box
from .trig_polynomial import torus_grid
from .trig_polynomial import TrigPoly
from .trig_polynomial import TrigPolyStack
from .trig_polynomial import TWO_PI
