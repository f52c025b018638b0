from .base import BaseDifferentiation
from .finite_difference import FiniteDifference
