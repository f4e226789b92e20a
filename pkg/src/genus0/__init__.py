"""Dynamics of planar maps whose invariant fibers are rational curves."""

from .builtins import BUILTIN_NAMES, builtin
from .curves import *  # noqa: F401,F403
from .fibered_dynamics import *  # noqa: F401,F403
from .mobius import *  # noqa: F401,F403
from .orbits import *  # noqa: F401,F403
from .parser import ParseError, parse_expression, parse_scalar

__version__ = "0.1.0"
