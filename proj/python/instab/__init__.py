"""Numerical laboratory for nonlinear stabilization and instability experiments.

The heavy lifting lives in the compiled extension `_instab`; this package
re-exports its surface.
"""

from ._instab import *  # noqa: F401,F403
from ._instab import __doc__  # noqa: F401
