"""Numerical checks around simplex extremality and stability."""

from ._core import *  # noqa: F401,F403
from ._core import SimplexstabError, __version__  # noqa: F401
