"""Flat import point for the subsonic iteration (implemented in the ``subsonic`` subpackage)."""
from .subsonic import *  # noqa: F401,F403
from .subsonic import __all__  # noqa: F401
