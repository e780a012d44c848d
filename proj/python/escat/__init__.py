"""2D elastic wave scattering toolkit for polygonal media."""

from _escat import *  # noqa: F401,F403
from _escat import __version__  # noqa: F401
