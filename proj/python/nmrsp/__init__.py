"""Non-Markovian channels, non-Markovianity measures and RSP fidelity."""

from ._nmrsp import *  # noqa: F401,F403
from ._nmrsp import __version__, __doc__  # noqa: F401
