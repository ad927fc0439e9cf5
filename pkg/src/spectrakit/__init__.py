"""Length spectra, McShane identities and counting bounds for hyperbolic surfaces."""

from .bounds import *  # noqa: F401,F403
from .exceptions import *  # noqa: F401,F403
from .hypgeom import *  # noqa: F401,F403
from .interrogate import *  # noqa: F401,F403
from .mcshane import *  # noqa: F401,F403
from .spectrum import *  # noqa: F401,F403
from .surface import *  # noqa: F401,F403
from . import bounds, hypgeom, interrogate, mcshane, spectrum, surface, words

__version__ = "0.1.0"
