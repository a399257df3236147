"""Exact envelopes of discontinuous functions on finite spaces and on the real line."""

__version__ = "0.1.0"

from .errors import CapExceeded, EnvlabError, ParseError  # noqa: E402
from .finspace import DEFAULT_CAPS, Caps, FinSpace, PointMap, UpFamily  # noqa: E402

__all__ = [
    "__version__",
    "CapExceeded",
    "EnvlabError",
    "ParseError",
    "DEFAULT_CAPS",
    "Caps",
    "FinSpace",
    "PointMap",
    "UpFamily",
]
