"""Julia sets of transcendental entire functions: rasters, spider's-web loops and checks."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import spiderweb as _spiderweb, verify as _verify

__version__ = "0.1.0"


def verify_report(claim, samples=0):
    """Run a named experiment and return its report as a dict."""
    return _json.loads(_verify(claim, samples))


def spiderweb_report(spec, **kwargs):
    """Spider's-web experiment report as a dict; keyword arguments as in spiderweb()."""
    return _json.loads(_spiderweb(spec, **kwargs))
