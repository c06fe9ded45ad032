"""Flat-output input saturation and invariant-ellipsoid synthesis for quadrotors."""

from ._flatsat import *  # noqa: F401,F403
from ._flatsat import __doc__  # noqa: F401

__version__ = "0.1.0"
