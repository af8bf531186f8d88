"""Robustness bounds and classifier evaluation on gridded distributions."""

from ._robound import *  # noqa: F401,F403
from ._robound import RoboundError, __doc__  # noqa: F401

__version__ = "0.1.0"
