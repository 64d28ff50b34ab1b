"""Quasi-static simulation and calibration of tendon-driven compliant fingers."""

from ._flexhand import *  # noqa: F401,F403
from ._flexhand import __doc__  # noqa: F401
