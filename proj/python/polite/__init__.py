"""Numerical toolkit for polite group actions.

Arrays go in and come out as numpy arrays; report-style results are plain dicts.
"""

from ._core import *  # noqa: F401,F403
from ._core import ContinuationError, DomainError, IntegrationError, NoCrossingError  # noqa: F401

__version__ = "0.1.0"
