"""Rabi-Bloch oscillation simulator for driven two-level tight-binding chains.

Thin wrapper around the compiled core; everything lives in ``rabibloch._core``.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
