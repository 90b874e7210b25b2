"""Exact finite-time error analysis for decentralized TD(0).

Thin wrapper over the C++ extension; all operations live in `_tdmjls`.
"""

from ._tdmjls import *  # noqa: F401,F403
from ._tdmjls import __version__  # noqa: F401
