"""Symmetric Ornstein-Uhlenbeck semigroups: reversibility checks, Gramians,
second quantization, Gauss-Sobolev diagnostics and exact sampling."""

from ._ousem import *  # noqa: F401,F403
from ._ousem import __version__  # noqa: F401
