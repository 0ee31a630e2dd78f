"""Rearrangement calculus, Hardy-type operators and optimal target norms."""
from .kernels import BACKEND

__version__ = "0.1.0"
