"""Monodromy verification toolkit: permutation groups, wreath kernels, branch cycles."""

__version__ = "0.1.0"
