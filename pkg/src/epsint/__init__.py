"""Exact eps-subdifferential calculus for integral functionals over finite measure spaces."""

__version__ = "0.1.0"
