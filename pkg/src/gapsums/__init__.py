"""Verification toolkit for Dirichlet character sums and polynomial phase sums on GAPs mod q."""

__version__ = "0.1.0"
