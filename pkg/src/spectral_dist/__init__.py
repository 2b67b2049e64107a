"""Spectral Schwartz distributions of operators, verified by quadrature."""

__version__ = "0.1.0"
