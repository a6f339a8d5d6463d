"""Numerical toolkit for Minkowski valuations generated by zonal kernels and
Brunn-Minkowski type inequalities for them."""

from . import body, measures, minkval, specfun, sphere3, zonal  # noqa: F401

__version__ = "0.1.0"
