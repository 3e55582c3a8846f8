"""Toolkit for k-extremal submanifolds of spheres: exact isoparametric
classification, curvature pinching bounds and lemma verification."""

from .algebra import Scalar, sgn, sqrt_exact

__version__ = "0.1.0"

__all__ = ["Scalar", "sgn", "sqrt_exact", "__version__"]
