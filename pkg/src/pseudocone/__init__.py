"""Finite computations with pseudofunctors, their pseudo-cones and the equivariant model built on them."""
__version__ = "0.1.0"
