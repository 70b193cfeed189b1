"""Exact computational workbench for transversely symplectic foliations.

Exact rational cohomology of graded commutative models, symplectic Hodge
theory on basic complexes, truncated equivariant Cartan models, and dGBV
algebras with Frobenius potentials.
"""

__version__ = "0.1.0"
