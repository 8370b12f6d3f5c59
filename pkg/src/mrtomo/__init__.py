"""Symmetric-tensor ray-transform toolkit for biharmonic inverse problems.

Subpackages cover exact symmetric tensor algebra, grid-sampled tensor
fields, (generalized) momentum ray transforms and their regularized
inversion, complex geometric optics amplitude construction, a discrete
Dirichlet solver for third-order nonlinear perturbations of the
bilaplacian, and the staged recovery pipeline tying them together.
"""

__version__ = "0.1.0"
