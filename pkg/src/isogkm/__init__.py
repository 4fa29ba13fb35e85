"""GKM graphs, equivariant-cohomology ranks and numerical checks for
isospectral matrix manifolds of Lie types A and D."""

__version__ = "0.1.0"
