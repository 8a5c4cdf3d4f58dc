"""Mixed Dirichlet-Neumann Laplace eigenpairs, eigenvalue bounds and hot-spots diagnostics."""

__version__ = "0.1.0"
