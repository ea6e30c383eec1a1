"""
Eigenvalue bounds for one-electron molecular Hamiltonians
"""
__version__ = "1.0.0"
