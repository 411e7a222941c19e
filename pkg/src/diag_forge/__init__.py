"""Executable models of diagonalization over provably total machines."""

__version__ = "0.1.0"
