"""Marked Khovanov homology over GF(2) and binary dihedral representation counts."""
__version__ = "0.1.0"
