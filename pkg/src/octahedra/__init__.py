"""Rank lower bounds for matrices over GF(2) indexed by octahedra of join powers."""

from .gf2 import Gf2Matrix, rank, read_gf2m, write_gf2m
from .nkmatrix import OctMatrix, check_properties

__all__ = ["Gf2Matrix", "OctMatrix", "check_properties", "rank", "read_gf2m", "write_gf2m"]
__version__ = "0.1.0"
