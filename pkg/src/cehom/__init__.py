"""Cartan-Eilenberg structure and Gorenstein projective complexes over finite rings."""

from .ring import CORPUS, F2_X2, F2_XY, F3_X2, Z4, IntegersMod, MonomialQuotient, PolyQuotient, make_ring

__all__ = ["CORPUS", "F2_X2", "F2_XY", "F3_X2", "Z4", "IntegersMod", "MonomialQuotient", "PolyQuotient", "make_ring"]
