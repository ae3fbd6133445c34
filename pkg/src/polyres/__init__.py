"""Exact Newton-polygon invariants and blowup resolution for surfaces
x^p = F(y,z) over finite fields of characteristic p."""

__version__ = "0.1.0"
