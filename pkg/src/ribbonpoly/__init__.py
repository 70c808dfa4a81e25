"""Exact Tutte and Bollobás-Riordan polynomials of ribbon graphs, their
2-decomposition composition formulas, and the Kauffman bracket of link
diagrams through the all-A ribbon graph."""

__version__ = "0.1.0"
