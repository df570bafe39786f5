"""Rauzy-graph analysis and adic directive words for minimal subshifts
with first complexity difference bounded by 2."""

__version__ = "0.1.0"
