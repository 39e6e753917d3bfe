"""Proof-checking kernel for comprehension, extensionality and a fragment of
Frege's Grundgesetze, with a guarded instantiation regime, a definition
checker and small-scale tableau and model search."""

__version__ = "0.1.0"
