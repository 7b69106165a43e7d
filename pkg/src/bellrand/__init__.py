"""Randomness certification for time-tagged two-station Bell experiments.

Pipeline: parse station files -> find the inter-station delay and match
coincidences -> compute setting-pair correlations and the CHSH parameter ->
encode event streams as bits -> estimate normalized Lempel-Ziv complexity
-> run a six-test statistical battery.  A synthesizer generates Bell runs
(with optional clock drift) in the same file format.
"""

from bellrand._backend import BACKEND, COMPILED

__version__ = "0.1.0"

__all__ = ["BACKEND", "COMPILED", "__version__"]
