"""Frequent and maximal itemset mining on an embedded pseudo-Boolean solver."""

from .dataset import ItemsetDatabase, coverage, density, freq, generate, load, support
from .encoder import EncodeOptions, encode, export
from .oracle import apriori, maximal, verify
from .search import MiningOutcome, mine

__version__ = "0.1.0"

__all__ = [
    "ItemsetDatabase", "coverage", "density", "freq", "generate", "load", "support",
    "EncodeOptions", "encode", "export",
    "apriori", "maximal", "verify",
    "MiningOutcome", "mine",
]
