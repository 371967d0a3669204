"""Exact tools for equal sums of like powers: concerted matrices over
cyclotomic integers, solution parametrization, counting bounds and a greedy
big-integer search."""

__version__ = "0.1.0"
