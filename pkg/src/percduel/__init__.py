"""Maker-Breaker percolation duel on the square lattice.

Engine, Breaker strategies, Maker adversaries, polluted-board sampling,
and the verification harness that certifies the round-count guarantees.
"""

__version__ = "0.1.0"
