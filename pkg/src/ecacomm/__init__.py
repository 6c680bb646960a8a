"""Elementary cellular automata analysis toolkit.

Simulation, isomorphism classes and rescaling, preimage computation, exact
two-party communication complexity, the Pred and SInv decision problems,
per-rule protocol strategies, and a machine-checked claims catalog.
"""

__version__ = "0.1.0"
