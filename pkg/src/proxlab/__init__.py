"""proxlab: a query-model laboratory for proof-of-proximity protocols.

Executable verifiers with exact query accounting for block-decomposable
properties (parity, k-monotonicity, layered branching programs, Eulerian
orientations), amplitude-amplification and collision-finding cost models,
linear-code local testing and decoding, bipartiteness of rapidly-mixing
bounded-degree graphs, and threshold-degree lower-bound tooling.
"""

from .amplify import (AmplifiedRoutine, ConfigurationError, VerdictTrace,
                      amplified_success, build_schedule,
                      exact_reject_probability, run_amplified)
from .collision import CollisionInstance, find_collision
from .oracle import (BitOracle, CountingOracle, FieldOracle, FunctionOracle,
                     GraphOracle, OracleIndexError)
from .protocol import (Decomposition, POMap, ProtocolResult, SubVerifierSpec,
                       decompose_verify, decompose_verify_po, exact_decide,
                       pomap_speedup, precision_sampling_levels,
                       trivial_sub_verifier)

__all__ = [
    "AmplifiedRoutine", "BitOracle", "CollisionInstance", "ConfigurationError",
    "CountingOracle", "Decomposition", "FieldOracle", "FunctionOracle",
    "GraphOracle", "OracleIndexError", "POMap", "ProtocolResult",
    "SubVerifierSpec", "VerdictTrace", "amplified_success", "build_schedule",
    "decompose_verify", "decompose_verify_po", "exact_decide",
    "exact_reject_probability", "find_collision", "pomap_speedup",
    "precision_sampling_levels", "run_amplified", "trivial_sub_verifier",
]

__version__ = "0.1.0"
