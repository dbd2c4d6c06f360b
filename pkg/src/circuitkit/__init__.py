"""circuitkit: exact-arithmetic circuits of polyhedra from graph problems."""

from .circuits import (
    CapExceededError,
    Circuit,
    ConstraintSystem,
    ImbalanceReport,
    NotCircuit,
    UNBOUNDED,
    WalkTrace,
    enumerate_circuits,
    feasible_circuits_at,
    imbalance,
    is_circuit,
    max_step,
    validate_walk,
    walk_bfs,
)
from .graphs import Graph
from .ratmat import (
    RatMatrix,
    ZeroVectorError,
    canonical_sign,
    kernel_basis,
    normalize_coprime,
    rank,
    rat,
)

__version__ = "0.1.0"
