"""vertexid: exact q-series engine for hook-length and topological-vertex
identities, verified coefficient by coefficient on truncated windows."""

from .parampoly import ParamPoly, RING_Q, RING_T, RING_T1_T3
from .partitions import Partition, partitions_of, partitions_up_to
from .series import MultiSeries, TruncationSpec, euler_product, first_mismatch
from .symfunc import Specialization, complete_h, principal_schur, required_variable_count, skew_schur
from .vertex import check_cyclic, vertex
from .graphs import Graph, builtin, evaluate, rotate_start
from .identities import IdentityReport, list_identities, verify

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "IdentityReport",
    "MultiSeries",
    "ParamPoly",
    "Partition",
    "RING_Q",
    "RING_T",
    "RING_T1_T3",
    "Specialization",
    "TruncationSpec",
    "builtin",
    "check_cyclic",
    "complete_h",
    "euler_product",
    "evaluate",
    "first_mismatch",
    "list_identities",
    "partitions_of",
    "partitions_up_to",
    "principal_schur",
    "required_variable_count",
    "rotate_start",
    "skew_schur",
    "verify",
    "vertex",
]
