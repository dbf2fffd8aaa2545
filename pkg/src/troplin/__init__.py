"""Max-linear Bayesian networks over the max-times tropical semiring.

Tropical matrix arithmetic with exact tie detection, d- and star-separation
with brute-force oracles, Markov equivalence checking and exhaustive class
enumeration, the trek rule and tropical covariance matrix, tropical rank
constraints, tail dependence, and Frechet sampling.
"""

from .trop_core import (
    DET_SIZE_CAP,
    EPS_TIE,
    CycleError,
    SchemaError,
    ShapeError,
    SizeCapError,
    TropDetResult,
    TropMatrix,
    format_value,
    is_trop_singular,
    kleene_star,
    parse_value,
    submatrix,
    trop_det,
    trop_matmul,
    trop_pow,
    trop_rank,
)
from .graph import (
    ENUM_NODE_CAP,
    Dag,
    Path,
    Trek,
    all_simple_paths,
    all_treks,
    colliders_on,
    directed_paths,
    enumerate_dags,
)
from .separation import (
    STATEMENT_NODE_CAP,
    CiStatement,
    ci_statements,
    conditional_reachability,
    d_connected_path,
    d_separated,
    d_separated_oracle,
    star_connected,
    star_connected_oracle,
    star_separated,
)
from .equivalence import (
    MEC_NODE_CAP,
    MecPartition,
    enumerate_mecs,
    markov_equivalent_d,
    markov_equivalent_star,
    verify_mec_equality,
)
from .model import (
    MaxLinearModel,
    RankCheck,
    TailDependenceMatrix,
    check_rank_constraint,
    sample,
    scan_dsep_rank,
    scan_starsep_rank,
    solve,
    tail_dependence,
    trek_monomial,
    trek_rule_entry,
    trop_covariance,
)

__version__ = "0.1.0"

__all__ = [
    "CiStatement",
    "CycleError",
    "Dag",
    "DET_SIZE_CAP",
    "ENUM_NODE_CAP",
    "EPS_TIE",
    "MEC_NODE_CAP",
    "MaxLinearModel",
    "MecPartition",
    "Path",
    "RankCheck",
    "STATEMENT_NODE_CAP",
    "SchemaError",
    "ShapeError",
    "SizeCapError",
    "TailDependenceMatrix",
    "Trek",
    "TropDetResult",
    "TropMatrix",
    "all_simple_paths",
    "all_treks",
    "check_rank_constraint",
    "ci_statements",
    "colliders_on",
    "conditional_reachability",
    "d_connected_path",
    "d_separated",
    "d_separated_oracle",
    "directed_paths",
    "enumerate_dags",
    "enumerate_mecs",
    "format_value",
    "is_trop_singular",
    "kleene_star",
    "markov_equivalent_d",
    "markov_equivalent_star",
    "parse_value",
    "sample",
    "scan_dsep_rank",
    "scan_starsep_rank",
    "solve",
    "star_connected",
    "star_connected_oracle",
    "star_separated",
    "submatrix",
    "tail_dependence",
    "trek_monomial",
    "trek_rule_entry",
    "trop_covariance",
    "trop_det",
    "trop_matmul",
    "trop_pow",
    "trop_rank",
    "verify_mec_equality",
]
