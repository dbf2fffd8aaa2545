"""Max-linear model semantics on a DAG.

A model is a coefficient matrix C supported on a DAG: X_i is the maximum of
c_ij * X_j over parents j and an independent positive innovation Z_i.  The
structural equations solve to X = C_star (tropical) Z, where C_star is the
Kleene star; the tropical covariance matrix is C_star times its transpose in
max-times arithmetic, and its entries equal the best trek weight between the
two nodes (the trek enumeration below is kept as an independent oracle for
that identity).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import Dag, Trek, all_treks
from .separation import (
    STATEMENT_NODE_CAP,
    _d_separated_masks,
    _d_statement_triples,
    _mask_nodes,
    _star_statement_triples,
    _validate_sets,
)
from .trop_core import (
    DET_SIZE_CAP,
    SchemaError,
    ShapeError,
    SizeCapError,
    TropMatrix,
    format_value,
    kleene_star,
    parse_value,
    trop_matmul,
    trop_rank,
)


class MaxLinearModel:
    """A DAG plus a coefficient matrix supported on it.

    Support condition: coefficients[i-1][j-1] > 0 exactly when the graph has
    the edge j -> i; the diagonal is 0 (innovations enter separately).
    """

    __slots__ = ("graph", "coefficients", "_star")

    def __init__(self, graph: Dag, coefficients: TropMatrix):
        n = graph.n
        if coefficients.rows != n or coefficients.cols != n:
            raise ShapeError(
                f"coefficient matrix must be {n}x{n} for a graph on {n} nodes"
            )
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                w = coefficients[i - 1, j - 1]
                if (j, i) in graph.edges:
                    if not w > 0:
                        raise ValueError(f"edge {j}->{i} must carry a positive coefficient")
                elif w != 0:
                    raise ValueError(
                        f"coefficient ({i},{j}) is nonzero but the edge {j}->{i} is absent"
                    )
        self.graph = graph
        self.coefficients = coefficients
        self._star = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def exact(self) -> bool:
        return self.coefficients.exact

    def kleene(self) -> TropMatrix:
        """Kleene star of the coefficient matrix (cached)."""
        if self._star is None:
            self._star = kleene_star(self.coefficients)
        return self._star

    def to_float(self) -> "MaxLinearModel":
        if not self.exact:
            return self
        return MaxLinearModel(self.graph, self.coefficients.to_float())

    @classmethod
    def from_edge_weights(cls, graph: Dag, weights: dict, exact: bool = True) -> "MaxLinearModel":
        """Build from a mapping (from, to) -> weight; edges not in the mapping
        default to weight 1."""
        n = graph.n
        grid = [[Fraction(0) if exact else 0.0 for _ in range(n)] for _ in range(n)]
        for (u, v) in graph.edges:
            w = weights.get((u, v), 1)
            grid[v - 1][u - 1] = w if not isinstance(w, str) else parse_value(w, exact)
        return cls(graph, TropMatrix(grid, exact=exact))

    def to_json_dict(self) -> dict:
        edges = sorted(self.graph.edges)
        weights = [
            format_value(self.coefficients[v - 1, u - 1]) for u, v in edges
        ]
        return self.graph.to_json_dict(weights=weights)

    @classmethod
    def from_json_dict(cls, obj, exact: bool = True) -> "MaxLinearModel":
        graph = Dag.from_json_dict(obj)
        raw_edges = [(item["from"], item["to"]) for item in obj["edges"]]
        raw_weights = obj.get("weights")
        if raw_weights is None:
            raw_weights = [1] * len(raw_edges)
        if len(raw_weights) != len(raw_edges):
            raise SchemaError("weights array must parallel the edges array")
        n = graph.n
        grid = [[Fraction(0) if exact else 0.0 for _ in range(n)] for _ in range(n)]
        for (u, v), w in zip(raw_edges, raw_weights):
            try:
                grid[v - 1][u - 1] = parse_value(w, exact)
            except (TypeError, ValueError) as e:
                raise SchemaError(f"bad weight value {w!r}: {e}") from None
        return cls(graph, TropMatrix(grid, exact=exact))

    def __repr__(self) -> str:
        return f"MaxLinearModel(n={self.n}, edges={sorted(self.graph.edges)})"


def solve(model: MaxLinearModel, z: Sequence) -> list:
    """Observation vector X = C_star (tropical) Z for a fixed innovation
    vector; agrees with evaluating the structural equations in topological
    order."""
    zs = list(z)
    if len(zs) != model.n:
        raise ShapeError(f"innovation vector must have length {model.n}")
    if any(not x > 0 for x in zs):
        raise ValueError("innovations must be strictly positive")
    star = model.kleene()
    out = []
    for i in range(model.n):
        row = star.row(i)
        out.append(max(w * zs[j] for j, w in enumerate(row) if w))
    return out


def sample(model: MaxLinearModel, alpha, m: int, seed: int) -> np.ndarray:
    """Draw m independent observation vectors with standard Frechet(alpha)
    innovations.

    Innovations come from the inverse CDF z = (-ln u) ** (-1/alpha) applied to
    PCG64 uniforms (numpy's default_rng), so output is reproducible for a
    fixed seed.  Returns an (m, n) float array.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValueError("sample count must be a positive integer")
    n = model.n
    star = np.array(model.kleene().to_float().to_lists(), dtype=float)
    rng = np.random.default_rng(seed)
    u = rng.random((m, n))
    u = np.where(u > 0.0, u, np.finfo(float).tiny)
    z = (-np.log(u)) ** (-1.0 / float(alpha))
    x = np.empty((m, n), dtype=float)
    for i in range(n):
        x[:, i] = (z * star[i]).max(axis=1)
    return x


def trop_covariance(model: MaxLinearModel) -> TropMatrix:
    """Tropical covariance matrix: the Kleene star times its transpose."""
    star = model.kleene()
    return trop_matmul(star, star.transpose())


def trek_monomial(model: MaxLinearModel, trek: Trek):
    """Product of the edge coefficients along both sides of the trek (the
    innovation weight at the top is 1)."""
    c = model.coefficients
    prod = Fraction(1) if model.exact else 1.0
    for parent, child in trek.steps():
        w = c[child - 1, parent - 1]
        if not w:
            raise ValueError(f"trek step {parent}->{child} is not an edge of the model")
        prod = prod * w
    return prod


def trek_rule_entry(model: MaxLinearModel, i: int, j: int):
    """Maximum trek monomial over all treks between i and j.

    This is the trek-rule form of the tropical covariance entry and serves as
    its independent oracle: it never touches the Kleene star.
    """
    model.graph._check_node(i)
    model.graph._check_node(j)
    best = Fraction(0) if model.exact else 0.0
    for trek in all_treks(model.graph, i, j):
        mono = trek_monomial(model, trek)
        if mono > best:
            best = mono
    return best


@dataclass(frozen=True)
class RankCheck:
    """Tropical rank of one covariance block against the conditioning-set size.

    ``satisfied`` is the equality observed == expected; it is None for purely
    exploratory records (star-separation scans, where no rank law is claimed).
    ``d_separated`` reports whether the statement is a d-separation instance,
    since the rank constraint is only asserted for those.
    """

    I: tuple
    J: tuple
    K: tuple
    expected: int
    observed: int
    d_separated: bool
    satisfied: bool | None

    def to_json_dict(self) -> dict:
        return {
            "I": list(self.I),
            "J": list(self.J),
            "K": list(self.K),
            "expected": self.expected,
            "observed": self.observed,
            "d_separated": self.d_separated,
            "satisfied": self.satisfied,
        }


def _require_exact(model: MaxLinearModel) -> None:
    if not model.exact:
        raise ValueError(
            "rank-constraint checks require exact (rational) coefficients; "
            "tropical singularity is a tie condition and floating ties are unreliable"
        )


def _block_rank(sigma: TropMatrix, rows, cols, size_cap: int) -> int:
    if len(rows) > size_cap or len(cols) > size_cap:
        raise SizeCapError(
            f"rank block {len(rows)}x{len(cols)} exceeds the cap of {size_cap}"
        )
    return trop_rank(sigma.submatrix(rows, cols), size_cap=size_cap)


def check_rank_constraint(
    model: MaxLinearModel, I, J, K, *, size_cap: int = DET_SIZE_CAP
) -> RankCheck:
    """Tropical rank of the covariance block (I u K) x (J u K) versus #K.

    d-separation of I and J by K is the hypothesis under which the rank
    equality is asserted; the record reports it alongside the comparison.
    """
    _require_exact(model)
    imask, jmask, kmask = _validate_sets(model.graph, I, J, K)
    si, sj, sk = set(_mask_nodes(imask)), set(_mask_nodes(jmask)), set(_mask_nodes(kmask))
    rows = sorted(si | sk)
    cols = sorted(sj | sk)
    sigma = trop_covariance(model)
    observed = _block_rank(sigma, rows, cols, size_cap)
    dsep = _d_separated_masks(model.graph, imask, jmask, kmask)
    return RankCheck(
        tuple(sorted(si)),
        tuple(sorted(sj)),
        tuple(sorted(sk)),
        len(sk),
        observed,
        dsep,
        observed == len(sk),
    )


def _sorted_triples(triples) -> list:
    return sorted(triples, key=lambda t: (t[0], t[1], bin(t[2]).count("1"), t[2]))


def scan_dsep_rank(model: MaxLinearModel, *, size_cap: int = DET_SIZE_CAP) -> list:
    """Rank record for every pairwise d-separation statement of the graph."""
    _require_exact(model)
    if model.n > STATEMENT_NODE_CAP:
        raise SizeCapError(f"scan capped at n = {STATEMENT_NODE_CAP}; got {model.n}")
    sigma = trop_covariance(model)
    out = []
    for i, j, kmask in _sorted_triples(_d_statement_triples(model.graph)):
        ks = _mask_nodes(kmask)
        rows = sorted({i, *ks})
        cols = sorted({j, *ks})
        observed = _block_rank(sigma, rows, cols, size_cap)
        out.append(
            RankCheck((i,), (j,), ks, len(ks), observed, True, observed == len(ks))
        )
    return out


def scan_starsep_rank(model: MaxLinearModel, *, size_cap: int = DET_SIZE_CAP) -> list:
    """Exploratory rank records for pairwise statements that hold under
    star-separation but not under d-separation.  No rank law is asserted for
    these, so ``satisfied`` is None."""
    _require_exact(model)
    if model.n > STATEMENT_NODE_CAP:
        raise SizeCapError(f"scan capped at n = {STATEMENT_NODE_CAP}; got {model.n}")
    sigma = trop_covariance(model)
    out = []
    for i, j, kmask in _sorted_triples(_star_statement_triples(model.graph)):
        if _d_separated_masks(model.graph, 1 << (i - 1), 1 << (j - 1), kmask):
            continue
        ks = _mask_nodes(kmask)
        rows = sorted({i, *ks})
        cols = sorted({j, *ks})
        observed = _block_rank(sigma, rows, cols, size_cap)
        out.append(RankCheck((i,), (j,), ks, len(ks), observed, False, None))
    return out


@dataclass(frozen=True)
class TailDependenceMatrix:
    """Pairwise tail dependence under Frechet(alpha) innovations.

    Symmetric, unit diagonal, entries in [0, 1]; entry (i, j) is 0 exactly
    when i and j share no ancestor (each node counting as its own).
    """

    alpha: float
    chi: tuple

    def entry(self, i: int, j: int) -> float:
        return self.chi[i - 1][j - 1]

    def to_json_dict(self) -> dict:
        n = len(self.chi)
        return {
            "rows": n,
            "cols": n,
            "entries": [[repr(x) for x in row] for row in self.chi],
        }


def tail_dependence(model: MaxLinearModel, alpha) -> TailDependenceMatrix:
    """Tail-dependence matrix of the model.

    Each node j is influenced by the nodes An(j) = an(j) u {j}; the weight of
    k on j is the best path weight from k to j (the Kleene star entry, 1 for
    k = j).  Raising these to alpha and normalizing over An(j) gives shares
    summing to 1, and the tail dependence of (i, j) adds up the smaller of
    the two shares over the common influencers An(i) n An(j).
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    a = float(alpha)
    g = model.graph
    n = g.n
    star = model.kleene().to_float()
    influence = [None] * (n + 1)  # influence[j][k] = normalized share of k on j
    for j in range(1, n + 1):
        anc = g.ancestors(j) | {j}
        powers = {k: star[j - 1, k - 1] ** a for k in anc}
        denom = sum(powers.values())
        influence[j] = {k: p / denom for k, p in powers.items()}
    chi = [[0.0] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            common = sorted(influence[i].keys() & influence[j].keys())
            val = sum(min(influence[i][k], influence[j][k]) for k in common)
            chi[i - 1][j - 1] = val
            chi[j - 1][i - 1] = val
    return TailDependenceMatrix(a, tuple(tuple(row) for row in chi))
