"""Shared graphs, strategies, and independent test oracles."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import strategies as st

from troplin import Dag, MaxLinearModel

# Named graphs used across the suite.  Cassiopeia is the W-shaped two-collider
# graph; "relay" feeds two sources through a conditioning bottleneck; the
# wtail trio differ only by edge reversals that preserve unshielded colliders.
CASSIOPEIA_EDGES = ((1, 4), (2, 4), (2, 5), (3, 5))
RELAY_EDGES = ((1, 4), (2, 3), (3, 5), (4, 5))
DIAMOND_EDGES = ((1, 2), (1, 3), (2, 4), (3, 4))
WTAIL_A_EDGES = ((1, 4), (2, 4), (2, 5), (3, 5), (3, 6), (6, 7))
WTAIL_B_EDGES = ((1, 4), (2, 4), (2, 5), (3, 5), (6, 3), (6, 7))
WTAIL_C_EDGES = ((1, 4), (2, 4), (2, 5), (3, 5), (6, 3), (7, 6))


@pytest.fixture
def cassiopeia():
    return Dag(5, CASSIOPEIA_EDGES)


@pytest.fixture
def relay():
    return Dag(5, RELAY_EDGES)


@pytest.fixture
def diamond():
    return Dag(4, DIAMOND_EDGES)


def random_dag(rng: random.Random, n: int, p: float = 0.5) -> Dag:
    """Random DAG via a random topological order plus independent edges."""
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    edges = [
        (perm[a], perm[b])
        for a in range(n)
        for b in range(a + 1, n)
        if rng.random() < p
    ]
    return Dag(n, edges)


def random_weights(rng: random.Random, g: Dag, sub_unit: bool = False) -> dict:
    """Positive rationals with numerator and denominator at most 100."""
    if sub_unit:
        return {e: Fraction(rng.randint(1, 99), 100) for e in g.edges}
    return {e: Fraction(rng.randint(1, 100), rng.randint(1, 100)) for e in g.edges}


def random_model(rng: random.Random, n: int, p: float = 0.5, sub_unit: bool = False) -> MaxLinearModel:
    g = random_dag(rng, n, p)
    return MaxLinearModel.from_edge_weights(g, random_weights(rng, g, sub_unit))


@st.composite
def dag_strategy(draw, min_n: int = 1, max_n: int = 5):
    n = draw(st.integers(min_n, max_n))
    order = draw(st.permutations(list(range(1, n + 1))))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.integers(0, 2 ** len(pairs) - 1))
    edges = [
        (order[a], order[b]) for k, (a, b) in enumerate(pairs) if mask >> k & 1
    ]
    return Dag(n, edges)


_weight_strategy = st.fractions(
    min_value=Fraction(1, 100), max_value=Fraction(100), max_denominator=100
)


@st.composite
def model_strategy(draw, min_n: int = 1, max_n: int = 5):
    g = draw(dag_strategy(min_n, max_n))
    weights = {e: draw(_weight_strategy) for e in sorted(g.edges)}
    return MaxLinearModel.from_edge_weights(g, weights)


@st.composite
def exact_matrix_strategy(draw, max_dim: int = 4):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    entry = st.one_of(
        st.just(Fraction(0)),
        st.fractions(min_value=Fraction(1, 20), max_value=Fraction(20), max_denominator=20),
    )
    return [[draw(entry) for _ in range(cols)] for _ in range(rows)]


# --- independent oracles -------------------------------------------------


def max_path_weight_oracle(coeffs) -> list:
    """Best directed-path weight between all node pairs by explicit path
    enumeration over the support digraph (edge j -> i iff coeffs[i][j] > 0).

    Returns a grid with entry (i, j) equal to the best weight of a path from
    j to i, 1 on the diagonal, 0 when no path exists.
    """
    n = len(coeffs)
    children = [[i for i in range(n) if coeffs[i][j]] for j in range(n)]
    best = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        best[j][j] = Fraction(1)

        def walk(v, weight, seen):
            for w in children[v]:
                if w in seen:
                    continue
                wt = weight * coeffs[w][v]
                if wt > best[w][j]:
                    best[w][j] = wt
                walk(w, wt, seen | {w})

        walk(j, Fraction(1), {j})
    return best


def count_labeled_dags(n: int) -> int:
    """Labeled-DAG counting recurrence (inclusion-exclusion over source sets)."""
    a = [1]
    for m in range(1, n + 1):
        a.append(
            sum(
                (-1) ** (k + 1) * comb(m, k) * 2 ** (k * (m - k)) * a[m - k]
                for k in range(1, m + 1)
            )
        )
    return a[n]


def dags_by_topological_order(n: int) -> set:
    """Edge sets of all DAGs on [n], generated per topological order with
    dedup.  Independent of the base-3 pair-assignment enumeration."""
    pairs = list(itertools.combinations(range(n), 2))
    out = set()
    for perm in itertools.permutations(range(1, n + 1)):
        for mask in range(2 ** len(pairs)):
            out.add(
                frozenset(
                    (perm[a], perm[b])
                    for k, (a, b) in enumerate(pairs)
                    if mask >> k & 1
                )
            )
    return out


def pairwise_statements(n: int):
    """All (i, j, K) with i < j and K a subset of the remaining nodes."""
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rest = [v for v in range(1, n + 1) if v not in (i, j)]
            for r in range(len(rest) + 1):
                for K in itertools.combinations(rest, r):
                    yield i, j, frozenset(K)
