"""Markov equivalence under both separation criteria, and exhaustive
partitioning of all labeled DAGs into equivalence classes."""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass

from .graph import Dag, enumerate_dags
from .separation import STATEMENT_NODE_CAP, _star_statement_triples
from .trop_core import SizeCapError

#: Full-enumeration partitioning is capped here (29281 DAGs at n = 5).
MEC_NODE_CAP = 5


def d_fingerprint(g: Dag):
    """Class invariant for d-separation: skeleton plus unshielded colliders."""
    return (g.skeleton(), g.unshielded_colliders())


def star_fingerprint(g: Dag):
    """Class invariant for star-separation: the full pairwise statement set,
    encoded as (i, j, K-mask) triples."""
    return _star_statement_triples(g)


def markov_equivalent_d(g: Dag, h: Dag) -> bool:
    """Same skeleton and same unshielded colliders."""
    if g.n != h.n:
        raise ValueError("graphs must have the same node count")
    return d_fingerprint(g) == d_fingerprint(h)


def markov_equivalent_star(g: Dag, h: Dag) -> bool:
    """Equality of the full pairwise star-separation statement sets."""
    if g.n != h.n:
        raise ValueError("graphs must have the same node count")
    if g.n > STATEMENT_NODE_CAP:
        raise SizeCapError(
            f"star equivalence check is capped at n = {STATEMENT_NODE_CAP}; got {g.n}"
        )
    return star_fingerprint(g) == star_fingerprint(h)


@dataclass(frozen=True)
class MecPartition:
    """Partition of all labeled DAGs on [n] into Markov equivalence classes.

    Class members are indices into the fixed ``enumerate_dags(n)`` order;
    classes are listed by smallest member, members ascending.  ``fingerprints``
    holds the canonical per-class key, aligned with ``classes``.
    """

    n: int
    criterion: str
    classes: tuple
    fingerprints: tuple

    @property
    def dag_count(self) -> int:
        return sum(len(c) for c in self.classes)


def _fingerprint_worker(arg):
    criterion, items = arg
    out = []
    for n, edges in items:
        g = Dag(n, edges)
        out.append(d_fingerprint(g) if criterion == "d" else star_fingerprint(g))
    return out


def _fingerprints(dags: list[Dag], criterion: str, jobs: int) -> list:
    fp = d_fingerprint if criterion == "d" else star_fingerprint
    if jobs <= 1 or len(dags) < 512:
        return [fp(g) for g in dags]
    payload = [(g.n, tuple(sorted(g.edges))) for g in dags]
    step = max(1, len(payload) // (jobs * 8))
    chunks = [
        (criterion, payload[k : k + step]) for k in range(0, len(payload), step)
    ]
    with multiprocessing.Pool(processes=jobs) as pool:
        parts = pool.map(_fingerprint_worker, chunks)
    return [x for part in parts for x in part]


def enumerate_mecs(n: int, criterion: str, jobs: int = 1) -> MecPartition:
    """Group every labeled DAG on [n] by its criterion fingerprint."""
    if criterion not in ("d", "star"):
        raise ValueError("criterion must be 'd' or 'star'")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("node count must be a positive integer")
    if n > MEC_NODE_CAP:
        raise SizeCapError(f"MEC enumeration is capped at n = {MEC_NODE_CAP}; got {n}")
    dags = list(enumerate_dags(n))
    fps = _fingerprints(dags, criterion, jobs)
    groups: dict = {}
    for idx, fp in enumerate(fps):
        groups.setdefault(fp, []).append(idx)
    ordered = sorted(groups.items(), key=lambda kv: kv[1][0])
    return MecPartition(
        n,
        criterion,
        tuple(tuple(members) for _, members in ordered),
        tuple(fp for fp, _ in ordered),
    )


def _class_map(partition: MecPartition) -> dict:
    return {
        idx: ci for ci, members in enumerate(partition.classes) for idx in members
    }


def verify_mec_equality(n: int, jobs: int = 1, max_counterexamples: int = 10) -> dict:
    """Compute both partitions and report whether they coincide.

    The report lists DAG-index pairs witnessing any disagreement: pairs that
    are equivalent under exactly one of the two criteria.
    """
    part_d = enumerate_mecs(n, "d", jobs)
    part_star = enumerate_mecs(n, "star", jobs)
    equal = {frozenset(c) for c in part_d.classes} == {
        frozenset(c) for c in part_star.classes
    }
    counterexamples = []
    if not equal:
        of_d = _class_map(part_d)
        of_star = _class_map(part_star)
        for members, other in ((part_d.classes, of_star), (part_star.classes, of_d)):
            for cls in members:
                first = other[cls[0]]
                for idx in cls[1:]:
                    if other[idx] != first:
                        a, b = cls[0], idx
                        counterexamples.append(
                            {
                                "pair": [a, b],
                                "equivalent_d": of_d[a] == of_d[b],
                                "equivalent_star": of_star[a] == of_star[b],
                            }
                        )
                        break
                if len(counterexamples) >= max_counterexamples:
                    break
            if len(counterexamples) >= max_counterexamples:
                break
    return {
        "n": n,
        "dags": part_d.dag_count,
        "classes_d": len(part_d.classes),
        "classes_star": len(part_star.classes),
        "equal": equal,
        "counterexamples": counterexamples,
    }
