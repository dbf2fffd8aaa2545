"""d-separation and star-separation queries.

Each criterion comes in two forms: a fast algorithm (moral-graph reachability
for d-separation, a shape search over the conditional reachability DAG for
star-separation) and a literal-definition oracle that enumerates simple paths.
The oracles are the ground truth; the test suite requires exact agreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import Dag, Path, all_simple_paths, colliders_on
from .trop_core import SizeCapError

#: Exhaustive pairwise statement listings are capped at this node count.
STATEMENT_NODE_CAP = 7

CRITERIA = ("d", "star")


def _node_mask(nodes: Iterable[int]) -> int:
    m = 0
    for v in nodes:
        m |= 1 << (v - 1)
    return m


def _mask_nodes(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        b = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        out.append(b + 1)
    return tuple(out)


def _validate_sets(g: Dag, I, J, K) -> tuple[int, int, int]:
    si, sj, sk = g._node_set(I), g._node_set(J), g._node_set(K)
    if not si or not sj:
        raise ValueError("I and J must be nonempty")
    if si & sj or si & sk or sj & sk:
        raise ValueError("I, J, K must be pairwise disjoint")
    return _node_mask(si), _node_mask(sj), _node_mask(sk)


@dataclass(frozen=True)
class CiStatement:
    """A conditional independence statement (I, J | K) under a criterion.

    Statements are symmetric in I and J; the canonical form produced by
    ``make`` orders I lexicographically before J.
    """

    I: frozenset
    J: frozenset
    K: frozenset
    criterion: str

    @classmethod
    def make(cls, I, J, K, criterion: str) -> "CiStatement":
        if criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}")
        fi, fj, fk = frozenset(I), frozenset(J), frozenset(K)
        if not fi or not fj:
            raise ValueError("I and J must be nonempty")
        if fi & fj or fi & fk or fj & fk:
            raise ValueError("I, J, K must be pairwise disjoint")
        if sorted(fj) < sorted(fi):
            fi, fj = fj, fi
        return cls(fi, fj, fk, criterion)

    def sort_key(self):
        return (sorted(self.I), sorted(self.J), len(self.K), sorted(self.K))

    def to_json_dict(self) -> dict:
        return {
            "I": sorted(self.I),
            "J": sorted(self.J),
            "K": sorted(self.K),
            "criterion": self.criterion,
        }


def d_connected_path(g: Dag, path: Path, K) -> bool:
    """Whether the path connects given K: every collider is in K or an(K),
    and no non-collider lies in K."""
    kset = g._node_set(K)
    for (a, b), fwd in zip(zip(path.nodes, path.nodes[1:]), path.forward):
        if ((a, b) if fwd else (b, a)) not in g.edges:
            raise ValueError(f"path step {a}-{b} is not an edge of the graph")
    cols = colliders_on(path)
    open_colliders = kset | g.ancestors(kset) if kset else frozenset()
    for v in path.nodes:
        if v in cols:
            if v not in open_colliders:
                return False
        elif v in kset:
            return False
    return True


def _d_separated_masks(g: Dag, imask: int, jmask: int, kmask: int) -> bool:
    # undirected separation in the moral graph of the ancestral subgraph
    pa, ch = g._pa_mask, g._ch_mask
    rel = imask | jmask | kmask
    fr = rel
    while fr:
        b = (fr & -fr).bit_length() - 1
        fr &= fr - 1
        new = pa[b] & ~rel
        rel |= new
        fr |= new
    adj = [0] * g.n
    r = rel
    while r:
        b = (r & -r).bit_length() - 1
        r &= r - 1
        adj[b] |= (pa[b] | ch[b]) & rel
        pm = pa[b] & rel
        p = pm
        while p:
            q = (p & -p).bit_length() - 1
            p &= p - 1
            adj[q] |= pm  # marry co-parents
    allowed = rel & ~kmask
    seen = imask
    fr = imask
    while fr:
        b = (fr & -fr).bit_length() - 1
        fr &= fr - 1
        new = adj[b] & allowed & ~seen
        seen |= new
        fr |= new
    return not seen & jmask


def d_separated(g: Dag, I, J, K) -> bool:
    """d-separation of I and J by K, decided on the moralized ancestral graph."""
    imask, jmask, kmask = _validate_sets(g, I, J, K)
    return _d_separated_masks(g, imask, jmask, kmask)


def d_separated_oracle(g: Dag, I, J, K) -> bool:
    """Literal-definition d-separation: no simple path between any i in I and
    j in J is d-connecting given K."""
    imask, jmask, kmask = _validate_sets(g, I, J, K)
    kset = frozenset(_mask_nodes(kmask))
    for i in _mask_nodes(imask):
        for j in _mask_nodes(jmask):
            for p in all_simple_paths(g, i, j):
                if d_connected_path(g, p, kset):
                    return False
    return True


def _reach_avoiding(ch_mask, start: int, kmask: int) -> int:
    """Nodes reachable from ``start`` (0-based) by a directed path of length
    >= 1 whose interior avoids the K mask.  K members may appear as endpoints
    but are never expanded."""
    seen = ch_mask[start]
    frontier = seen & ~kmask
    while frontier:
        v = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        new = ch_mask[v] & ~seen
        if new:
            seen |= new
            frontier |= new & ~kmask
    return seen


def conditional_reachability(g: Dag, K) -> Dag:
    """The conditional reachability DAG: edge i -> j iff some directed path
    from i to j has no interior node in K (single edges always qualify)."""
    kmask = _node_mask(g._node_set(K))
    edges = []
    for u in range(g.n):
        r = _reach_avoiding(g._ch_mask, u, kmask)
        while r:
            b = (r & -r).bit_length() - 1
            r &= r - 1
            edges.append((u + 1, b + 1))
    return Dag(g.n, edges)


def _star_structures(g: Dag, kmask: int):
    """Parent masks of the conditional reachability DAG and the mask of nodes
    with an edge into K there (equivalently, ancestors of K in the host)."""
    n = g.n
    ch = g._ch_mask
    spa = [0] * n
    anc_k = 0
    for u in range(n):
        r = _reach_avoiding(ch, u, kmask)
        if r & kmask:
            anc_k |= 1 << u
        rr = r
        while rr:
            v = (rr & -rr).bit_length() - 1
            rr &= rr - 1
            spa[v] |= 1 << u
    return spa, anc_k


def _star_pair_connected(spa, anc_k: int, kmask: int, bi: int, bj: int) -> bool:
    # A star-connecting path reduces, over the conditional reachability DAG,
    # to either a common non-K source of i and j (covering the edge and
    # common-parent shapes) or a single collider c fed from a source on each
    # side, with c in K or an ancestor of K.  Sources may be the endpoints
    # themselves; all path vertices must be distinct.
    mi, mj = 1 << bi, 1 << bj
    pi = (spa[bi] | mi) & ~kmask
    pj = (spa[bj] | mj) & ~kmask
    if pi & pj:
        return True
    cc = (kmask | anc_k) & ~(mi | mj)
    while cc:
        c = (cc & -cc).bit_length() - 1
        cc &= cc - 1
        # pi and pj are disjoint past the early return, so the two sides are
        # automatically distinct and the assembled path is simple
        if pi & spa[c] & ~mj and pj & spa[c] & ~mi:
            return True
    return False


def star_connected(g: Dag, i: int, j: int, K) -> bool:
    """Whether i and j are star-connected given K: some path is d-connecting
    given K and carries at most one collider.  Decided by shape search over
    the conditional reachability DAG."""
    g._check_node(i)
    g._check_node(j)
    if i == j:
        raise ValueError("endpoints must differ")
    kset = g._node_set(K)
    if i in kset or j in kset:
        raise ValueError("endpoints may not lie in the conditioning set")
    kmask = _node_mask(kset)
    spa, anc_k = _star_structures(g, kmask)
    return _star_pair_connected(spa, anc_k, kmask, i - 1, j - 1)


def star_connected_oracle(g: Dag, i: int, j: int, K) -> bool:
    """Literal-definition star-connection over all simple paths."""
    g._check_node(i)
    g._check_node(j)
    if i == j:
        raise ValueError("endpoints must differ")
    kset = g._node_set(K)
    if i in kset or j in kset:
        raise ValueError("endpoints may not lie in the conditioning set")
    for p in all_simple_paths(g, i, j):
        if len(colliders_on(p)) <= 1 and d_connected_path(g, p, kset):
            return True
    return False


def star_separated(g: Dag, I, J, K) -> bool:
    """K star-separates I and J iff no pair (i, j) is star-connected given K."""
    imask, jmask, kmask = _validate_sets(g, I, J, K)
    spa, anc_k = _star_structures(g, kmask)
    for i in _mask_nodes(imask):
        for j in _mask_nodes(jmask):
            if _star_pair_connected(spa, anc_k, kmask, i - 1, j - 1):
                return False
    return True


def _check_statement_cap(g: Dag) -> None:
    if g.n > STATEMENT_NODE_CAP:
        raise SizeCapError(
            f"statement enumeration is capped at n = {STATEMENT_NODE_CAP}; got {g.n}"
        )


def _d_statement_triples(g: Dag) -> frozenset:
    n = g.n
    out = set()
    for bi in range(n):
        for bj in range(bi + 1, n):
            pairmask = (1 << bi) | (1 << bj)
            for kmask in range(1 << n):
                if kmask & pairmask:
                    continue
                if _d_separated_masks(g, 1 << bi, 1 << bj, kmask):
                    out.add((bi + 1, bj + 1, kmask))
    return frozenset(out)


def _star_statement_triples(g: Dag) -> frozenset:
    n = g.n
    out = set()
    for kmask in range(1 << n):
        structures = None
        for bi in range(n):
            if kmask >> bi & 1:
                continue
            for bj in range(bi + 1, n):
                if kmask >> bj & 1:
                    continue
                if structures is None:
                    structures = _star_structures(g, kmask)
                spa, anc_k = structures
                if not _star_pair_connected(spa, anc_k, kmask, bi, bj):
                    out.add((bi + 1, bj + 1, kmask))
    return frozenset(out)


def ci_statements(g: Dag, criterion: str) -> frozenset:
    """All holding pairwise statements ({i}, {j} | K) for i < j and K over
    the remaining nodes.  Pairwise statements determine set statements, since
    both criteria quantify over endpoint pairs."""
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}")
    _check_statement_cap(g)
    triples = _d_statement_triples(g) if criterion == "d" else _star_statement_triples(g)
    return frozenset(
        CiStatement.make((i,), (j,), _mask_nodes(kmask), criterion)
        for i, j, kmask in triples
    )
