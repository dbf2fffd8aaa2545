"""Scalar and matrix arithmetic over the max-times semiring.

The carrier is [0, inf) with tropical addition ``a | b = max(a, b)`` and
tropical multiplication ``a * b`` (ordinary product).  0 is the semiring
zero (absorbing, encodes absent paths and edges) and 1 is the unit.

Scalars are plain numbers rather than a wrapper class: ``fractions.Fraction``
in exact mode, ``float`` in approximate mode.  Exact mode decides equality of
products (and therefore tropical singularity, which is a tie condition)
exactly; approximate mode compares with relative tolerance ``EPS_TIE``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Value = Union[Fraction, float]

#: Hard cap for exhaustive permutation / minor enumeration.  Computing the
#: tropical rank is NP-hard in general, so the library refuses silently
#: exponential inputs instead of attempting them.
DET_SIZE_CAP = 8

#: Relative tolerance used to call two products equal in approximate mode.
EPS_TIE = 1e-9

_F0 = Fraction(0)
_F1 = Fraction(1)


class ShapeError(ValueError):
    """Operand dimensions do not fit the requested operation."""


class SizeCapError(ValueError):
    """Input exceeds the documented size cap of an exhaustive algorithm."""


class CycleError(ValueError):
    """A directed cycle was found where a DAG is required."""


class SchemaError(ValueError):
    """A serialized document does not match its documented JSON schema."""


def _as_exact(x) -> Fraction:
    if isinstance(x, Fraction):
        f = x
    elif isinstance(x, bool):
        raise TypeError("boolean is not a semiring value")
    elif isinstance(x, int):
        f = Fraction(x)
    elif isinstance(x, float):
        raise TypeError(
            "float entry in exact mode; pass a Fraction or build the matrix with exact=False"
        )
    else:
        raise TypeError(f"unsupported entry type {type(x).__name__}")
    if f < 0:
        raise ValueError("entries must be nonnegative (max-times carrier is [0, inf))")
    return f


def _as_float(x) -> float:
    if isinstance(x, bool):
        raise TypeError("boolean is not a semiring value")
    f = float(x)
    if not math.isfinite(f):
        raise ValueError("entries must be finite")
    if f < 0:
        raise ValueError("entries must be nonnegative (max-times carrier is [0, inf))")
    return f


def format_value(x: Value) -> str:
    """Render a semiring value for serialization: "p/q" or "p" for rationals,
    shortest round-trip decimal for floats."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def parse_value(raw, exact: bool = True) -> Value:
    """Parse a serialized value: "p/q", integer or decimal strings, or a bare
    JSON number.  Decimal strings parse exactly in exact mode."""
    if isinstance(raw, bool):
        raise TypeError("boolean is not a semiring value")
    if isinstance(raw, str):
        txt = raw.strip()
        if not txt:
            raise ValueError("empty value string")
        v = Fraction(txt)
        return v if exact else float(v)
    if isinstance(raw, int):
        return Fraction(raw) if exact else float(raw)
    if isinstance(raw, float):
        # JSON numbers are decimal text upstream; reinterpret the decimal
        # rendering so exact mode does not inherit binary expansion noise.
        return Fraction(repr(raw)) if exact else raw
    raise TypeError(f"cannot parse value of type {type(raw).__name__}")


class TropMatrix:
    """Immutable matrix over the max-times semiring.

    Entry access ``a[i, j]`` is 0-based; ``submatrix`` takes 1-based labels so
    node-indexed matrices (coefficient and covariance matrices of a network on
    nodes 1..n) can be sliced with node sets directly.
    """

    __slots__ = ("_entries", "_rows", "_cols", "_exact")

    def __init__(self, entries: Iterable[Iterable], exact: bool | None = None):
        rows = [tuple(r) for r in entries]
        if not rows or any(not r for r in rows):
            raise ShapeError("matrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        if exact is None:
            exact = not any(isinstance(x, float) for r in rows for x in r)
        conv = _as_exact if exact else _as_float
        self._entries = tuple(tuple(conv(x) for x in r) for r in rows)
        self._rows = len(rows)
        self._cols = width
        self._exact = bool(exact)

    @classmethod
    def _raw(cls, entries: tuple, exact: bool) -> "TropMatrix":
        # internal: trusted entries, skips validation
        m = object.__new__(cls)
        m._entries = entries
        m._rows = len(entries)
        m._cols = len(entries[0])
        m._exact = exact
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, exact: bool = True) -> "TropMatrix":
        if rows < 1 or cols < 1:
            raise ShapeError("matrix needs at least one row and one column")
        z = _F0 if exact else 0.0
        return cls._raw(tuple(tuple(z for _ in range(cols)) for _ in range(rows)), exact)

    @classmethod
    def identity(cls, n: int, exact: bool = True) -> "TropMatrix":
        if n < 1:
            raise ShapeError("matrix needs at least one row and one column")
        z, o = (_F0, _F1) if exact else (0.0, 1.0)
        return cls._raw(
            tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), exact
        )

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def exact(self) -> bool:
        return self._exact

    def __getitem__(self, key) -> Value:
        i, j = key
        return self._entries[i][j]

    def row(self, i: int) -> tuple:
        return self._entries[i]

    def to_lists(self) -> list:
        return [list(r) for r in self._entries]

    def to_float(self) -> "TropMatrix":
        if not self._exact:
            return self
        return TropMatrix._raw(
            tuple(tuple(float(x) for x in r) for r in self._entries), False
        )

    def transpose(self) -> "TropMatrix":
        return TropMatrix._raw(tuple(zip(*self._entries)), self._exact)

    def join(self, other: "TropMatrix") -> "TropMatrix":
        """Entrywise tropical sum (max)."""
        _require_same_mode(self, other)
        if (self._rows, self._cols) != (other._rows, other._cols):
            raise ShapeError("join needs equal shapes")
        return TropMatrix._raw(
            tuple(
                tuple(max(x, y) for x, y in zip(ra, rb))
                for ra, rb in zip(self._entries, other._entries)
            ),
            self._exact,
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "TropMatrix":
        """Block with the given 1-based row and column labels, in order."""
        rr, cc = tuple(rows), tuple(cols)
        if not rr or not cc:
            raise ShapeError("empty row or column selection")
        for x in rr:
            if not 1 <= x <= self._rows:
                raise ValueError(f"row label {x} out of range 1..{self._rows}")
        for x in cc:
            if not 1 <= x <= self._cols:
                raise ValueError(f"column label {x} out of range 1..{self._cols}")
        return TropMatrix._raw(
            tuple(tuple(self._entries[r - 1][c - 1] for c in cc) for r in rr),
            self._exact,
        )

    def __matmul__(self, other: "TropMatrix") -> "TropMatrix":
        return trop_matmul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TropMatrix):
            return NotImplemented
        return (self._rows, self._cols) == (other._rows, other._cols) and all(
            x == y
            for ra, rb in zip(self._entries, other._entries)
            for x, y in zip(ra, rb)
        )

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(format_value(x) for x in r) for r in self._entries
        )
        return f"TropMatrix({self._rows}x{self._cols}{' exact' if self._exact else ''}: {body})"

    def to_json_dict(self) -> dict:
        return {
            "rows": self._rows,
            "cols": self._cols,
            "entries": [[format_value(x) for x in r] for r in self._entries],
        }

    @classmethod
    def from_json_dict(cls, obj, exact: bool = True) -> "TropMatrix":
        if not isinstance(obj, dict):
            raise SchemaError("matrix JSON must be an object")
        try:
            rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        except KeyError as e:
            raise SchemaError(f"matrix JSON is missing key {e.args[0]!r}") from None
        try:
            parsed = [[parse_value(x, exact) for x in r] for r in entries]
        except (TypeError, ValueError) as e:
            raise SchemaError(f"bad matrix entry: {e}") from None
        m = cls(parsed, exact=exact)
        if (m.rows, m.cols) != (rows, cols):
            raise SchemaError("matrix JSON shape fields disagree with entries")
        return m


def _require_same_mode(a: TropMatrix, b: TropMatrix) -> None:
    if a._exact != b._exact:
        raise ValueError("cannot mix exact and approximate matrices; convert explicitly")


def trop_matmul(a: TropMatrix, b: TropMatrix) -> TropMatrix:
    """Tropical matrix product: entry (i,j) is max over l of a[i,l]*b[l,j]."""
    _require_same_mode(a, b)
    if a._cols != b._rows:
        raise ShapeError(f"inner dimensions differ: {a._cols} vs {b._rows}")
    zero = _F0 if a._exact else 0.0
    bt = tuple(zip(*b._entries))
    out = []
    for arow in a._entries:
        row = []
        for bcol in bt:
            best = zero
            for x, y in zip(arow, bcol):
                if x and y:
                    p = x * y
                    if p > best:
                        best = p
            row.append(best)
        out.append(tuple(row))
    return TropMatrix._raw(tuple(out), a._exact)


def trop_pow(a: TropMatrix, k: int) -> TropMatrix:
    """k-fold tropical product; k = 0 gives the tropical identity."""
    if a._rows != a._cols:
        raise ShapeError("tropical power needs a square matrix")
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ValueError("exponent must be a nonnegative integer")
    result = TropMatrix.identity(a._rows, a._exact)
    base = a
    while k:
        if k & 1:
            result = trop_matmul(result, base)
        k >>= 1
        if k:
            base = trop_matmul(base, base)
    return result


def kleene_star(c: TropMatrix) -> TropMatrix:
    """Kleene star of a DAG-supported coefficient matrix.

    Entry (i,j) of the result is the maximum weight of a directed path from j
    to i in the support digraph (which has an edge j -> i whenever c[i,j] > 0),
    with 1 on the diagonal.  Equals the join of the tropical powers
    c^0 | c^1 | ... | c^(n-1).  Cyclic support is rejected.
    """
    if c._rows != c._cols:
        raise ShapeError("kleene star needs a square matrix")
    n = c._rows
    entries = c._entries
    support_parents = [[] for _ in range(n)]  # support_parents[i] = {j : c[i,j] > 0}
    support_children = [[] for _ in range(n)]
    indeg = [0] * n
    for i in range(n):
        for j in range(n):
            if entries[i][j]:
                if i == j:
                    raise CycleError("nonzero diagonal entry makes the support cyclic")
                support_parents[i].append(j)
                support_children[j].append(i)
                indeg[i] += 1
    order = [v for v in range(n) if indeg[v] == 0]
    for v in order:
        for w in support_children[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
    if len(order) < n:
        raise CycleError("support digraph of the coefficient matrix is cyclic")
    zero, one = (_F0, _F1) if c._exact else (0.0, 1.0)
    star = [[zero] * n for _ in range(n)]
    for v in range(n):
        star[v][v] = one
    for u in order:  # parents are finalized before u
        row_u = star[u]
        for p in support_parents[u]:
            w = entries[u][p]
            row_p = star[p]
            for j in range(n):
                x = row_p[j]
                if x:
                    cand = w * x
                    if cand > row_u[j]:
                        row_u[j] = cand
    return TropMatrix._raw(tuple(tuple(r) for r in star), c._exact)


@dataclass(frozen=True)
class TropDetResult:
    """Value of the tropical determinant plus its tie certificate.

    ``attain_count`` is the number of permutations whose product equals the
    value (exactly, or within EPS_TIE relatively in approximate mode); when
    the value is 0 every permutation product is 0, so the count is n!.
    ``witnesses`` holds up to two attaining permutations, lexicographically
    first, as 0-based column assignments.
    """

    value: Value
    attain_count: int
    witnesses: tuple


def _check_square_capped(a: TropMatrix, size_cap: int) -> int:
    if a._rows != a._cols:
        raise ShapeError("tropical determinant needs a square matrix")
    if a._rows > size_cap:
        raise SizeCapError(
            f"matrix size {a._rows} exceeds the exhaustive-search cap of {size_cap}; "
            "tropical rank is NP-hard in general and this library only enumerates"
        )
    return a._rows


def _max_perm_product(entries, n, zero):
    best = zero

    def rec(r, used, prod):
        nonlocal best
        if r == n:
            if prod > best:
                best = prod
            return
        row = entries[r]
        for c in range(n):
            bit = 1 << c
            if used & bit:
                continue
            x = row[c]
            if x:
                rec(r + 1, used | bit, prod * x)

    rec(0, 0, 1)
    return best


def _attain_stats(entries, n, best, exact, eps_tie, stop_at=None):
    # only called with best > 0, so zero branches can be pruned
    if exact:
        def hits(p):
            return p == best
    else:
        thresh = best * (1.0 - eps_tie)

        def hits(p):
            return p >= thresh

    count = 0
    wits = []
    asg = [0] * n

    def rec(r, used, prod):
        nonlocal count
        if stop_at is not None and count >= stop_at:
            return
        if r == n:
            if hits(prod):
                count += 1
                if len(wits) < 2:
                    wits.append(tuple(asg))
            return
        row = entries[r]
        for c in range(n):
            bit = 1 << c
            if used & bit:
                continue
            x = row[c]
            if x:
                asg[r] = c
                rec(r + 1, used | bit, prod * x)

    rec(0, 0, 1)
    return count, tuple(wits)


def trop_det(a: TropMatrix, *, size_cap: int = DET_SIZE_CAP, eps_tie: float = EPS_TIE) -> TropDetResult:
    """Tropical determinant: max over permutations of the entry product,
    with the attainment count and up to two witness permutations."""
    n = _check_square_capped(a, size_cap)
    zero = _F0 if a._exact else 0.0
    best = _max_perm_product(a._entries, n, zero)
    if best == 0:
        wits = [tuple(range(n))]
        if n >= 2:
            wits.append(tuple(range(n - 2)) + (n - 1, n - 2))
        return TropDetResult(zero, math.factorial(n), tuple(wits))
    count, wits = _attain_stats(a._entries, n, best, a._exact, eps_tie)
    return TropDetResult(best, count, wits)


def _minor_singular(entries, n, exact, eps_tie) -> bool:
    zero = _F0 if exact else 0.0
    best = _max_perm_product(entries, n, zero)
    if best == 0:
        # all permutation products are the semiring zero
        return True
    count, _ = _attain_stats(entries, n, best, exact, eps_tie, stop_at=2)
    return count >= 2


def is_trop_singular(a: TropMatrix, *, size_cap: int = DET_SIZE_CAP, eps_tie: float = EPS_TIE) -> bool:
    """True iff the tropical determinant attains its maximum at least twice.

    A determinant value of 0 counts as singular: every permutation product is
    then 0, which for n >= 2 is an n!-fold tie, and a 1x1 zero block carries
    no information (this is what makes the all-zero matrix rank 0).
    """
    n = _check_square_capped(a, size_cap)
    return _minor_singular(a._entries, n, a._exact, eps_tie)


def trop_rank(a: TropMatrix, *, size_cap: int = DET_SIZE_CAP, eps_tie: float = EPS_TIE) -> int:
    """Largest r such that some r x r minor is tropically non-singular.

    Exhaustive search, r descending, row/column subsets in lexicographic
    order, stopping at the first non-singular minor.  0 for the all-zero
    matrix.
    """
    bound = min(a._rows, a._cols)
    if bound > size_cap:
        raise SizeCapError(
            f"min dimension {bound} exceeds the exhaustive-search cap of {size_cap}"
        )
    entries = a._entries
    for r in range(bound, 0, -1):
        for rset in itertools.combinations(range(a._rows), r):
            picked = [entries[i] for i in rset]
            for cset in itertools.combinations(range(a._cols), r):
                minor = tuple(tuple(row[c] for c in cset) for row in picked)
                if not _minor_singular(minor, r, a._exact, eps_tie):
                    return r
    return 0


def submatrix(a: TropMatrix, rows: Sequence[int], cols: Sequence[int]) -> TropMatrix:
    """Block of ``a`` with the given 1-based row and column labels."""
    return a.submatrix(rows, cols)
