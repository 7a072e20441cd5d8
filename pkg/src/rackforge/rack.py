"""The rack data model.

A rack is a set {0..n-1} with a binary operation given as an n x n table,
table[x][y] = x |> y, whose rows are bijections (Q1) and which is left
self-distributive (Q2).  Rows carry the left-translation maps: row x is
the permutation y -> x |> y.  Quandles additionally fix the diagonal (Q3).

This module owns axiom validation, the inner group, decomposability,
faithfulness, the iota twist and its associated quandle, image quandles,
extensions by permutation-valued cocycle tables, canonical forms, and
isomorphism testing.

Rack JSON format (shared with the CLI and normative for the whole
repository): {"order": n, "table": [[...], ...]}, zero-based, row-major,
table[x][y] = x |> y.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import perm
from .errors import ResourceLimitError
from .perm import Perm, PermGroup

DEFAULT_CANON_LIMIT = 12
CANON_LIMIT_ENV = "RACKFORGE_CANON_LIMIT"


@dataclass(frozen=True)
class Rack:
    """Operation table of a rack; table[x][y] = x |> y.

    The constructor only checks shape and entry range.  Use
    `rack_from_table` to build from untrusted data with full axiom
    checking, or `validate` for a non-raising analysis.
    """

    table: tuple

    def __post_init__(self):
        n = len(self.table)
        for x, row in enumerate(self.table):
            if len(row) != n:
                raise ValueError(f"row {x} has length {len(row)}, expected {n}")
            for y, v in enumerate(row):
                if not 0 <= v < n:
                    raise ValueError(f"entry out of range at ({x},{y}): {v}")

    @property
    def n(self) -> int:
        return len(self.table)

    def row(self, x: int) -> Perm:
        return self.table[x]

    def op(self, x: int, y: int) -> int:
        return self.table[x][y]

    def as_array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int32)

    def to_json_dict(self) -> dict:
        return {"order": self.n, "table": [list(row) for row in self.table]}


def _freeze(table) -> tuple:
    return tuple(tuple(int(v) for v in row) for row in table)


def rack_from_json_dict(data: dict) -> Rack:
    """Parse the normative Rack JSON object; raises ValueError on bad shape."""
    if not isinstance(data, dict) or "order" not in data or "table" not in data:
        raise ValueError("rack JSON must be an object with 'order' and 'table'")
    order, table = data["order"], data["table"]
    if not isinstance(order, int) or not isinstance(table, list):
        raise ValueError("'order' must be an integer and 'table' a list")
    if len(table) != order:
        raise ValueError(f"table has {len(table)} rows, 'order' says {order}")
    for x, row in enumerate(table):
        if not isinstance(row, list) or len(row) != order:
            raise ValueError(f"row {x} is not a list of length {order}")
        for y, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < order:
                raise ValueError(f"entry out of range at ({x},{y}): {v!r}")
    return Rack(_freeze(table))


@dataclass(frozen=True)
class RackProps:
    """Full axiom report for an operation table.

    All three axioms are always reported; the inner-group data is only
    computed when the table actually is a rack.
    """

    q1: bool
    q2: bool
    q3: bool
    is_rack: bool
    is_quandle: bool
    is_indecomposable: bool
    is_faithful: bool
    inner_group_order: int | None
    orbit_sizes: tuple


def _q2_holds(arr: np.ndarray) -> bool:
    n = arr.shape[0]
    for x in range(n):
        tx = arr[x]
        lhs = tx[arr]                      # lhs[y,z] = T[x][T[y][z]]
        rhs = arr[np.ix_(tx, tx)]          # rhs[y,z] = T[T[x][y]][T[x][z]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def validate(table: Sequence[Sequence[int]]) -> RackProps:
    """Analyze a raw table against the rack/quandle axioms.

    Entries out of {0..n-1} are a format error (ValueError).  A failing
    axiom does not short-circuit the others.
    """
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0:
        raise ValueError("empty table")
    for x, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"row {x} has length {len(row)}, expected {n}")
        for y, v in enumerate(row):
            if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise ValueError(f"entry out of range at ({x},{y}): {v!r}")

    q1 = all(perm.is_permutation(row) for row in rows)
    arr = np.array(rows, dtype=np.int32)
    q2 = _q2_holds(arr)
    q3 = all(rows[x][x] == x for x in range(n))
    is_rack = q1 and q2
    is_quandle = is_rack and q3
    faithful = is_rack and len({tuple(r) for r in rows}) == n

    if is_rack:
        group = perm.closure([tuple(r) for r in rows])
        sizes = tuple(sorted(len(o) for o in perm.orbits(group)))
        return RackProps(q1, q2, q3, is_rack, is_quandle,
                         sizes == (n,), faithful, group.order, sizes)
    return RackProps(q1, q2, q3, is_rack, is_quandle, False, faithful, None, ())


def rack_from_table(table: Sequence[Sequence[int]]) -> Rack:
    """Build a Rack from a raw table, raising ValueError if Q1/Q2 fail."""
    props = validate(table)
    if not props.is_rack:
        failed = [ax for ax, ok in (("Q1", props.q1), ("Q2", props.q2)) if not ok]
        raise ValueError(f"not a rack: {', '.join(failed)} failed")
    return Rack(_freeze(table))


def is_quandle(r: Rack) -> bool:
    return all(r.table[x][x] == x for x in range(r.n))


def inner_group(r: Rack) -> PermGroup:
    """The group generated by the rows of r (its left translations)."""
    return perm.closure(sorted({row for row in r.table}), degree=r.n)


def orbit_decomposition(r: Rack) -> tuple:
    return perm.orbits(inner_group(r))


def is_indecomposable(r: Rack) -> bool:
    return len(orbit_decomposition(r)) == 1


def is_faithful(r: Rack) -> bool:
    return len(set(r.table)) == r.n


@dataclass(frozen=True)
class Iota:
    """The map iota with x |> iota(x) = x, as a permutation of the carrier."""

    base: Rack
    map: Perm

    def __post_init__(self):
        t = self.base.table
        assert all(t[x][self.map[x]] == x for x in range(self.base.n))


def iota(r: Rack) -> Iota:
    m = tuple(perm.inverse(row)[x] for x, row in enumerate(r.table))
    if not perm.is_permutation(m):
        raise RuntimeError("internal error: iota is not a bijection")
    return Iota(r, m)


def associated_quandle(r: Rack) -> Rack:
    """Twist by iota: x |>' y = x |> iota(y).  Always a quandle."""
    m = iota(r).map
    return Rack(tuple(tuple(row[m[y]] for y in range(r.n)) for row in r.table))


def image_quandle(r: Rack) -> Rack:
    """The quandle on the distinct rows of r under conjugation."""
    rows = sorted(set(r.table))
    index = {row: i for i, row in enumerate(rows)}
    table = []
    for ri in rows:
        out = []
        for rj in rows:
            c = perm.conjugate(ri, rj)
            if c not in index:
                raise RuntimeError(
                    "internal error: conjugate of a row is not a row")
            out.append(index[c])
        table.append(tuple(out))
    return Rack(tuple(table))


def extension_table(base: Rack, beta: Sequence[Sequence[Perm]]) -> list:
    """Raw product table on X x S for beta: X x X -> Sym(S), unchecked.

    Index convention: (x, s) -> x*|S| + s.
    """
    n = base.n
    s = len(beta[0][0])
    big = n * s
    out = [[0] * big for _ in range(big)]
    for x in range(n):
        for y in range(n):
            z = base.table[x][y]
            b = beta[x][y]
            for i in range(s):
                zi = z * s
                row = out[x * s + i]
                for t in range(s):
                    row[y * s + t] = zi + b[t]
    return out


def is_permutation_cocycle(base: Rack, beta: Sequence[Sequence[Perm]]) -> bool:
    """Check beta(x, y|>z) beta(y,z) == beta(x|>y, x|>z) beta(x,z) in Sym(S)."""
    n = base.n
    t = base.table
    for x in range(n):
        for y in range(n):
            for z in range(n):
                lhs = perm.compose(beta[x][t[y][z]], beta[y][z])
                rhs = perm.compose(beta[t[x][y]][t[x][z]], beta[x][z])
                if lhs != rhs:
                    return False
    return True


def extension(base: Rack, beta: Sequence[Sequence[Perm]]) -> Rack:
    """The extension rack on X x S, (x,s) |> (y,t) = (x|>y, beta(x,y)(t)).

    `beta` is an n x n table of permutations of S.  Raises ValueError if
    beta is not a cocycle (the construction is only a rack for cocycles).
    """
    n = base.n
    if len(beta) != n or any(len(row) != n for row in beta):
        raise ValueError("beta must be an n x n table of permutations")
    s = len(beta[0][0])
    for row in beta:
        for b in row:
            if len(b) != s or not perm.is_permutation(b):
                raise ValueError("beta entries must be permutations of one set")
    if not is_permutation_cocycle(base, beta):
        raise ValueError("beta does not satisfy the cocycle condition")
    r = Rack(_freeze(extension_table(base, beta)))
    assert _q2_holds(r.as_array()), "internal error: extension is not a rack"
    return r


def relabel(r: Rack, p: Perm) -> Rack:
    """Transport the table along p: T'[p(x)][p(y)] = p(T[x][y])."""
    if not perm.is_permutation(p) or len(p) != r.n:
        raise ValueError("relabeling must be a permutation of the carrier")
    inv = perm.inverse(p)
    t = r.table
    return Rack(tuple(tuple(p[t[inv[i]][inv[j]]] for j in range(r.n))
                      for i in range(r.n)))


def _canon_limit(limit: int | None) -> int:
    if limit is not None:
        return limit
    env = os.environ.get(CANON_LIMIT_ENV)
    return int(env) if env else DEFAULT_CANON_LIMIT


def canonical_form(r: Rack, limit: int | None = None) -> Rack:
    """Lexicographically minimal flattened table over all relabelings.

    Equal canonical forms characterize isomorphic racks.  Uses pruned
    backtracking: new labels are assigned greedily while scanning the
    would-be table in row-major order, branching only where a label choice
    is genuinely free, and abandoning branches that cannot beat the
    incumbent.  The degree cap (default 12) can be overridden by the
    `limit` argument or the RACKFORGE_CANON_LIMIT environment variable.
    """
    n = r.n
    lim = _canon_limit(limit)
    if n > lim:
        raise ResourceLimitError(
            f"canonical form capped at degree {lim} (table has {n})")
    T = [list(row) for row in r.table]
    nn = n * n
    lab = [-1] * n      # new label -> old element
    pos = [-1] * n      # old element -> new label
    cur = [0] * nn
    best: list | None = None

    def finish(start: int, b):
        """Evaluate cells start..nn-1 (all labels assigned) against best."""
        nonlocal best
        if b is None:
            for t in range(start, nn):
                i, j = divmod(t, n)
                cur[t] = pos[T[lab[i]][lab[j]]]
            best = cur.copy()
            return
        for t in range(start, nn):
            i, j = divmod(t, n)
            v = pos[T[lab[i]][lab[j]]]
            if v > b[t]:
                return
            cur[t] = v
            if v < b[t]:
                for s in range(t + 1, nn):
                    i2, j2 = divmod(s, n)
                    cur[s] = pos[T[lab[i2]][lab[j2]]]
                best = cur.copy()
                return

    def rec(j: int, used: int):
        """Process row-0 cell (0, j); labels 0..used-1 are assigned."""
        nonlocal best
        if j == n:
            finish(n, best)
            return
        e0 = lab[0]
        if lab[j] == -1:
            # used == j here: branch on which element receives label j
            cands = []
            for e in range(n):
                if pos[e] != -1:
                    continue
                v = T[e0 if j else e][e]
                if v == e:
                    val = j
                elif pos[v] != -1:
                    val = pos[v]
                else:
                    val = j + 1
                cands.append((val, e))
            cands.sort()
            for val, e in cands:
                if best is not None:
                    if val > best[j]:
                        break
                    if val < best[j]:
                        best = None
                lab[j] = e
                pos[e] = j
                v = T[lab[0]][e]
                extra = -1
                if pos[v] == -1:
                    lab[j + 1] = v
                    pos[v] = j + 1
                    extra = v
                cur[j] = pos[v]
                rec(j + 1, j + 1 + (1 if extra != -1 else 0))
                if extra != -1:
                    pos[extra] = -1
                    lab[j + 1] = -1
                pos[e] = -1
                lab[j] = -1
        else:
            e = lab[j]
            v = T[e0][e]
            extra = -1
            if pos[v] == -1:
                lab[used] = v
                pos[v] = used
                extra = v
            val = pos[v]
            ok = True
            if best is not None:
                if val > best[j]:
                    ok = False
                elif val < best[j]:
                    best = None
            if ok:
                cur[j] = val
                rec(j + 1, used + (1 if extra != -1 else 0))
            if extra != -1:
                pos[extra] = -1
                lab[used] = -1

    rec(0, 0)
    assert best is not None
    return Rack(tuple(tuple(best[i * n:(i + 1) * n]) for i in range(n)))


def _row_invariants(table):
    return [(perm.cycle_type(row), table[x][x] == x)
            for x, row in enumerate(table)]


def _iso_search(Ta, Tb, find_all: bool = False):
    """Backtracking search for relabelings T with T(x|>y) = T(x)|>T(y).

    Returns a list of witnesses (all of them when find_all, else at most
    one).  Forced propagation: once T is known on x and y it is forced on
    x|>y.
    """
    n = len(Ta)
    inv_a = _row_invariants(Ta)
    inv_b = _row_invariants(Tb)
    if sorted(inv_a) != sorted(inv_b):
        return []
    m = [-1] * n
    used = [False] * n
    assigned: list[int] = []
    results = []

    def assign(x, y, trail):
        if m[x] != -1:
            return m[x] == y
        if used[y] or inv_a[x] != inv_b[y]:
            return False
        m[x] = y
        used[y] = True
        assigned.append(x)
        trail.append(x)
        return True

    def propagate(qstart, trail):
        qi = qstart
        while qi < len(assigned):
            x = assigned[qi]
            qi += 1
            for w_idx in range(len(assigned)):
                w = assigned[w_idx]
                for s, t in ((x, w), (w, x)):
                    v = Ta[s][t]
                    vm = Tb[m[s]][m[t]]
                    if m[v] == -1:
                        if not assign(v, vm, trail):
                            return False
                    elif m[v] != vm:
                        return False
        return True

    def undo(trail):
        for x in trail:
            used[m[x]] = False
            m[x] = -1
            assigned.pop()

    def solve() -> bool:
        x = next((i for i in range(n) if m[i] == -1), -1)
        if x == -1:
            results.append(tuple(m))
            return not find_all
        for y in range(n):
            if used[y] or inv_a[x] != inv_b[y]:
                continue
            trail: list[int] = []
            qstart = len(assigned)
            if assign(x, y, trail) and propagate(qstart, trail):
                if solve():
                    undo(trail)
                    return True
            undo(trail)
        return False

    solve()
    return results


def are_isomorphic(a: Rack, b: Rack) -> Perm | None:
    """A relabeling witness T with T(x|>y) = T(x)|>T(y), or None."""
    if a.n != b.n:
        return None
    found = _iso_search(a.table, b.table)
    return found[0] if found else None


def automorphism_group(r: Rack, limit: int | None = None) -> PermGroup:
    """All relabelings fixing the table, as a PermGroup."""
    lim = _canon_limit(limit)
    if r.n > lim:
        raise ResourceLimitError(
            f"automorphism search capped at degree {lim} (table has {r.n})")
    autos = sorted(_iso_search(r.table, r.table, find_all=True))
    return PermGroup(r.n, tuple(autos), tuple(autos))
