"""Brute-force enumeration of connected racks and quandles up to isomorphism.

Independent of the order-p^2 catalog, so the two can cross-check each
other.  The search exploits connectivity twice over:

  * the inner group conjugates rows onto rows (a Q2 consequence), so rows
    propagate: knowing rows x and y forces the row of x |> y;
  * all rows of a connected rack are conjugate, so row candidates are
    drawn from a single conjugacy class of Sym(n), and the row of the
    basepoint is only needed up to conjugacy in the basepoint stabilizer.

Where propagation stalls the search branches over candidate rows for the
smallest uncovered point.  Completed tables are re-checked from scratch
(Q1, Q2, connectivity, Q3 for quandles) and deduplicated by canonical
form, so the reductions above are pure optimizations.

enumerate_all_naive is the oracle-of-the-oracle: a direct scan over all
row assignments, feasible only for n <= 4.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import perm
from .errors import ResourceLimitError
from .rack import Rack, _q2_holds, canonical_form

MAX_CONNECTED_ORDER = 9
MAX_NAIVE_ORDER = 4
KINDS = ("rack", "quandle")


@dataclass(frozen=True)
class EnumerationResult:
    order: int
    kind: str
    connected_only: bool
    classes: tuple          # canonical Racks, sorted by table
    count: int


def _partitions(n: int, largest: int | None = None):
    """Partitions of n as descending tuples."""
    if n == 0:
        yield ()
        return
    if largest is None:
        largest = n
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def _cycles_perm(n: int, parts, offset: int) -> list:
    """Permutation of {0..n-1} made of consecutive cycles starting at offset."""
    images = list(range(n))
    at = offset
    for m in parts:
        for i in range(m):
            images[at + i] = at + (i + 1) % m
        at += m
    return images


def seed_representatives(n: int, kind: str) -> list:
    """Candidate rows for element 0, one per conjugacy class of the
    stabilizer of 0.

    For quandles the seed fixes 0 (cycle types of Sym(n-1)); for racks the
    class invariant is the cycle type plus the length of the cycle
    through 0.
    """
    seeds = []
    if kind == "quandle":
        for parts in _partitions(n - 1):
            seeds.append(tuple(_cycles_perm(n, parts, 1)))
    else:
        for parts in _partitions(n):
            for m in sorted(set(parts), reverse=True):
                rest = list(parts)
                rest.remove(m)
                images = _cycles_perm(n, rest, m)
                for i in range(m):
                    images[i] = (i + 1) % m
                seeds.append(tuple(images))
    return seeds


@lru_cache(maxsize=32)
def perms_of_cycle_type(n: int, parts: tuple) -> tuple:
    """Every permutation of {0..n-1} with the given cycle type, once each.

    Cycles are anchored at the smallest point they contain and placed in
    order of increasing anchor, which makes the construction duplicate
    free.
    """
    parts = tuple(sorted(parts, reverse=True))
    if sum(parts) != n:
        raise ValueError("cycle type must partition n")
    out = []
    images = list(range(n))

    def rec(remaining: tuple, lengths: tuple):
        if not lengths:
            out.append(tuple(images))
            return
        anchor = remaining[0]
        rest = remaining[1:]
        for m in sorted(set(lengths), reverse=True):
            next_lengths = list(lengths)
            next_lengths.remove(m)
            for others in itertools.permutations(rest, m - 1):
                cycle = (anchor,) + others
                for i in range(m):
                    images[cycle[i]] = cycle[(i + 1) % m]
                used = set(others)
                rec(tuple(x for x in rest if x not in used),
                    tuple(next_lengths))
                for i in range(m):
                    images[cycle[i]] = cycle[i]

    rec(tuple(range(n)), parts)
    return tuple(out)


def _close_rows(n: int, rows: dict):
    """Fixpoint of: rows x, y known => row of x|>y is row_x row_y row_x^-1.

    Returns the closed dict or None on an inconsistency.
    """
    rng = range(n)
    queue = list(rows)
    while queue:
        x = queue.pop()
        rx = rows[x]
        for y in list(rows):
            ry = rows[y]
            for s, t, rs, rt in ((x, y, rx, ry), (y, x, ry, rx)):
                z = rs[t]
                have = rows.get(z)
                if have is None:
                    rows[z] = perm.conjugate(rs, rt)
                    queue.append(z)
                elif any(have[rs[i]] != rs[rt[i]] for i in rng):
                    return None
    return rows


def _row_consistent(tau, y: int, rows: dict) -> bool:
    """Quick filter: adding row tau at y must conjugate known rows onto
    known rows wherever tau maps a covered point to a covered point."""
    for x, rx in rows.items():
        target = rows.get(tau[x])
        if target is not None:
            # tau rx tau^-1 == target, elementwise with early exit
            if any(target[tau[i]] != tau[rx[i]] for i in range(len(tau))):
                return False
    return True


def _rows_transitive(table) -> bool:
    """Single row-orbit: 0 reaches everything under the distinct rows."""
    n = len(table)
    rows = set(table)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for r in rows:
            y = r[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def _accept(n: int, kind: str, rows: dict, out: set):
    table = tuple(rows[x] for x in range(n))
    if kind == "quandle" and any(table[x][x] != x for x in range(n)):
        return
    if not _rows_transitive(table):
        return
    if not all(perm.is_permutation(row) for row in table):
        return
    if not _q2_holds(np.array(table, dtype=np.int32)):
        return
    out.add(canonical_form(Rack(table)).table)


def _search(n: int, kind: str, rows: dict, candidates: dict, out: set):
    rows = _close_rows(n, dict(rows))
    if rows is None:
        return
    if len(rows) == n:
        _accept(n, kind, rows, out)
        return
    y = min(x for x in range(n) if x not in rows)
    for tau in candidates[y]:
        if _row_consistent(tau, y, rows):
            branch = dict(rows)
            branch[y] = tau
            _search(n, kind, branch, candidates, out)


def _cycles_of(p: perm.Perm) -> list:
    seen = [False] * len(p)
    cycles = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc, x = [], start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        cycles.append(cyc)
    return cycles


def _centralizer_gens(sigma: perm.Perm) -> list:
    """Generators of the centralizer of sigma in Sym(n): one rotation per
    cycle plus swaps of adjacent equal-length cycles."""
    n = len(sigma)
    cycles = _cycles_of(sigma)
    gens = []
    for cyc in cycles:
        if len(cyc) > 1:
            g = list(range(n))
            for i, x in enumerate(cyc):
                g[x] = cyc[(i + 1) % len(cyc)]
            gens.append(tuple(g))
    by_len: dict = {}
    for cyc in cycles:
        by_len.setdefault(len(cyc), []).append(cyc)
    for group in by_len.values():
        for a, b in zip(group, group[1:]):
            g = list(range(n))
            for x, y in zip(a, b):
                g[x], g[y] = y, x
            gens.append(tuple(g))
    return gens


def _centralizer_order(ctype: tuple) -> int:
    order = 1
    for length in set(ctype):
        mult = ctype.count(length)
        order *= length ** mult * math.factorial(mult)
    return order


def _first_branch_reps(sigma, covered, y: int, candidates,
                       cap: int = 20000) -> list:
    """Candidates for the first branched row, one per orbit of the
    seed-state stabilizer (centralizer of sigma fixing the covered set
    setwise and the branch point).  Dropped candidates lead to relabeled
    copies of kept completions, so this is a pure optimization."""
    order = _centralizer_order(perm.cycle_type(sigma))
    if order > cap or len(candidates) < 4:
        return list(candidates)
    cov = frozenset(covered)
    cent = perm.closure(_centralizer_gens(sigma), degree=len(sigma)).elements
    stab = [c for c in cent
            if c[y] == y and frozenset(c[k] for k in cov) == cov]
    if len(stab) <= 1:
        return list(candidates)
    seen: set = set()
    reps = []
    for tau in candidates:
        if tau in seen:
            continue
        reps.append(tau)
        for c in stab:
            seen.add(perm.conjugate(c, tau))
    return reps


def _canonical_tables_for_seeds(n: int, kind: str, seeds) -> set:
    out: set = set()
    for seed in seeds:
        ctype = perm.cycle_type(seed)
        cls = perms_of_cycle_type(n, ctype)
        if kind == "quandle":
            candidates = {y: [t for t in cls if t[y] == y] for y in range(1, n)}
        else:
            candidates = {y: cls for y in range(1, n)}
        rows = _close_rows(n, {0: seed})
        if rows is None:
            continue
        if len(rows) == n:
            _accept(n, kind, rows, out)
            continue
        y = min(x for x in range(n) if x not in rows)
        for tau in _first_branch_reps(seed, rows, y, candidates[y]):
            if _row_consistent(tau, y, rows):
                branch = dict(rows)
                branch[y] = tau
                _search(n, kind, branch, candidates, out)
    return out


def _worker(args):
    n, kind, seeds = args
    return _canonical_tables_for_seeds(n, kind, seeds)


def enumerate_connected(n: int, kind: str, jobs: int | None = None) -> EnumerationResult:
    """All connected racks (or quandles) of order n up to isomorphism.

    The result is deterministic: a sorted tuple of canonical forms,
    independent of worker count and seed order.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if not 2 <= n <= MAX_CONNECTED_ORDER:
        raise ResourceLimitError(
            f"connected enumeration supports 2 <= n <= {MAX_CONNECTED_ORDER}")
    seeds = seed_representatives(n, kind)
    if jobs and jobs > 1:
        chunks = [seeds[i::jobs] for i in range(jobs)]
        found: set = set()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_worker, [(n, kind, c) for c in chunks if c]):
                found |= part
    else:
        found = _canonical_tables_for_seeds(n, kind, seeds)
    classes = tuple(Rack(t) for t in sorted(found))
    return EnumerationResult(n, kind, True, classes, len(classes))


def enumerate_all_naive(n: int, kind: str,
                        connected_only: bool = True) -> EnumerationResult:
    """Exhaustive scan over all row assignments, n <= 4 only.

    Rows are picked from Sym(n) (diagonal-fixing rows for quandles) with
    the self-distributivity triples checked as soon as the rows they
    mention are all placed.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if not 1 <= n <= MAX_NAIVE_ORDER:
        raise ResourceLimitError(f"naive enumeration supports n <= {MAX_NAIVE_ORDER}")
    perms = list(itertools.permutations(range(n)))
    if kind == "quandle":
        candidates = [[q for q in perms if q[x] == x] for x in range(n)]
    else:
        candidates = [perms] * n

    found = set()
    table: list = [None] * n

    def q2_new_rows_ok(i: int) -> bool:
        # triples (x, y, z) whose rows x, y, x|>y are all <= i and involve i
        for x in range(i + 1):
            tx = table[x]
            for y in range(i + 1):
                w = tx[y]
                if w > i or max(x, y, w) < i:
                    continue
                ty, tw = table[y], table[w]
                if any(tx[ty[z]] != tw[tx[z]] for z in range(n)):
                    return False
        return True

    def rec(i: int):
        if i == n:
            if connected_only and \
                    len(perm.orbits(perm.closure(sorted(set(table))))) != 1:
                return
            found.add(canonical_form(Rack(tuple(table))).table)
            return
        for row in candidates[i]:
            table[i] = row
            if q2_new_rows_ok(i):
                rec(i + 1)
        table[i] = None

    rec(0)
    classes = tuple(Rack(t) for t in sorted(found))
    return EnumerationResult(n, kind, connected_only, classes, len(classes))
