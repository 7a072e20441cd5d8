"""Nonabelian 2-cocycles on the affine quandle (Z_p, q) with values in a
finite group H.

A cocycle is a table beta: X x X -> H with

    beta(x, y|>z) beta(y, z) = beta(x|>y, x|>z) beta(x, z)

for all x, y, z; it is a quandle cocycle when additionally beta(x, x) = 1.
Two cocycles are cohomologous when beta'(x,y) = gamma(x|>y) beta(x,y)
gamma(y)^-1 for some gamma: X -> H.  Coefficients are given by an
explicit multiplication table; the action used for extensions defaults to
left translation of H on itself.

The headline computation: every normalized quandle cocycle on (Z_p, q) is
the constant identity, i.e. the quandle cocycle classes are trivial.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import rack as rackmod
from .affine import AffineQuandle, affine_to_rack, cyclic, is_prime
from .errors import ResourceLimitError
from .perm import Perm, compose, identity, is_permutation
from .rack import Rack

MAX_ENUM_PRIME = 5
MAX_ENUM_COEFF = 6


@dataclass(frozen=True)
class CoeffGroup:
    """Finite coefficient group: multiplication table plus derived data.

    `action`, when given, is one permutation of an auxiliary set S per
    element and must be a homomorphism into Sym(S); when absent the group
    acts on itself by left translation.
    """

    name: str
    mult: tuple
    identity: int
    inverse: tuple
    action: tuple | None = None

    @property
    def order(self) -> int:
        return len(self.mult)

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]


def coeff_group_from_mult(name: str, mult, action=None) -> CoeffGroup:
    """Build a CoeffGroup, verifying the group axioms on the table."""
    m = len(mult)
    table = tuple(tuple(int(v) for v in row) for row in mult)
    for row in table:
        if len(row) != m or any(not 0 <= v < m for v in row):
            raise ValueError("multiplication table is not square over 0..m-1")
    for a in range(m):
        for b in range(m):
            for c in range(m):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise ValueError("multiplication table is not associative")
    ident = next((e for e in range(m)
                  if all(table[e][a] == a == table[a][e] for a in range(m))), None)
    if ident is None:
        raise ValueError("multiplication table has no identity")
    inv = []
    for a in range(m):
        j = next((b for b in range(m) if table[a][b] == ident), None)
        if j is None or table[j][a] != ident:
            raise ValueError(f"element {a} has no inverse")
        inv.append(j)
    if action is not None:
        action = tuple(tuple(p) for p in action)
        if len(action) != m or any(not is_permutation(p) for p in action):
            raise ValueError("action must map every element to a permutation")
        for a in range(m):
            for b in range(m):
                if compose(action[a], action[b]) != action[table[a][b]]:
                    raise ValueError("action is not a homomorphism")
    return CoeffGroup(name, table, ident, tuple(inv), action)


def cyclic_coeff(m: int) -> CoeffGroup:
    if m < 1:
        raise ValueError("cyclic group order must be positive")
    mult = [[(a + b) % m for b in range(m)] for a in range(m)]
    return coeff_group_from_mult(f"cyclic:{m}", mult)


def sym_coeff(k: int) -> CoeffGroup:
    if not 1 <= k <= 3:
        raise ValueError("symmetric coefficient groups support k <= 3")
    elems = sorted(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(elems)}
    mult = [[index[compose(a, b)] for b in elems] for a in elems]
    return coeff_group_from_mult(f"sym:{k}", mult)


def coeff_from_name(name: str) -> CoeffGroup:
    """Parse 'cyclic:<m>' or 'sym:<k>'."""
    kind, _, arg = name.partition(":")
    if not arg or not arg.isdigit():
        raise ValueError(f"bad coefficient group name {name!r}")
    if kind == "cyclic":
        return cyclic_coeff(int(arg))
    if kind == "sym":
        return sym_coeff(int(arg))
    raise ValueError(f"unknown coefficient group kind {kind!r}")


def translation_action(coeff: CoeffGroup) -> tuple:
    """Permutations of H given by left translation (the default action)."""
    return tuple(tuple(coeff.mult[a][t] for t in range(coeff.order))
                 for a in range(coeff.order))


@dataclass(frozen=True)
class Cocycle:
    base: Rack
    coeff: CoeffGroup
    values: tuple           # values[x][y] is an index into coeff

    def __post_init__(self):
        n = self.base.n
        if len(self.values) != n or any(len(row) != n for row in self.values):
            raise ValueError("cocycle table must match the base rack order")
        m = self.coeff.order
        for row in self.values:
            for v in row:
                if not 0 <= v < m:
                    raise ValueError(f"cocycle value out of range: {v}")

    def value(self, x: int, y: int) -> int:
        return self.values[x][y]

    def permutation_values(self) -> list:
        """values mapped through the action (left translation by default)."""
        act = self.coeff.action or translation_action(self.coeff)
        return [[act[v] for v in row] for row in self.values]


def trivial_cocycle(base: Rack, coeff: CoeffGroup) -> Cocycle:
    e = coeff.identity
    return Cocycle(base, coeff, tuple((e,) * base.n for _ in range(base.n)))


def is_cocycle(c: Cocycle) -> bool:
    t = c.base.table
    v = c.values
    mul = c.coeff.mul
    n = c.base.n
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if mul(v[x][t[y][z]], v[y][z]) != mul(v[t[x][y]][t[x][z]], v[x][z]):
                    return False
    return True


def is_quandle_cocycle(c: Cocycle) -> bool:
    e = c.coeff.identity
    return is_cocycle(c) and all(c.values[x][x] == e for x in range(c.base.n))


def coboundary(gamma, base: Rack, coeff: CoeffGroup) -> Cocycle:
    """The cocycle gamma(x|>y) gamma(y)^-1 (deformation of the trivial one)."""
    g = [int(v) for v in gamma]
    if len(g) != base.n or any(not 0 <= v < coeff.order for v in g):
        raise ValueError("gamma must map the carrier into the coefficient group")
    t = base.table
    vals = tuple(tuple(coeff.mul(g[t[x][y]], coeff.inv(g[y]))
                       for y in range(base.n)) for x in range(base.n))
    return Cocycle(base, coeff, vals)


def deform(c: Cocycle, gamma) -> Cocycle:
    """The cohomologous cocycle gamma(x|>y) beta(x,y) gamma(y)^-1."""
    g = list(gamma)
    t = c.base.table
    mul, inv = c.coeff.mul, c.coeff.inv
    vals = tuple(tuple(mul(mul(g[t[x][y]], c.values[x][y]), inv(g[y]))
                       for y in range(c.base.n)) for x in range(c.base.n))
    return Cocycle(c.base, c.coeff, vals)


def affine_cyclic_params(base: Rack) -> tuple:
    """Recover (p, q) from a table equal to (Z_p, q); ValueError otherwise."""
    p = base.n
    q = base.table[0][1] if p > 1 else 0
    expected = AffineQuandle(cyclic(p), q) if 0 < q < p and is_prime(p) else None
    if expected is None or affine_to_rack(expected).table != base.table:
        raise ValueError("base is not an affine quandle (Z_p, q) in standard form")
    return p, q


def normalize(c: Cocycle) -> tuple:
    """Deform a quandle cocycle by gamma(x) = beta(x/(1-q), 0)^-1.

    The result satisfies beta'(x, 0) = beta'(x, x) = 1; on (Z_p, q) this
    forces the constant identity cocycle.  Returns (cocycle, gamma).
    """
    p, q = affine_cyclic_params(c.base)
    if q == 1:
        raise ValueError("q = 1 makes 1-q non-invertible; cannot normalize")
    if not is_quandle_cocycle(c):
        raise ValueError("normalize expects a quandle cocycle")
    inv1q = pow(1 - q, -1, p)
    gamma = tuple(c.coeff.inv(c.values[(x * inv1q) % p][0]) for x in range(p))
    out = deform(c, gamma)
    e = c.coeff.identity
    assert all(out.values[x][0] == e and out.values[x][x] == e for x in range(p))
    return out, gamma


def cohomologous(a: Cocycle, b: Cocycle):
    """A gamma with b(x,y) = gamma(x|>y) a(x,y) gamma(y)^-1, or None.

    gamma propagates along the base: fixing gamma(y) forces gamma(x|>y)
    for every x, so the search branches only once per connected component.
    """
    if a.base.table != b.base.table or a.coeff is not b.coeff and \
            a.coeff.mult != b.coeff.mult:
        raise ValueError("cocycles must share base and coefficient group")
    n = a.base.n
    t = a.base.table
    coeff = a.coeff
    mul, inv = coeff.mul, coeff.inv
    gamma = [-1] * n

    def propagate(start_queue):
        queue = list(start_queue)
        while queue:
            y = queue.pop()
            gy = gamma[y]
            for x in range(n):
                z = t[x][y]
                forced = mul(mul(b.values[x][y], gy), inv(a.values[x][y]))
                if gamma[z] == -1:
                    gamma[z] = forced
                    queue.append(z)
                elif gamma[z] != forced:
                    return False
        return True

    def solve():
        start = next((y for y in range(n) if gamma[y] == -1), -1)
        if start == -1:
            return all(
                b.values[x][y] == mul(mul(gamma[t[x][y]], a.values[x][y]),
                                      inv(gamma[y]))
                for x in range(n) for y in range(n))
        for h in range(coeff.order):
            saved = gamma.copy()
            gamma[start] = h
            if propagate([start]) and solve():
                return True
            gamma[:] = saved
        return False

    if solve():
        return tuple(gamma)
    return None


def enumerate_normalized_quandle_cocycles(p: int, q: int,
                                          coeff: CoeffGroup) -> list:
    """All quandle cocycles on (Z_p, q) with beta(x,0) = beta(x,x) = 1.

    Depth-first over the free entries (x != y, y != 0) in row-major order;
    whenever three of the four entries of a cocycle instance are fixed the
    fourth is solved immediately and conflicts cut the branch.
    """
    if not is_prime(p) or p > MAX_ENUM_PRIME:
        raise ResourceLimitError(f"cocycle enumeration capped at p <= {MAX_ENUM_PRIME}")
    if not 1 < q < p:
        raise ValueError(f"q must lie in 2..p-1, got {q}")
    if coeff.order > MAX_ENUM_COEFF:
        raise ResourceLimitError(
            f"cocycle enumeration capped at |H| <= {MAX_ENUM_COEFF}")

    base = affine_to_rack(AffineQuandle(cyclic(p), q))
    t = base.table
    mul, inv = coeff.mul, coeff.inv
    e = coeff.identity

    # the four cells of the instance (x,y,z): b(x, y|>z) b(y,z) = b(x|>y, x|>z) b(x,z)
    instances = []
    cell_instances: dict = {}
    for x in range(p):
        for y in range(p):
            for z in range(p):
                cells = ((x, t[y][z]), (y, z), (t[x][y], t[x][z]), (x, z))
                k = len(instances)
                instances.append(cells)
                for cell in set(cells):
                    cell_instances.setdefault(cell, []).append(k)

    values = [[-1] * p for _ in range(p)]
    for x in range(p):
        values[x][0] = e
        values[x][x] = e
    free = [(x, y) for x in range(p) for y in range(p) if y != 0 and x != y]
    solutions = []

    def check_or_solve(k, trail):
        c1, c2, c3, c4 = instances[k]
        v1, v2 = values[c1[0]][c1[1]], values[c2[0]][c2[1]]
        v3, v4 = values[c3[0]][c3[1]], values[c4[0]][c4[1]]
        unknown = [c for c, v in zip((c1, c2, c3, c4), (v1, v2, v3, v4)) if v == -1]
        if not unknown:
            return mul(v1, v2) == mul(v3, v4)
        distinct = set(unknown)
        if len(distinct) != 1 or len(unknown) != 1:
            return True  # not yet determined; re-checked on later assignment
        cell = unknown[0]
        if cell == c1:
            forced = mul(mul(v3, v4), inv(v2))
        elif cell == c2:
            forced = mul(inv(v1), mul(v3, v4))
        elif cell == c3:
            forced = mul(mul(v1, v2), inv(v4))
        else:
            forced = mul(inv(v3), mul(v1, v2))
        return assign(cell, forced, trail)

    def assign(cell, v, trail):
        x, y = cell
        if values[x][y] != -1:
            return values[x][y] == v
        values[x][y] = v
        trail.append(cell)
        return all(check_or_solve(k, trail) for k in cell_instances.get(cell, ()))

    def undo(trail):
        for x, y in trail:
            values[x][y] = -1

    def rec(i: int):
        while i < len(free) and values[free[i][0]][free[i][1]] != -1:
            i += 1
        if i == len(free):
            solutions.append(tuple(tuple(row) for row in values))
            return
        cell = free[i]
        for h in range(coeff.order):
            trail: list = []
            if assign(cell, h, trail):
                rec(i + 1)
            undo(trail)

    # propagate the pre-filled cells once before branching
    seed_trail: list = []
    ok = all(check_or_solve(k, seed_trail)
             for x in range(p) for k in cell_instances.get((x, 0), ()))
    ok = ok and all(check_or_solve(k, seed_trail)
                    for x in range(p) for k in cell_instances.get((x, x), ()))
    if ok:
        rec(0)

    out = []
    for vals in sorted(set(solutions)):
        c = Cocycle(base, coeff, vals)
        assert is_quandle_cocycle(c)
        out.append(c)
    return out


@dataclass(frozen=True)
class H2Report:
    p: int
    q: int
    coeff_name: str
    cocycle_count: int
    samples_checked: int
    trivial: bool


def h2q_is_trivial(p: int, q: int, coeff: CoeffGroup, samples: int = 100,
                   seed: int = 0) -> H2Report:
    """True iff the only normalized quandle cocycle is the constant
    identity and normalize sends sampled coboundaries to it."""
    sols = enumerate_normalized_quandle_cocycles(p, q, coeff)
    base = affine_to_rack(AffineQuandle(cyclic(p), q))
    e = coeff.identity
    only_trivial = (len(sols) == 1
                    and sols[0].values == trivial_cocycle(base, coeff).values)
    rng = random.Random(seed)
    normal_ok = True
    for _ in range(samples):
        gamma = [rng.randrange(coeff.order) for _ in range(p)]
        c = coboundary(gamma, base, coeff)
        normalized, _ = normalize(c)
        if any(v != e for row in normalized.values for v in row):
            normal_ok = False
            break
    return H2Report(p, q, coeff.name, len(sols), samples,
                    only_trivial and normal_ok)


def extension_of(c: Cocycle) -> Rack:
    """The extension rack of the base by c (action on S, default H itself)."""
    return rackmod.extension(c.base, c.permutation_values())
