"""Twisted conjugation g |> h = g alpha(h g^-1) on the two nonabelian
groups of order p^3 (p odd), and verification that the p^2-sized orbits
carry the predicted affine quandle structures.

Group H(p) ("heis"): (Z_p + Z_p) x| C_p, elements (x, y) t^z with
    (x,y)t^z (x',y')t^z' = (x+x', y+y'+z x') t^(z+z').
Automorphisms are parameterized by (a, j, b, c, k, d) with q = da - bc a
unit: alpha maps (1,0) to (a,j)t^b and t to (c,k)t^d.

Group M(p) ("meta"): Z_{p^2} x| C_p, elements a t^b with
    (a t^b)(a' t^b') = (a + a'(1 + p b)) t^(b+b').
Automorphisms fix d = 1 and are parameterized by (a, b, c') with p not
dividing a: alpha(1) = a t^b, alpha(t) = (p c') t.

The orbit of a seed under the twisted action, when it has p^2 elements,
is a quandle isomorphic to an explicit affine quandle; the isomorphism is
realized by a closed-form rectifying bijection which is checked here
alongside a generic isomorphism search.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .affine import AffineQuandle, cyclic, elementary, is_prime
from .rack import Rack, validate


def _inv(a: int, p: int) -> int:
    return pow(a, -1, p)


# ---------------------------------------------------------------- heis

def heis_elements(p: int) -> list:
    return [(x, y, z) for x in range(p) for y in range(p) for z in range(p)]


def heis_mul(p: int, g: tuple, h: tuple) -> tuple:
    x, y, z = g
    x2, y2, z2 = h
    return ((x + x2) % p, (y + y2 + z * x2) % p, (z + z2) % p)


def heis_inv(p: int, g: tuple) -> tuple:
    x, y, z = g
    return (-x % p, (-y + z * x) % p, -z % p)


@dataclass(frozen=True)
class HeisAut:
    """Automorphism of H(p) determined by images of (1,0) and t."""

    p: int
    a: int
    j: int
    b: int
    c: int
    k: int
    d: int

    @property
    def q(self) -> int:
        return (self.d * self.a - self.b * self.c) % self.p

    def apply(self, g: tuple) -> tuple:
        p = self.p
        x, y, z = g
        half = _inv(2, p)
        second = (self.b * self.c * x * z + x * self.j + z * self.k
                  + self.a * self.b * x * (x - 1) * half
                  + self.c * self.d * z * (z - 1) * half
                  + y * self.q)
        return ((x * self.a + z * self.c) % p, second % p,
                (self.b * x + self.d * z) % p)

    def matrix(self) -> tuple:
        """The map (x, z) -> (a x + c z, b x + d z) read off the orbit
        increment; its degeneracy pattern decides the orbit sizes."""
        return ((self.a, self.c), (self.b, self.d))


def _check_automorphism(p, elements, mul, apply_fn, exhaustive: bool):
    if exhaustive:
        pairs = ((g, h) for g in elements for h in elements)
    else:
        rng = random.Random(20240823)
        pairs = ((elements[rng.randrange(len(elements))],
                  elements[rng.randrange(len(elements))]) for _ in range(200))
    for g, h in pairs:
        if apply_fn(mul(p, g, h)) != mul(p, apply_fn(g), apply_fn(h)):
            return False
    if exhaustive and len({apply_fn(g) for g in elements}) != len(elements):
        return False
    return True


def build_heis_aut(p: int, a: int, j: int, b: int, c: int, k: int, d: int) -> HeisAut:
    """Validated automorphism of H(p); q = da - bc must be a unit.

    q = 1 is allowed (a valid automorphism) but such maps fix the center
    pointwise; callers interested in faithful racks filter them out.
    """
    if p == 2 or not is_prime(p):
        raise ValueError("the order-p^3 machinery needs an odd prime")
    aut = HeisAut(p, a % p, j % p, b % p, c % p, k % p, d % p)
    if aut.q == 0:
        raise ValueError("q = da - bc must be nonzero for an automorphism")
    if not _check_automorphism(p, heis_elements(p), heis_mul, aut.apply,
                               exhaustive=(p == 3)):
        raise RuntimeError("internal error: parameterized map is not an automorphism")
    return aut


# ---------------------------------------------------------------- meta

def meta_elements(p: int) -> list:
    return [(a, b) for a in range(p * p) for b in range(p)]


def meta_mul(p: int, g: tuple, h: tuple) -> tuple:
    a, b = g
    a2, b2 = h
    return ((a + a2 * (1 + p * b)) % (p * p), (b + b2) % p)


def meta_inv(p: int, g: tuple) -> tuple:
    a, b = g
    return ((-a * (1 - p * b)) % (p * p), -b % p)


@dataclass(frozen=True)
class MetaAut:
    """Automorphism of M(p): alpha(1) = a t^b, alpha(t) = (p c') t."""

    p: int
    a: int
    b: int
    cprime: int

    def apply(self, g: tuple) -> tuple:
        p = self.p
        n, m = g
        half_n = n * (n - 1) // 2
        first = (self.a * n + p * (self.a * self.b * half_n + self.cprime * m))
        return (first % (p * p), (self.b * n + m) % p)


def build_meta_aut(p: int, a: int, b: int, cprime: int) -> MetaAut:
    if p == 2 or not is_prime(p):
        raise ValueError("the order-p^3 machinery needs an odd prime")
    if a % p == 0:
        raise ValueError("p | a would give alpha(1) order p, not p^2")
    aut = MetaAut(p, a % (p * p), b % p, cprime % p)
    if not _check_automorphism(p, meta_elements(p), meta_mul, aut.apply,
                               exhaustive=(p == 3)):
        raise RuntimeError("internal error: parameterized map is not an automorphism")
    return aut


# ---------------------------------------------------------------- orbits

def _group_ops(aut):
    if isinstance(aut, HeisAut):
        return heis_elements(aut.p), heis_mul, heis_inv
    if isinstance(aut, MetaAut):
        return meta_elements(aut.p), meta_mul, meta_inv
    raise TypeError(f"unsupported automorphism {aut!r}")


def twisted_op(aut, g: tuple, h: tuple) -> tuple:
    """g |> h = g alpha(h g^-1)."""
    p = aut.p
    _, mul, inv = _group_ops(aut)
    return mul(p, g, aut.apply(mul(p, h, inv(p, g))))


@dataclass(frozen=True)
class OrbitResult:
    elements: tuple         # sorted orbit elements
    rack: Rack              # induced structure, indices follow `elements`

    @property
    def size(self) -> int:
        return len(self.elements)


def _induced_rack(aut, elements_subset) -> OrbitResult:
    ordered = sorted(elements_subset)
    index = {e: i for i, e in enumerate(ordered)}
    table = []
    for g in ordered:
        row = []
        for h in ordered:
            v = twisted_op(aut, g, h)
            assert v in index, "internal error: set not closed under |>"
            row.append(index[v])
        table.append(tuple(row))
    r = Rack(tuple(table))
    props = validate(r.table)
    assert props.q1 and props.q2, "internal error: induced table is not a rack"
    return OrbitResult(tuple(ordered), r)


def twisted_orbit(aut, seed: tuple) -> OrbitResult:
    """Close `seed` under h -> g |> h over all group elements g.

    The orbit is stable under the action, so it always carries an induced
    operation table; Q1 and Q2 are asserted on it.
    """
    elements, mul, inv = _group_ops(aut)
    p = aut.p
    orbit = {seed}
    frontier = [seed]
    while frontier:
        new = []
        for h in frontier:
            for g in elements:
                nxt = mul(p, g, aut.apply(mul(p, h, inv(p, g))))
                if nxt not in orbit:
                    orbit.add(nxt)
                    new.append(nxt)
        frontier = new
    return _induced_rack(aut, orbit)


# ----------------------------------------------------- predicted affine

def heis_case(aut: HeisAut) -> str:
    """Which of the orbit-size regimes the automorphism falls in."""
    p = aut.p
    (a, c), (b, d) = aut.matrix()
    am1 = ((a - 1) % p, c % p, b % p, (d - 1) % p)
    if am1 == (0, 0, 0, 0):
        return "all_orbits_size_p"
    det = (am1[0] * am1[3] - am1[1] * am1[2]) % p
    if det != 0:
        return "single_orbit"
    if (am1[0], am1[1]) != (0, 0):
        return "p2_nontrivial_row"
    return "p2_trivial_row"


def _heis_u(aut: HeisAut) -> int:
    """u with (b, d-1) = u * (a-1, c); only defined in the nontrivial-row
    case, where (a-1, c) != 0 and the rows of A-1 are proportional."""
    p = aut.p
    r, s = (aut.a - 1) % p, aut.c % p
    if r:
        return (aut.b * _inv(r, p)) % p
    return ((aut.d - 1) * _inv(s, p)) % p


def meta_case(aut: MetaAut) -> str:
    return "p2_orbits" if aut.a % aut.p != 1 else "decomposable_orbits"


def orbit_seed(aut, C: int) -> tuple:
    """A canonical member of the orbit with constant C."""
    p = aut.p
    if isinstance(aut, HeisAut):
        case = heis_case(aut)
        if case == "p2_nontrivial_row":
            return (0, 0, C % p)            # tau - u*lambda = C with lambda = 0
        if case == "p2_trivial_row":
            return (C % p, 0, 0)            # lambda = C
        raise ValueError(f"no orbit constant in case {case!r}")
    if meta_case(aut) == "p2_orbits":
        return (0, C % p)                   # x = 0, exponent C
    return (C % p, 0)                       # elements (C + p x) t^y


def constant_slice(aut, C: int) -> OrbitResult:
    """The action-invariant set of elements with constant C, with its
    induced structure.

    In the p^2-orbit cases this is a single orbit; in the meta case with
    a = 1 mod p it splits further (each t-exponent is stable), so the
    induced rack is decomposable.
    """
    p = aut.p
    if isinstance(aut, HeisAut):
        case = heis_case(aut)
        if case == "p2_nontrivial_row":
            u = _heis_u(aut)
            members = {(lam, sig, (C + u * lam) % p)
                       for lam in range(p) for sig in range(p)}
        elif case == "p2_trivial_row":
            members = {(C % p, sig, tau) for sig in range(p) for tau in range(p)}
        else:
            raise ValueError(f"no constant slice in heis case {case!r}")
    elif meta_case(aut) == "p2_orbits":
        slope = (-aut.b * _inv((1 - aut.a) % p, p)) % p
        members = {(x, (slope * x + C) % p) for x in range(p * p)}
    else:
        members = {((C + p * x) % (p * p), y) for x in range(p) for y in range(p)}
    return _induced_rack(aut, members)


def predicted_affine(aut, C: int) -> AffineQuandle:
    """Closed-form affine quandle isomorphic to the orbit with constant C."""
    p = aut.p
    if isinstance(aut, HeisAut):
        case = heis_case(aut)
        q = aut.q
        if case == "p2_nontrivial_row":
            r, s = (aut.a - 1) % p, aut.c % p
            u = _heis_u(aut)
            half = _inv(2, p)
            kappa = (aut.j + u * aut.k
                     - half * u * q * r + half * u * u * s * r
                     - half * u * s * q + half * u * s * r
                     + C * q) % p
            return AffineQuandle(elementary(p), ((q, 0), (kappa, q)))
        if case == "p2_trivial_row":
            kappa = (aut.k - C * q) % p
            return AffineQuandle(elementary(p), ((q, kappa), (0, q)))
        raise ValueError(f"no affine prediction in heis case {case!r}")
    if meta_case(aut) != "p2_orbits":
        raise ValueError("no affine prediction in the decomposable meta case")
    a, b, cp = aut.a, aut.b, aut.cprime
    half = _inv(2, p)
    w = (-b * cp * _inv((1 - a) % p, p) + a * C - a * b * half) % p
    return AffineQuandle(cyclic(p * p), (a + p * w) % (p * p))


def rectifying_bijection(aut, C: int, orbit: OrbitResult) -> list:
    """The paper-style closed-form isomorphism as an index map.

    heis cases: maps orbit indices to affine indices (pairs (i, j) packed
    as i*p + j).  meta case: maps affine indices x in Z_{p^2} to orbit
    indices.
    """
    p = aut.p
    index = {e: i for i, e in enumerate(orbit.elements)}
    if isinstance(aut, HeisAut):
        case = heis_case(aut)
        out = [0] * len(orbit.elements)
        if case == "p2_nontrivial_row":
            u = _heis_u(aut)
            half = _inv(2, p)
            for e, i in index.items():
                x, y, tau = e
                assert tau == (u * x + C) % p
                out[i] = x * p + (y - u * x * (x - 1) * half) % p
            return out
        if case == "p2_trivial_row":
            for e, i in index.items():
                lam, y, z = e
                assert lam == C % p
                out[i] = y * p + z
            return out
        raise ValueError(f"no rectifying bijection in heis case {case!r}")
    if meta_case(aut) != "p2_orbits":
        raise ValueError("no rectifying bijection in the decomposable meta case")
    a, b = aut.a, aut.b
    slope = (-b * _inv((1 - a) % p, p)) % p
    half = _inv(2, p)
    out = [0] * (p * p)
    for x in range(p * p):
        elem = ((x + p * slope * x * (x - 1) * half) % (p * p),
                (slope * x + C) % p)
        out[x] = index[elem]
    return out


@dataclass(frozen=True)
class OrbitVerification:
    orbit_size: int
    affine: AffineQuandle
    witness: tuple          # isomorphism found by the generic search
    closed_form_ok: bool    # the rectifying bijection is itself an isomorphism
    ok: bool


def verify_orbit_affine(aut, C: int) -> OrbitVerification:
    """Build the orbit with constant C, the predicted affine quandle, and
    check both the searched and the closed-form isomorphisms.

    Heisenberg-side automorphisms with q = 1 fix the center pointwise and
    sit outside the verified domain (some orbit constants then give orbits
    smaller than p^2); they are rejected as a domain error.
    """
    from .affine import affine_to_rack
    from .rack import are_isomorphic

    if isinstance(aut, HeisAut) and aut.q == 1:
        raise ValueError("q = 1 fixes the center; outside the p^2-orbit "
                         "verification domain")
    p = aut.p
    orbit = twisted_orbit(aut, orbit_seed(aut, C))
    if orbit.size != p * p:
        raise RuntimeError(f"internal error: expected a p^2 orbit, got {orbit.size}")
    _check_membership(aut, C, orbit)
    aff = predicted_affine(aut, C)
    aff_rack = affine_to_rack(aff)
    witness = are_isomorphic(orbit.rack, aff_rack)
    if witness is None:
        raise RuntimeError("internal error: orbit not isomorphic to predicted affine")

    f = rectifying_bijection(aut, C, orbit)
    ta, tb = ((orbit.rack.table, aff_rack.table) if isinstance(aut, HeisAut)
              else (aff_rack.table, orbit.rack.table))
    closed_ok = all(tb[f[x]][f[y]] == f[ta[x][y]]
                    for x in range(p * p) for y in range(p * p))
    return OrbitVerification(orbit.size, aff, witness, closed_ok,
                             witness is not None and closed_ok)


def _check_membership(aut, C: int, orbit: OrbitResult):
    """The pointwise orbit characterizations."""
    p = aut.p
    got = set(orbit.elements)
    if isinstance(aut, HeisAut):
        case = heis_case(aut)
        if case == "p2_nontrivial_row":
            u = _heis_u(aut)
            want = {(lam, sig, (C + u * lam) % p)
                    for lam in range(p) for sig in range(p)}
        else:
            want = {(C % p, sig, tau) for sig in range(p) for tau in range(p)}
    else:
        if meta_case(aut) == "p2_orbits":
            slope = (-aut.b * _inv((1 - aut.a) % p, p)) % p
            want = {(x, (slope * x + C) % p) for x in range(p * p)}
        else:
            want = {((C + p * x) % (p * p), y) for x in range(p) for y in range(p)}
    assert got == want, "internal error: orbit membership characterization failed"
