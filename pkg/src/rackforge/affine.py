"""Affine (Alexander) quandles (A, g): x |> y = (1-g)(x) + g(y).

Three carriers are supported: cyclic groups Z_n, elementary groups
Z_p + Z_p, and the field F_{p^2} realized as Z_p[t]/(m(t)) with m the
lexicographically least irreducible monic quadratic.  Elementary and
field automorphisms are both handled as 2x2 matrices over Z_p so one
similarity test serves both.

Element indexing for the order-p^2 carriers is (a, b) -> a*p + b; for
cyclic carriers it is 0..n-1.  Field elements (a, b) stand for a + b*t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .rack import Rack

Matrix = tuple  # ((a, b), (c, d)) acting on column vectors mod p


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(math.isqrt(n)) + 1))


@dataclass(frozen=True)
class AbelianGroup:
    """Descriptor of the abelian carrier: cyclic(n), elementary(p), field(p)."""

    kind: str
    param: int

    def __post_init__(self):
        if self.kind == "cyclic":
            if self.param < 1:
                raise ValueError("cyclic carrier needs n >= 1")
        elif self.kind in ("elementary", "field"):
            if not is_prime(self.param):
                raise ValueError(f"{self.kind} carrier needs a prime, got {self.param}")
        else:
            raise ValueError(f"unknown carrier kind {self.kind!r}")

    @property
    def order(self) -> int:
        return self.param if self.kind == "cyclic" else self.param ** 2


def cyclic(n: int) -> AbelianGroup:
    return AbelianGroup("cyclic", n)


def elementary(p: int) -> AbelianGroup:
    return AbelianGroup("elementary", p)


def field(p: int) -> AbelianGroup:
    return AbelianGroup("field", p)


@lru_cache(maxsize=None)
def irreducible_quadratic(p: int) -> tuple:
    """(m1, m0) for the least monic irreducible t^2 + m1*t + m0 over Z_p."""
    for m1 in range(p):
        for m0 in range(p):
            if all((u * u + m1 * u + m0) % p for u in range(p)):
                return (m1, m0)
    raise RuntimeError(f"no irreducible quadratic mod {p}")  # unreachable


def field_mul(p: int, u: tuple, v: tuple) -> tuple:
    """Multiply a + b*t elements of Z_p[t]/(t^2 + m1*t + m0)."""
    m1, m0 = irreducible_quadratic(p)
    a0, a1 = u
    b0, b1 = v
    hi = a1 * b1            # coefficient of t^2 = -m1*t - m0
    return ((a0 * b0 - m0 * hi) % p, (a0 * b1 + a1 * b0 - m1 * hi) % p)


def field_pow(p: int, u: tuple, k: int) -> tuple:
    out = (1, 0)
    base = u
    while k:
        if k & 1:
            out = field_mul(p, out, base)
        base = field_mul(p, base, base)
        k >>= 1
    return out


def frobenius(p: int, u: tuple) -> tuple:
    return field_pow(p, u, p)


def field_mul_matrix(p: int, u: tuple) -> Matrix:
    """Multiplication by u as a 2x2 matrix on (a, b) coordinates."""
    c1 = field_mul(p, u, (1, 0))
    ct = field_mul(p, u, (0, 1))
    return ((c1[0], ct[0]), (c1[1], ct[1]))


def mat_det(m: Matrix, p: int) -> int:
    return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) % p
                       for j in range(2)) for i in range(2))


def mat_apply(m: Matrix, v: tuple, p: int) -> tuple:
    return ((m[0][0] * v[0] + m[0][1] * v[1]) % p,
            (m[1][0] * v[0] + m[1][1] * v[1]) % p)


@dataclass(frozen=True)
class AffineQuandle:
    """Carrier plus automorphism.

    g is a unit mod n for cyclic carriers, a 2x2 invertible matrix mod p
    for elementary carriers, and a nonzero field element (a, b) for field
    carriers.
    """

    group: AbelianGroup
    g: object

    def __post_init__(self):
        kind, par = self.group.kind, self.group.param
        if kind == "cyclic":
            if not isinstance(self.g, int) or math.gcd(self.g % par, par) != 1:
                raise ValueError(f"g must be a unit mod {par}: {self.g!r}")
            object.__setattr__(self, "g", self.g % par)
        elif kind == "elementary":
            m = tuple(tuple(int(v) % par for v in row) for row in self.g)
            if len(m) != 2 or any(len(r) != 2 for r in m):
                raise ValueError("g must be a 2x2 matrix for elementary carriers")
            if mat_det(m, par) == 0:
                raise ValueError("g must be invertible (nonzero determinant)")
            object.__setattr__(self, "g", m)
        else:
            u = (int(self.g[0]) % par, int(self.g[1]) % par)
            if u == (0, 0):
                raise ValueError("g must be a nonzero field element")
            object.__setattr__(self, "g", u)

    def g_matrix(self) -> Matrix:
        """g as a matrix over Z_p (elementary and field carriers only)."""
        if self.group.kind == "elementary":
            return self.g
        if self.group.kind == "field":
            return field_mul_matrix(self.group.param, self.g)
        raise ValueError("cyclic carriers have no 2x2 matrix form")


def affine_to_rack(q: AffineQuandle) -> Rack:
    """Build the operation table x |> y = (1-g)(x) + g(y)."""
    kind, par = q.group.kind, q.group.param
    if kind == "cyclic":
        n = par
        idx = np.arange(n)
        g = q.g
        table = ((1 - g) * idx[:, None] + g * idx[None, :]) % n
        return Rack(tuple(tuple(int(v) for v in row) for row in table))
    p = par
    m = q.g_matrix()
    idx = np.arange(p * p)
    a, b = idx // p, idx % p
    ga = (m[0][0] * a + m[0][1] * b) % p
    gb = (m[1][0] * a + m[1][1] * b) % p
    out_a = ((a - ga)[:, None] + ga[None, :]) % p
    out_b = ((b - gb)[:, None] + gb[None, :]) % p
    table = out_a * p + out_b
    return Rack(tuple(tuple(int(v) for v in row) for row in table))


def _one_minus_g_invertible(q: AffineQuandle) -> bool:
    if q.group.kind == "cyclic":
        return math.gcd((1 - q.g) % q.group.param, q.group.param) == 1
    p = q.group.param
    m = q.g_matrix()
    one_minus = ((1 - m[0][0], -m[0][1]), (-m[1][0], 1 - m[1][1]))
    return mat_det(one_minus, p) != 0


def affine_is_indecomposable(q: AffineQuandle) -> bool:
    """Indecomposable iff 1-g is surjective; on finite carriers this is
    invertibility of 1-g."""
    return _one_minus_g_invertible(q)


def affine_is_faithful(q: AffineQuandle) -> bool:
    """Faithful iff 1-g is injective; coincides with surjectivity here."""
    return _one_minus_g_invertible(q)


def matrix_similarity_class(m: Matrix, p: int) -> tuple:
    """Rational-canonical-form tag of a 2x2 matrix over Z_p.

    One of ('scalar', l), ('split', (l, u)) with l < u, ('jordan', l), or
    ('irreducible', (c1, c0)) for characteristic polynomial t^2+c1*t+c0.
    Two matrices are similar iff their tags are equal.
    """
    tr = (m[0][0] + m[1][1]) % p
    det = mat_det(m, p)
    roots = [u for u in range(p) if (u * u - tr * u + det) % p == 0]
    if len(roots) == 2:
        return ("split", (roots[0], roots[1]))
    if len(roots) == 1:
        lam = roots[0]
        if m == ((lam, 0), (0, lam)):
            return ("scalar", lam)
        return ("jordan", lam)
    return ("irreducible", ((-tr) % p, det))


def affine_pairs_isomorphic(a: AffineQuandle, b: AffineQuandle):
    """Isomorphism witness T of the underlying pairs, with T g = h T.

    Both quandles must be indecomposable (the criterion used here is only
    valid then).  Returns a unit (cyclic) or a 2x2 matrix (elementary and
    field carriers, which are compared through their matrix forms), or
    None when the pairs are not isomorphic.
    """
    for q in (a, b):
        if not affine_is_indecomposable(q):
            raise ValueError("pair isomorphism criterion needs indecomposable quandles")
    if a.group.order != b.group.order:
        return None
    a_cyc = a.group.kind == "cyclic"
    b_cyc = b.group.kind == "cyclic"
    if a_cyc != b_cyc:
        return None
    if a_cyc:
        return 1 if a.g == b.g else None
    p = a.group.param
    ma, mb = a.g_matrix(), b.g_matrix()
    if matrix_similarity_class(ma, p) != matrix_similarity_class(mb, p):
        return None
    for code in range(p ** 4):
        c, rest = code % p, code // p
        d, rest = rest % p, rest // p
        e, f = rest % p, rest // p
        t = ((c, d), (e, f))
        if mat_det(t, p) == 0:
            continue
        if mat_mul(t, ma, p) == mat_mul(mb, t, p):
            return t
    raise RuntimeError("internal error: similar matrices with no conjugator")
