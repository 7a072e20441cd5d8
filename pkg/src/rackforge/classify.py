"""Catalog of indecomposable racks of order p^2.

Six families cover every isomorphism class:

  1. Z_p + Z_p, diagonalizable g = diag(a, b),  a, b in Z_p* - {1}
  2. Z_p + Z_p, Jordan block g = [[a,0],[1,a]],  a in Z_p* - {1}
  3. F_{p^2}, multiplication by a in F_{p^2} - F_p
  4. Z_{p^2}, x |> y = (1-a)x + a*y,  a != 0,1 mod p
  5. Z_{p^2}, x |> y = y + 1  (not a quandle, one class)
  6. Z_p + Z_p, (x1,x2) |> (y1,y2) = ((1-a)x1 + a*y1, y2 + 1),  a in Z_p* - {1}

Classes 1-4 are the quandles; in-class redundancy is removed by taking
a <= b in class 1 and one representative per Frobenius pair {a, a^p} in
class 3.  Per-class counts are ((p^2-3p+2)/2, p-2, p(p-1)/2, p^2-2p, 1,
p-2), totalling 2p^2-2p-2 racks of which 2p^2-3p-1 are quandles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import perm
from .affine import (AffineQuandle, affine_to_rack, cyclic, elementary, field,
                     field_mul, frobenius, is_prime, matrix_similarity_class)
from .errors import ResourceLimitError
from .rack import (Rack, canonical_form, image_quandle, inner_group,
                   is_indecomposable, is_quandle, validate, DEFAULT_CANON_LIMIT)

CLASSIFY_MAX_PRIME = 13


@dataclass(frozen=True)
class CatalogEntry:
    class_tag: int
    params: tuple
    rack: Rack
    canon: Rack | None      # canonical form; None above the canonization cap
    affine: AffineQuandle | None

    def name(self) -> str:
        bits = "_".join(str(v) for v in self.params)
        return f"class{self.class_tag}" + (f"_{bits}" if bits else "")


@dataclass(frozen=True)
class CountTable:
    per_class: tuple
    total_racks: int
    total_quandles: int

    def to_json_dict(self) -> dict:
        return {"per_class": list(self.per_class),
                "total_racks": self.total_racks,
                "total_quandles": self.total_quandles}


def class_counts(p: int) -> CountTable:
    """Closed-form per-class counts for prime p."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    per = ((p * p - 3 * p + 2) // 2, p - 2, p * (p - 1) // 2, p * p - 2 * p,
           1, p - 2)
    return CountTable(per, 2 * p * p - 2 * p - 2, 2 * p * p - 3 * p - 1)


def _permutation_rack_table(n: int) -> Rack:
    # x |> y = y + 1 on Z_n
    row = tuple((y + 1) % n for y in range(n))
    return Rack(tuple(row for _ in range(n)))


def _class6_rack(p: int, a: int) -> Rack:
    idx = np.arange(p * p)
    x1, x2 = idx // p, idx % p
    out1 = ((1 - a) * x1[:, None] + a * x1[None, :]) % p
    out2 = np.broadcast_to(((x2 + 1) % p)[None, :], (p * p, p * p))
    table = out1 * p + out2
    return Rack(tuple(tuple(int(v) for v in row) for row in table))


def _galois_orbit_rep(p: int, alpha: tuple) -> tuple:
    return min(alpha, frobenius(p, alpha))


def classify_p2(p: int) -> list:
    """One CatalogEntry per isomorphism class of indecomposable racks of
    order p^2, ordered by (class tag, parameters)."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if p > CLASSIFY_MAX_PRIME:
        raise ResourceLimitError(
            f"catalog construction capped at p <= {CLASSIFY_MAX_PRIME}")

    entries = []
    units_not_one = range(2, p)

    for a in units_not_one:
        for b in units_not_one:
            if a <= b:
                q = AffineQuandle(elementary(p), ((a, 0), (0, b)))
                entries.append((1, (a, b), q))
    for a in units_not_one:
        q = AffineQuandle(elementary(p), ((a, 0), (1, a)))
        entries.append((2, (a,), q))
    seen = set()
    for a0 in range(p):
        for a1 in range(1, p):
            rep = _galois_orbit_rep(p, (a0, a1))
            if rep not in seen:
                seen.add(rep)
                q = AffineQuandle(field(p), rep)
                entries.append((3, rep, q))
    for a in range(p * p):
        if a % p not in (0, 1):
            q = AffineQuandle(cyclic(p * p), a)
            entries.append((4, (a,), q))

    catalog = []
    canonize = p * p <= DEFAULT_CANON_LIMIT
    for tag, params, q in sorted(entries, key=lambda e: (e[0], e[1])):
        r = affine_to_rack(q)
        catalog.append(CatalogEntry(tag, params, r,
                                    canonical_form(r) if canonize else None, q))
    r5 = _permutation_rack_table(p * p)
    catalog.append(CatalogEntry(5, (), r5,
                                canonical_form(r5) if canonize else None, None))
    for a in units_not_one:
        r6 = _class6_rack(p, a)
        catalog.append(CatalogEntry(6, (a,), r6,
                                    canonical_form(r6) if canonize else None, None))

    counts = class_counts(p)
    got = [sum(1 for e in catalog if e.class_tag == t) for t in range(1, 7)]
    assert tuple(got) == counts.per_class, "catalog sizes disagree with closed form"
    if canonize:
        canons = [e.canon.table for e in catalog]
        assert len(set(canons)) == len(canons), \
            "catalog entries are not pairwise non-isomorphic"
    return catalog


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class ValuationReport:
    p: int
    entries: tuple          # (class_tag, params, group_order, valuation)
    ok: bool                # every valuation is 2 or 3


def verify_valuation(p: int) -> ValuationReport:
    """p-valuation of the inner group order for every catalog entry."""
    if p > 5:
        raise ResourceLimitError("valuation sweep capped at p <= 5")
    rows = []
    ok = True
    for e in classify_p2(p):
        order = inner_group(e.rack).order
        v = _vp(order, p)
        ok = ok and v in (2, 3)
        rows.append((e.class_tag, e.params, order, v))
    return ValuationReport(p, tuple(rows), ok)


def _translation_set(r: Rack, base: int):
    """The permutations row_x . row_base^-1; for an affine quandle these
    are exactly the translations by the image of 1-g."""
    inv0 = perm.inverse(r.table[base])
    return [perm.compose(row, inv0) for row in r.table]


def _discrete_log(gen: Perm, target: Perm, limit: int) -> int | None:
    cur = perm.identity(len(gen))
    for k in range(limit):
        if cur == target:
            return k
        cur = perm.compose(gen, cur)
    return None


def _cyclic_affine_param(r: Rack) -> int:
    """Recover a from a rack isomorphic to (Z_m, a) with 1-a invertible."""
    m = r.n
    trans = _translation_set(r, 0)
    tau = next(t for t in trans if t != perm.identity(m))
    if perm.perm_order(tau) != m:
        raise RuntimeError("internal error: carrier is not cyclic")
    conj = perm.conjugate(r.table[0], tau)
    a = _discrete_log(tau, conj, m)
    if a is None:
        raise RuntimeError("internal error: conjugation leaves the translations")
    return a


def identify(r: Rack) -> tuple:
    """Locate an indecomposable rack of order p^2 in the catalog.

    Returns (class_tag, params) exactly as produced by classify_p2; the
    result is invariant under relabeling.  Reconstructs the affine
    structure directly: the maps row_x . row_0^-1 form the translation
    group A, and conjugation by row_0 acts on it as the automorphism g.
    """
    n = r.n
    p = math.isqrt(n)
    if p * p != n or not is_prime(p) or p > CLASSIFY_MAX_PRIME:
        raise ValueError(f"order {n} is not p^2 for a supported prime")
    props = validate(r.table)
    if not props.is_rack:
        raise ValueError("not a rack")
    if not props.is_indecomposable:
        raise ValueError("rack is decomposable")

    if not props.is_quandle:
        distinct = len(set(r.table))
        if distinct == 1:
            if perm.cycle_type(r.table[0]) != (n,):
                raise RuntimeError("internal error: constant rack row is not an n-cycle")
            return (5, ())
        if distinct == p:
            alpha = _cyclic_affine_param(image_quandle(r))
            return (6, (alpha,))
        raise RuntimeError(f"internal error: |phi(X)| = {distinct} contradicts "
                           "the order-p^2 classification")

    if not props.is_faithful:
        raise RuntimeError("internal error: unfaithful indecomposable quandle "
                           "of order p^2 contradicts the classification")

    trans = _translation_set(r, 0)
    tset = set(trans)
    assert len(tset) == n, "internal error: translations do not fill the carrier"
    pairs = ((a, b) for a in trans[:3] for b in trans)
    for a, b in pairs:
        assert perm.compose(a, b) == perm.compose(b, a) and \
            perm.compose(a, b) in tset, "internal error: translations not abelian"

    row0 = r.table[0]
    conj = {t: perm.conjugate(row0, t) for t in trans}
    if any(t not in tset for t in conj.values()):
        raise RuntimeError("internal error: conjugation leaves the translations")

    tau = next((t for t in trans if perm.perm_order(t) == n), None)
    if tau is not None:
        alpha = _discrete_log(tau, conj[tau], n)
        assert alpha is not None and alpha % p not in (0, 1)
        return (4, (alpha,))

    # elementary carrier: pick a basis, express the conjugation action
    ident = perm.identity(n)
    tau1 = next(t for t in trans if t != ident)
    powers1 = {}
    cur = ident
    for k in range(p):
        powers1[cur] = k
        cur = perm.compose(tau1, cur)
    tau2 = next(t for t in trans if t not in powers1)
    coord = {}
    cur_i = ident
    for i in range(p):
        cur = cur_i
        for j in range(p):
            coord[cur] = (i, j)
            cur = perm.compose(tau2, cur)
        cur_i = perm.compose(tau1, cur_i)
    a, c = coord[conj[tau1]]
    b, d = coord[conj[tau2]]
    m = ((a, b), (c, d))
    kind, data = matrix_similarity_class(m, p)
    if kind == "scalar":
        return (1, (data, data))
    if kind == "split":
        return (1, data)
    if kind == "jordan":
        return (2, (data,))
    c1, c0 = data
    roots = [(u0, u1) for u0 in range(p) for u1 in range(1, p)
             if _field_poly_zero(p, (u0, u1), c1, c0)]
    assert roots, "internal error: irreducible quadratic with no root in F_p^2"
    return (3, min(roots))


def _field_poly_zero(p: int, u: tuple, c1: int, c0: int) -> bool:
    sq = field_mul(p, u, u)
    return ((sq[0] + c1 * u[0] + c0) % p, (sq[1] + c1 * u[1]) % p) == (0, 0)
