"""Permutations of {0..n-1} and small permutation groups via explicit closure.

A permutation is a plain tuple of images: p[i] is the image of i.
Groups are kept as fully materialized, lexicographically sorted element
sets; everything in this package is small enough for that (see closure's
cap).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ResourceLimitError

Perm = tuple

DEFAULT_CLOSURE_CAP = 10**6


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_permutation(seq: Sequence[int]) -> bool:
    return sorted(seq) == list(range(len(seq)))


def compose(p: Perm, q: Perm) -> Perm:
    """(p . q)(i) = p(q(i)); q is applied first."""
    return tuple(p[j] for j in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def conjugate(g: Perm, h: Perm) -> Perm:
    """g . h . g^-1."""
    out = [0] * len(g)
    for i, j in enumerate(h):
        out[g[i]] = g[j]
    return tuple(out)


def cycle_type(p: Perm) -> tuple:
    """Cycle lengths of p, longest first."""
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        m, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            m += 1
        lengths.append(m)
    return tuple(sorted(lengths, reverse=True))


def perm_order(p: Perm) -> int:
    return math.lcm(*cycle_type(p)) if p else 1


@dataclass(frozen=True)
class PermGroup:
    """A permutation group given by generators and a closed element set.

    `elements` always contains the identity, is closed under composition
    and inversion, and is sorted lexicographically so that downstream
    enumerations are reproducible.
    """

    degree: int
    generators: tuple
    elements: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p) -> bool:
        return tuple(p) in set(self.elements)


def closure(generators: Iterable[Perm], degree: int | None = None,
            cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """Close a generating set under composition (breadth-first).

    `degree` is required when `generators` is empty.  Raises
    ResourceLimitError if the closure grows past `cap` elements.
    """
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("degree is required for an empty generating set")
        degree = len(gens[0])
    for g in gens:
        if len(g) != degree:
            raise ValueError(f"mixed permutation degrees: {len(g)} != {degree}")
        if not is_permutation(g):
            raise ValueError(f"not a permutation: {g!r}")

    unique_gens = sorted(set(gens))
    elements = {identity(degree)}
    frontier = [identity(degree)]
    while frontier:
        new = []
        for h in frontier:
            for g in unique_gens:
                c = compose(g, h)
                if c not in elements:
                    if len(elements) >= cap:
                        raise ResourceLimitError(
                            f"group closure exceeded cap of {cap} elements")
                    elements.add(c)
                    new.append(c)
        frontier = new
    return PermGroup(degree, tuple(gens), tuple(sorted(elements)))


def orbits(group: PermGroup) -> tuple:
    """Orbit partition of {0..degree-1}, orbits sorted by least element."""
    seen = set()
    parts = []
    for start in range(group.degree):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for g in group.generators:
                y = g[x]
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        parts.append(tuple(sorted(comp)))
    return tuple(parts)


def is_transitive(group: PermGroup) -> bool:
    return len(orbits(group)) == 1
