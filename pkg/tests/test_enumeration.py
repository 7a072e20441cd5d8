import math

import pytest

from rackforge import perm
from rackforge.classify import classify_p2
from rackforge.enumeration import (enumerate_all_naive, enumerate_connected,
                                   perms_of_cycle_type, seed_representatives)
from rackforge.errors import ResourceLimitError
from rackforge.rack import canonical_form, validate


def test_perms_of_cycle_type_counts():
    # |class| = n! / prod(l^m_l * m_l!)
    def class_size(n, parts):
        size = math.factorial(n)
        for length in set(parts):
            m = parts.count(length)
            size //= length ** m * math.factorial(m)
        return size

    for n, parts in [(4, (2, 1, 1)), (4, (4,)), (5, (3, 2)), (6, (2, 2, 1, 1)),
                     (9, (6, 2, 1))]:
        got = perms_of_cycle_type(n, parts)
        assert len(got) == class_size(n, parts)
        assert len(set(got)) == len(got)
        assert all(perm.cycle_type(p) == tuple(sorted(parts, reverse=True))
                   for p in got[:50])


def test_seed_representatives_counts():
    # one per partition for quandles; partition plus 0-cycle length for racks
    assert len(seed_representatives(4, "quandle")) == 3     # partitions of 3
    assert len(seed_representatives(9, "quandle")) == 22    # partitions of 8
    seeds = seed_representatives(4, "rack")
    assert len(seeds) == len(set(seeds))
    for s in seed_representatives(9, "quandle"):
        assert s[0] == 0


def test_connected_counts_small():
    assert enumerate_connected(2, "rack").count == 1
    assert enumerate_connected(2, "quandle").count == 0
    assert enumerate_connected(3, "quandle").count == 1
    assert enumerate_connected(4, "quandle").count == 1
    assert enumerate_connected(4, "rack").count == 2


def test_connected_order2_rack_is_shift():
    r = enumerate_connected(2, "rack").classes[0]
    assert r.table == ((1, 0), (1, 0))


def test_connected_quandle3_is_z32():
    got = enumerate_connected(3, "quandle").classes[0]
    z32 = canonical_form(
        __import__("rackforge").rack.Rack(((0, 2, 1), (2, 1, 0), (1, 0, 2))))
    assert got.table == z32.table


def test_connected_quandle4_matches_catalog():
    got = enumerate_connected(4, "quandle")
    assert got.count == 1
    catalog = classify_p2(2)
    field_entry = next(e for e in catalog if e.class_tag == 3)
    assert got.classes[0].table == field_entry.canon.table


def test_classes_are_connected_racks():
    for res in (enumerate_connected(5, "rack"), enumerate_connected(6, "quandle")):
        for r in res.classes:
            props = validate(r.table)
            assert props.is_rack and props.is_indecomposable
            if res.kind == "quandle":
                assert props.is_quandle
        assert res.count == len(set(res.classes))


def test_naive_matches_connected():
    for n in (2, 3, 4):
        for kind in ("rack", "quandle"):
            naive = enumerate_all_naive(n, kind, connected_only=True)
            fast = enumerate_connected(n, kind)
            assert [r.table for r in naive.classes] == \
                [r.table for r in fast.classes]


def test_naive_all_racks_includes_disconnected():
    res = enumerate_all_naive(3, "quandle", connected_only=False)
    connected = enumerate_all_naive(3, "quandle", connected_only=True)
    assert res.count > connected.count
    trivial = tuple(tuple(range(3)) for _ in range(3))
    assert trivial in {r.table for r in res.classes}


def test_parallel_result_is_deterministic():
    base = enumerate_connected(5, "rack")
    par = enumerate_connected(5, "rack", jobs=2)
    assert [r.table for r in base.classes] == [r.table for r in par.classes]


def test_resource_limits():
    with pytest.raises(ResourceLimitError):
        enumerate_connected(10, "rack")
    with pytest.raises(ResourceLimitError):
        enumerate_connected(1, "rack")
    with pytest.raises(ResourceLimitError):
        enumerate_all_naive(5, "rack")
    with pytest.raises(ValueError):
        enumerate_connected(4, "biquandle")
