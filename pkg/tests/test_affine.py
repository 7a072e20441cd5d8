import math

import pytest

from rackforge.affine import (AffineQuandle, affine_is_faithful,
                              affine_is_indecomposable,
                              affine_pairs_isomorphic, affine_to_rack, cyclic,
                              elementary, field, field_mul, field_pow,
                              frobenius, irreducible_quadratic, mat_apply,
                              mat_mul, matrix_similarity_class)
from rackforge.rack import (are_isomorphic, is_faithful, is_indecomposable,
                            relabel, validate)


def test_cyclic_three_two_table():
    r = affine_to_rack(AffineQuandle(cyclic(3), 2))
    assert r.table == ((0, 2, 1), (2, 1, 0), (1, 0, 2))


def test_g_one_gives_trivial_quandle():
    for n in (2, 5, 6):
        r = affine_to_rack(AffineQuandle(cyclic(n), 1))
        assert all(r.table[x] == tuple(range(n)) for x in range(n))


def test_elementary_jordan_matches_componentwise_formula():
    p, a = 3, 2
    r = affine_to_rack(AffineQuandle(elementary(p), ((a, 0), (1, a))))
    for x in range(9):
        x1, x2 = divmod(x, p)
        for y in range(9):
            y1, y2 = divmod(y, p)
            first = ((1 - a) * x1 + a * y1) % p
            second = ((1 - a) * x2 + a * y2 + y1 - x1) % p
            assert r.table[x][y] == first * p + second


def test_all_affine_tables_are_quandles():
    samples = [AffineQuandle(cyclic(7), 3),
               AffineQuandle(elementary(3), ((1, 1), (2, 0))),
               AffineQuandle(field(3), (1, 2))]
    for q in samples:
        props = validate(affine_to_rack(q).table)
        assert props.is_quandle


# ------------------------------------------------ irreducible quadratics

def test_irreducible_quadratic_choices():
    # least (m1, m0) with t^2 + m1 t + m0 irreducible
    assert irreducible_quadratic(2) == (1, 1)    # t^2 + t + 1
    assert irreducible_quadratic(3) == (0, 1)    # t^2 + 1
    assert irreducible_quadratic(5) == (0, 2)    # t^2 + 2
    assert irreducible_quadratic(7) == (0, 1)
    assert irreducible_quadratic(11) == (0, 1)
    assert irreducible_quadratic(13) == (0, 2)


def test_field_arithmetic():
    p = 3
    # t * t = -1 = 2 in Z_3[t]/(t^2+1)
    assert field_mul(p, (0, 1), (0, 1)) == (2, 0)
    nonzero = [(a, b) for a in range(p) for b in range(p) if (a, b) != (0, 0)]
    # multiplicative group has order p^2 - 1
    assert all(field_pow(p, u, p * p - 1) == (1, 0) for u in nonzero)
    assert frobenius(p, (1, 1)) == field_pow(p, (1, 1), 3)


# ----------------------------------------------------------- criteria

def test_criteria_examples():
    q = AffineQuandle(cyclic(9), 2)
    assert affine_is_indecomposable(q) and affine_is_faithful(q)
    q = AffineQuandle(cyclic(9), 4)     # 1-g = -3 is a zero divisor mod 9
    assert not affine_is_indecomposable(q) and not affine_is_faithful(q)
    assert len({(1 - 4) * x % 9 for x in range(9)}) == 3
    for n in (2, 4, 9):
        q = AffineQuandle(cyclic(n), 1)
        assert not affine_is_indecomposable(q)


def test_criteria_agree_with_rack_computations():
    # cyclic carriers up to 16 plus the order-4 and order-9 matrix carriers
    qs = []
    for n in range(2, 17):
        qs += [AffineQuandle(cyclic(n), g) for g in range(1, n)
               if math.gcd(g, n) == 1]
    for p in (2, 3):
        for code in range(p ** 4):
            a, rest = code % p, code // p
            b, rest = rest % p, rest // p
            c, d = rest % p, rest // p
            m = ((a, b), (c, d))
            if (a * d - b * c) % p:
                qs.append(AffineQuandle(elementary(p), m))
        qs += [AffineQuandle(field(p), (a, b)) for a in range(p)
               for b in range(p) if (a, b) != (0, 0)]
    for q in qs:
        r = affine_to_rack(q)
        assert affine_is_indecomposable(q) == is_indecomposable(r)
        assert affine_is_faithful(q) == is_faithful(r)


# ------------------------------------------------------ similarity class

def test_matrix_similarity_classes():
    p = 5
    assert matrix_similarity_class(((2, 0), (0, 2)), p) == ("scalar", 2)
    assert matrix_similarity_class(((2, 0), (0, 3)), p) == ("split", (2, 3))
    assert matrix_similarity_class(((3, 0), (1, 3)), p) == ("jordan", 3)
    kind, _ = matrix_similarity_class(((0, 4), (1, 0)), p)  # t^2 - 4 = (t-2)(t+2)
    assert kind == "split"
    kind, data = matrix_similarity_class(((0, 3), (1, 0)), p)  # t^2 - 3 irreducible
    assert kind == "irreducible" and data == (0, 2)


# ------------------------------------------------------ pair isomorphism

def test_pairs_diag_swap():
    a = AffineQuandle(elementary(5), ((2, 0), (0, 3)))
    b = AffineQuandle(elementary(5), ((3, 0), (0, 2)))
    t = affine_pairs_isomorphic(a, b)
    assert t is not None
    assert mat_mul(t, a.g_matrix(), 5) == mat_mul(b.g_matrix(), t, 5)


def test_pairs_cyclic_units_differ():
    a = AffineQuandle(cyclic(9), 2)
    b = AffineQuandle(cyclic(9), 5)
    assert affine_pairs_isomorphic(a, b) is None
    # oracle: no unit T with T g = h T, i.e. units give g = h only
    assert all((u * 2 - 5 * u) % 9 != 0 for u in range(1, 9) if math.gcd(u, 9) == 1)


def test_pairs_self():
    a = AffineQuandle(cyclic(9), 2)
    assert affine_pairs_isomorphic(a, a) == 1
    b = AffineQuandle(elementary(3), ((2, 0), (1, 2)))
    t = affine_pairs_isomorphic(b, b)
    assert mat_mul(t, b.g_matrix(), 3) == mat_mul(b.g_matrix(), t, 3)


def test_pairs_require_indecomposable():
    with pytest.raises(ValueError):
        affine_pairs_isomorphic(AffineQuandle(cyclic(4), 3),
                                AffineQuandle(cyclic(4), 3))


def test_pairs_cross_carrier():
    a = AffineQuandle(cyclic(9), 2)
    b = AffineQuandle(elementary(3), ((2, 0), (1, 2)))
    assert affine_pairs_isomorphic(a, b) is None


def test_pairs_witness_agrees_with_rack_isomorphism():
    a = AffineQuandle(elementary(3), ((2, 0), (0, 2)))
    b = AffineQuandle(elementary(3), ((2, 1), (0, 2)))
    t = affine_pairs_isomorphic(a, b)
    ra, rb = affine_to_rack(a), affine_to_rack(b)
    if t is None:
        assert are_isomorphic(ra, rb) is None
    else:
        # transport the matrix witness to a point permutation
        p = 3
        point = tuple(mat_apply(t, (x // p, x % p), p)[0] * p +
                      mat_apply(t, (x // p, x % p), p)[1] for x in range(9))
        assert relabel(ra, point).table == rb.table


def test_field_matches_elementary_matrix_form():
    # multiplication by a field generator equals its matrix on coordinates
    for p in (2, 3):
        alpha = (0, 1)
        qf = AffineQuandle(field(p), alpha)
        qe = AffineQuandle(elementary(p), qf.g_matrix())
        rf_, re_ = affine_to_rack(qf), affine_to_rack(qe)
        assert rf_.table == re_.table
        assert are_isomorphic(rf_, re_) is not None


def test_invalid_automorphisms_rejected():
    with pytest.raises(ValueError):
        AffineQuandle(cyclic(9), 3)          # not a unit
    with pytest.raises(ValueError):
        AffineQuandle(elementary(3), ((1, 1), (2, 2)))   # det 0
    with pytest.raises(ValueError):
        AffineQuandle(field(3), (0, 0))
