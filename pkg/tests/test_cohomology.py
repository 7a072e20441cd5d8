import random

import pytest

from rackforge.affine import AffineQuandle, affine_to_rack, cyclic
from rackforge.cohomology import (CoeffGroup, Cocycle, coboundary,
                                  coeff_from_name, coeff_group_from_mult,
                                  cohomologous, cyclic_coeff, deform,
                                  enumerate_normalized_quandle_cocycles,
                                  extension_of, h2q_is_trivial, is_cocycle,
                                  is_quandle_cocycle, normalize, sym_coeff,
                                  translation_action, trivial_cocycle)
from rackforge.errors import ResourceLimitError
from rackforge.rack import are_isomorphic, validate

Z32 = affine_to_rack(AffineQuandle(cyclic(3), 2))
Z52 = affine_to_rack(AffineQuandle(cyclic(5), 2))


def constant_cocycle(base, coeff, value):
    return Cocycle(base, coeff, tuple((value,) * base.n for _ in range(base.n)))


# ------------------------------------------------------- coefficients

def test_cyclic_coeff_group():
    g = cyclic_coeff(4)
    assert g.order == 4 and g.identity == 0
    assert g.mul(3, 2) == 1 and g.inv(3) == 1


def test_sym_coeff_group():
    s3 = sym_coeff(3)
    assert s3.order == 6
    assert s3.identity == 0                 # identity permutation sorts first
    assert all(s3.mul(a, s3.inv(a)) == 0 for a in range(6))


def test_coeff_from_name():
    assert coeff_from_name("cyclic:5").order == 5
    assert coeff_from_name("sym:2").order == 2
    with pytest.raises(ValueError):
        coeff_from_name("dihedral:4")
    with pytest.raises(ValueError):
        coeff_from_name("cyclic:x")


def test_bad_mult_tables_rejected():
    with pytest.raises(ValueError, match="associative"):
        coeff_group_from_mult("bad", [[0, 1], [0, 0]])
    with pytest.raises(ValueError, match="identity"):
        coeff_group_from_mult("bad", [[1, 1], [1, 1]])
    with pytest.raises(ValueError, match="inverse"):
        coeff_group_from_mult("bad", [[0, 1], [1, 1]])


def test_translation_action_is_homomorphism():
    g = sym_coeff(3)
    act = translation_action(g)
    from rackforge.perm import compose
    for a in range(6):
        for b in range(6):
            assert compose(act[a], act[b]) == act[g.mul(a, b)]


# ----------------------------------------------------------- cocycles

def test_trivial_and_constant_cocycles():
    h = cyclic_coeff(3)
    triv = trivial_cocycle(Z32, h)
    assert is_cocycle(triv) and is_quandle_cocycle(triv)
    const = constant_cocycle(Z32, h, 1)
    assert is_cocycle(const)
    assert not is_quandle_cocycle(const)


def test_perturbed_cocycle_fails():
    h = cyclic_coeff(2)
    vals = [[0] * 3 for _ in range(3)]
    vals[1][2] = 1
    c = Cocycle(Z32, h, tuple(tuple(r) for r in vals))
    assert not is_cocycle(c)


def test_coboundary_is_quandle_cocycle():
    rng = random.Random(2)
    s3 = sym_coeff(3)
    for _ in range(20):
        gamma = [rng.randrange(6) for _ in range(3)]
        c = coboundary(gamma, Z32, s3)
        assert is_cocycle(c) and is_quandle_cocycle(c)


def test_coboundary_of_identity_is_trivial():
    h = cyclic_coeff(4)
    assert coboundary([0, 0, 0], Z32, h).values == trivial_cocycle(Z32, h).values


def test_left_shifted_gamma_gives_cohomologous_coboundary():
    rng = random.Random(9)
    s3 = sym_coeff(3)
    gamma = [rng.randrange(6) for _ in range(3)]
    for shift in range(6):
        shifted = [s3.mul(shift, g) for g in gamma]
        a = coboundary(gamma, Z32, s3)
        b = coboundary(shifted, Z32, s3)
        w = cohomologous(a, b)
        assert w is not None


# ---------------------------------------------------------- normalize

def test_normalize_trivial_unchanged():
    h = cyclic_coeff(3)
    triv = trivial_cocycle(Z32, h)
    out, gamma = normalize(triv)
    assert out.values == triv.values
    assert gamma == (0, 0, 0)


def test_normalize_random_coboundary_to_identity():
    rng = random.Random(4)
    h = cyclic_coeff(3)
    for _ in range(25):
        c = coboundary([rng.randrange(3) for _ in range(3)], Z32, h)
        out, _ = normalize(c)
        assert out.values == trivial_cocycle(Z32, h).values


def test_normalize_on_z5():
    rng = random.Random(6)
    h = cyclic_coeff(2)
    for _ in range(25):
        c = coboundary([rng.randrange(2) for _ in range(5)], Z52, h)
        out, _ = normalize(c)
        assert all(v == 0 for row in out.values for v in row)


def test_normalize_rejects_q1():
    triv_base = affine_to_rack(AffineQuandle(cyclic(3), 1))
    h = cyclic_coeff(2)
    with pytest.raises(ValueError, match="q = 1"):
        normalize(trivial_cocycle(triv_base, h))


def test_normalize_rejects_non_affine_base():
    from rackforge.rack import Rack
    row = tuple((y + 1) % 3 for y in range(3))
    shift = Rack((row, row, row))
    h = cyclic_coeff(2)
    with pytest.raises(ValueError, match="affine"):
        normalize(trivial_cocycle(shift, h))


# ------------------------------------------------------- cohomologous

def test_cohomologous_self():
    h = cyclic_coeff(3)
    triv = trivial_cocycle(Z32, h)
    gamma = cohomologous(triv, triv)
    assert gamma is not None
    assert deform(triv, gamma).values == triv.values


def test_trivial_vs_constant_not_cohomologous():
    h = cyclic_coeff(3)
    triv = trivial_cocycle(Z32, h)
    const = constant_cocycle(Z32, h, 1)
    assert cohomologous(triv, const) is None


def test_quandle_cocycles_all_cohomologous_s3():
    rng = random.Random(8)
    s3 = sym_coeff(3)
    triv = trivial_cocycle(Z32, s3)
    for _ in range(10):
        c = coboundary([rng.randrange(6) for _ in range(3)], Z32, s3)
        assert cohomologous(triv, c) is not None


# -------------------------------------------------------- enumeration

def test_enumerate_only_trivial():
    for p, q, coeff in [(3, 2, cyclic_coeff(2)), (5, 3, cyclic_coeff(2)),
                        (3, 2, sym_coeff(3))]:
        sols = enumerate_normalized_quandle_cocycles(p, q, coeff)
        assert len(sols) == 1
        assert all(v == coeff.identity for row in sols[0].values for v in row)


def test_enumerate_normalized_shape_identity():
    # beta(s, t) = beta(t+s, t) holds for every normalized solution
    for p, q in [(3, 2), (5, 2)]:
        coeff = cyclic_coeff(2)
        for c in enumerate_normalized_quandle_cocycles(p, q, coeff):
            for s in range(p):
                for t in range(p):
                    assert c.values[s][t] == c.values[(t + s) % p][t]


def test_enumerate_limits():
    with pytest.raises(ResourceLimitError):
        enumerate_normalized_quandle_cocycles(7, 2, cyclic_coeff(2))
    with pytest.raises(ResourceLimitError):
        enumerate_normalized_quandle_cocycles(3, 2, cyclic_coeff(7))
    with pytest.raises(ValueError):
        enumerate_normalized_quandle_cocycles(3, 1, cyclic_coeff(2))


def test_h2q_report():
    rep = h2q_is_trivial(3, 2, cyclic_coeff(4), samples=50)
    assert rep.trivial and rep.cocycle_count == 1


# --------------------------------------------------------- extensions

def test_extension_of_trivial_is_decomposable_product():
    h = cyclic_coeff(3)
    ext = extension_of(trivial_cocycle(Z32, h))
    props = validate(ext.table)
    assert props.is_rack and props.is_quandle and not props.is_indecomposable


def test_cohomologous_cocycles_give_isomorphic_extensions():
    rng = random.Random(12)
    h = cyclic_coeff(3)
    triv = trivial_cocycle(Z32, h)
    for _ in range(5):
        c = coboundary([rng.randrange(3) for _ in range(3)], Z32, h)
        assert cohomologous(triv, c) is not None
        assert are_isomorphic(extension_of(triv), extension_of(c)) is not None


def test_quandle_cocycle_extension_is_quandle():
    rng = random.Random(3)
    s3 = sym_coeff(3)
    c = coboundary([rng.randrange(6) for _ in range(3)], Z32, s3)
    ext = extension_of(c)
    assert validate(ext.table).is_quandle
    assert ext.n == 18                      # action defaults to H on itself
