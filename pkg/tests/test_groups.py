import math
import random

import numpy as np
import pytest

from corpus import brute_sp_order, corpus, cyc, symmetric
from mcgshadow import _pykernels, groups, kernels
from mcgshadow.groups import (
    PermGroup,
    PreconditionError,
    closure_order,
    contains,
    extension_criterion,
    group_order,
    matrix_group_action,
    sp_order,
)
from mcgshadow.perm import Permutation
from mcgshadow.surface import puncture_involutions
from mcgshadow.symplectic import ConfigurationError, DimensionError, SympMatrix, transvection, x, y


def test_permutation_algebra():
    p = Permutation.parse(5, "(1,2,3)")
    q = Permutation.parse(5, "(3,4)")
    assert (p * q)(3) == p(q(3)) == 4
    assert (p * p.inverse()).is_identity()
    assert p ** 3 == Permutation.identity(5)
    assert Permutation.parse(9, "(1,8)(2,7)").cycle_string() == "(1,8)(2,7)"
    assert Permutation.identity(3).cycle_string() == "()"
    with pytest.raises(ValueError):
        Permutation([1, 1, 2])


def test_group_order_examples():
    assert group_order(PermGroup([cyc(5, (1, 2)), cyc(5, (1, 2, 3, 4, 5))])) == 120
    pi = puncture_involutions(5)
    assert group_order(PermGroup([pi.r1, pi.r2, pi.r3])) == 120
    assert group_order(PermGroup([pi.r1, pi.r2])) == 8


def test_contains_examples():
    g = PermGroup([cyc(5, (1, 2, 3, 4, 5))])
    assert contains(g, Permutation.identity(5))
    assert not contains(g, cyc(5, (1, 2, 3)))
    assert contains(g, cyc(5, (1, 2, 3, 4, 5)))
    with pytest.raises(DimensionError):
        g.contains(Permutation.identity(4))


@pytest.mark.parametrize("name,gens", corpus(), ids=[n for n, _ in corpus()])
def test_order_matches_closure(name, gens):
    g = PermGroup(gens)
    want = closure_order(gens)
    assert want <= 5000
    assert g.order() == want
    for s in gens:
        assert g.contains(s)


@pytest.mark.parametrize("name,gens", corpus()[::3])
def test_orbit_stabiliser(name, gens):
    g = PermGroup(gens)
    orders = g.level_orders()
    for i, size in enumerate(g.orbit_sizes()):
        assert size * orders[i + 1] == orders[i]


def test_sp_order_brute_force():
    assert sp_order(1, 2) == brute_sp_order(1, 2) == 6
    assert sp_order(1, 3) == brute_sp_order(1, 3) == 24
    assert sp_order(2, 2) == brute_sp_order(2, 2) == 720


def test_sp_order_bad_prime():
    with pytest.raises(ConfigurationError):
        sp_order(2, 4)


def test_matrix_action_g1():
    t = transvection(x(1, 1))
    act = matrix_group_action([t], [None], 2, 0)
    assert act.degree == 3
    perm = act.generators[0]
    assert perm[act.label([1, 0])] == act.label([1, 0])
    assert perm[act.label([0, 1])] == act.label([1, 1])
    assert perm[act.label([1, 1])] == act.label([0, 1])


def test_matrix_action_identity_and_punctures():
    act = matrix_group_action([SympMatrix.identity(2)], [Permutation.identity(3)], 3, 3)
    assert (act.generators[0] == np.arange(act.degree)).all()
    act0 = matrix_group_action([SympMatrix.identity(2)], [None], 2, 0)
    assert act0.degree == act0.vector_points == 15


def test_matrix_action_is_homomorphism():
    rng = random.Random(5)
    from mcgshadow.surface import random_symplectic

    for _ in range(10):
        a = random_symplectic(2, rng)
        b = random_symplectic(2, rng)
        act = matrix_group_action([a, b, a @ b], [None] * 3, 3, 0)
        ga, gb, gab = act.generators
        assert (kernels.compose(ga, gb) == gab).all()


def test_matrix_action_limits():
    with pytest.raises(ConfigurationError):
        matrix_group_action([SympMatrix.identity(9)], [None], 3, 0)
    with pytest.raises(ConfigurationError):
        matrix_group_action([SympMatrix.identity(1)], [None], 4, 0)


def lickorish(g):
    vecs = [x(g, i) for i in range(1, g + 1)] + [y(g, i) for i in range(1, g + 1)]
    return vecs + [x(g, i) - x(g, i + 1) for i in range(1, g)]


def test_sp_generation_by_twists():
    for g in (2, 3):
        vecs = lickorish(g)
        mats = [transvection(v) for v in vecs]
        act = matrix_group_action(mats, [None] * len(mats), 2, 0)
        assert PermGroup(act.generators).order() == sp_order(g, 2)


def test_bound_and_verified_agree():
    g = 3
    vecs = lickorish(g)
    mats = [transvection(v) for v in vecs]
    act = matrix_group_action(mats, [None] * len(mats), 2, 0)
    bounded = act.group(order_bound=sp_order(g, 2))
    plain = act.group()
    assert bounded.order() == plain.order() == sp_order(g, 2)
    assert plain.stats["phase"] == "verified"
    assert bounded.stats["phase"] == "bound"


def test_chain_image_is_symmetric():
    # a chain of 2g+1 twists only reaches Sym_{2g+2} inside Sp(2g, 2)
    g = 3
    vecs = [x(g, 1), y(g, 1), x(g, 1) - x(g, 2), y(g, 2), x(g, 2) - x(g, 3), y(g, 3), x(g, 3)]
    mats = [transvection(v) for v in vecs]
    act = matrix_group_action(mats, [None] * len(mats), 2, 0)
    assert PermGroup(act.generators).order() == math.factorial(8)


def test_order_above_bound_is_an_error():
    with pytest.raises(PreconditionError):
        PermGroup([cyc(6, (1, 2)), cyc(6, (1, 2, 3, 4, 5, 6))], order_bound=7).order()


def test_budget_exceeded():
    g = PermGroup(symmetric(6), budget=1, patience=0)
    with pytest.raises(groups.BudgetExceeded):
        g.order()


def test_extension_criterion_examples():
    s3 = PermGroup(symmetric(3))
    n = [cyc(3, (1, 2, 3))]
    assert extension_criterion(s3, n, [cyc(3, (1, 2, 3)), cyc(3, (1, 2))], 2)
    assert not extension_criterion(s3, n, [cyc(3, (1, 2))], 2)
    assert extension_criterion(s3, [Permutation.identity(3)], symmetric(3), 6)
    with pytest.raises(PreconditionError):
        extension_criterion(PermGroup([cyc(3, (1, 2, 3))]), n, [cyc(3, (1, 2))], 1)


def test_kernel_backends_agree():
    rng = np.random.default_rng(0)
    n = 200
    gens = np.stack([rng.permutation(n).astype(np.int32) for _ in range(3)])
    for mod in (kernels, _pykernels):
        assert (mod.compose(gens[0], gens[1]) == gens[0][gens[1]]).all()
        assert mod.is_identity(mod.compose(gens[0], mod.invert(gens[0])))
    o1, l1 = kernels.schreier_tree(0, gens)
    o2, l2 = _pykernels.schreier_tree(0, gens)
    assert list(o1) == list(o2) and list(l1) == list(l2)
    inv = np.stack([_pykernels.invert(g) for g in gens])
    h = _pykernels.compose(gens[0], gens[2])
    assert (kernels.strip(h, 0, l1, inv) == _pykernels.strip(h, 0, l2, inv)).all()
    assert (kernels.orbit_partition(gens, n) == _pykernels.orbit_partition(gens, n)).all()


def test_pure_fallback_order(monkeypatch):
    monkeypatch.setattr(groups, "kernels", _pykernels)
    assert PermGroup(symmetric(6)).order() == 720


def test_closure_order_limit():
    with pytest.raises(RuntimeError):
        closure_order(symmetric(7), limit=100)
    assert math.factorial(4) == closure_order(symmetric(4))
