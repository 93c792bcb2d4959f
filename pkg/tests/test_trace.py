import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudocone.equivariant import EquivarianceModel, FamilyPseudofunctor, NaiveData, descend, random_naive_data
from pseudocone.errors import NotFixed, NotInjective, ShapeMismatch, UnknownPoint
from pseudocone.gsets import cyclic, regular, trivial_gset
from pseudocone.matrix import MatQ, Matrix
from pseudocone.pseudocone import validate_family
from pseudocone.trace import (check_additivity, check_dualizable, check_pullback, check_pushforward, conjugate,
                              direct_sum_objects, equivariant_trace, pushforward_along_injection,
                              random_additivity_trials, random_isomorphism, regular_model, sign_instance, stalk,
                              trace_table)


def test_sign_representation_has_trace_minus_one():
    model, a = sign_instance()
    assert trace_table(model, a) == {("0", "p"): 1, ("1", "p"): -1}


def test_swap_representation_has_trace_zero():
    g = cyclic(2)
    model = EquivarianceModel(g, trivial_gset(g, ["q"]), FamilyPseudofunctor(MatQ(2), twisted=True, seed=4))
    swap = Matrix.from_rows([[0, 1], [1, 0]])
    a = descend(model.p_x, NaiveData({"q": 2}, {("0", "q"): Matrix.identity(2), ("1", "q"): swap}))
    assert trace_table(model, a) == {("0", "q"): 2, ("1", "q"): 0}


@pytest.mark.parametrize("twisted", [False, True])
def test_free_orbit_only_has_identity_traces(twisted):
    model = regular_model(3, MatQ(2), twisted)
    a = descend(model.p_x, random_naive_data(model.fbar.k, model.space, random.Random(0)))
    table = trace_table(model, a)
    assert set(table) == {("0", x) for x in model.space.carrier}
    assert all(table[("0", x)] == stalk(model, a, x) for x in model.space.carrier)


def test_trace_arguments_are_checked():
    model, a = sign_instance()
    with pytest.raises(UnknownPoint):
        equivariant_trace(model, a, "1", "nowhere")
    with pytest.raises(UnknownPoint):
        equivariant_trace(model, a, "7", "p")
    reg = regular_model(2, MatQ(1))
    b = descend(reg.p_x, random_naive_data(reg.fbar.k, reg.space, random.Random(0), 1))
    with pytest.raises(NotFixed):
        equivariant_trace(reg, b, "1", "0")


def test_matrix_objects_are_dualizable():
    assert check_dualizable(MatQ(3)).ok


def _naive_trivial(rng, group, points, max_dim):
    """Random actions on a trivial G-set: a cyclic group acts through a generator of finite order."""
    n = group.order()
    values, rho = {}, {}
    for x in points:
        d = rng.randint(1, max_dim)
        perm = list(range(d))
        rng.shuffle(perm)
        # a permutation matrix whose order divides n keeps the cocycle exact; fall back to the identity
        gen = Matrix(d, d, [Fraction(int(perm[i] == j)) for i in range(d) for j in range(d)])
        power = Matrix.identity(d)
        for _ in range(n):
            power = power @ gen
        if power != Matrix.identity(d):
            gen = Matrix.identity(d)
        values[x] = d
        cur = Matrix.identity(d)
        for k in range(n):
            rho[(str(k), x)] = cur
            cur = cur @ gen
    return NaiveData(values, rho)


@settings(max_examples=25)
@given(st.integers(1, 4), st.booleans(), st.integers(0, 2**32))
def test_trace_on_trivial_action_is_the_trace_of_the_action_matrix(order, twisted, seed):
    rng = random.Random(seed)
    g = cyclic(order)
    space = trivial_gset(g, ["p", "q"])
    model = EquivarianceModel(g, space, FamilyPseudofunctor(MatQ(3), twisted=twisted, seed=seed))
    data = _naive_trivial(rng, g, space.carrier, 3)
    a = descend(model.p_x, data)
    assert validate_family(model.p_x, a).ok
    for (h, x), t in trace_table(model, a).items():
        assert t == data.rho[(h, x)].trace()


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_trace_is_invariant_under_isomorphism(seed):
    rng = random.Random(seed)
    g = cyclic(2)
    model = EquivarianceModel(g, trivial_gset(g, ["p"]), FamilyPseudofunctor(MatQ(2), twisted=True, seed=seed))
    a = descend(model.p_x, random_naive_data(model.fbar.k, model.space, rng, 2))
    b = conjugate(model.p_x, a, random_isomorphism(model.p_x, a, rng))
    assert validate_family(model.p_x, b).ok
    assert trace_table(model, a) == trace_table(model, b)


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_trace_is_additive(seed):
    count, failures = random_additivity_trials(3, seed)
    assert count == 3 and failures == []


def test_direct_sum_traces_add_on_sign_and_trivial():
    model, a = sign_instance()
    big = EquivarianceModel(model.group, model.space, FamilyPseudofunctor(MatQ(2)))
    a2 = descend(big.p_x, NaiveData({"p": 1}, {("0", "p"): Matrix.identity(1), ("1", "p"): Matrix.scalar(1, -1)}))
    one = descend(big.p_x, NaiveData({"p": 1}, {("0", "p"): Matrix.identity(1), ("1", "p"): Matrix.identity(1)}))
    assert check_additivity(big, a2, one).ok
    assert trace_table(big, direct_sum_objects(a2, one))[("1", "p")] == 0


@pytest.mark.parametrize("twisted", [False, True])
def test_pushforward_to_a_larger_trivial_set(twisted):
    g = cyclic(2)
    fbar = FamilyPseudofunctor(MatQ(3), twisted=twisted, seed=2)
    one_pt = EquivarianceModel(g, trivial_gset(g, ["p"]), fbar)
    two_pt = EquivarianceModel(g, trivial_gset(g, ["p", "q"]), fbar)
    data = NaiveData({"p": 3}, {("0", "p"): Matrix.identity(3),
                                ("1", "p"): Matrix.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]])})
    a = descend(one_pt.p_x, data)
    b = pushforward_along_injection(one_pt, two_pt, {"p": "q"}, a)
    assert (stalk(two_pt, b, "p"), stalk(two_pt, b, "q")) == (0, 3)
    assert check_pushforward(one_pt, two_pt, {"p": "q"}, a).ok
    assert trace_table(two_pt, b)[("1", "q")] == 1


def test_pushforward_needs_an_injection():
    g = cyclic(1)
    fbar = FamilyPseudofunctor(MatQ(2))
    two = EquivarianceModel(g, trivial_gset(g, ["p", "q"]), fbar)
    one = EquivarianceModel(g, trivial_gset(g, ["r"]), fbar)
    a = descend(two.p_x, random_naive_data(fbar.k, two.space, random.Random(0), 1))
    with pytest.raises(NotInjective):
        pushforward_along_injection(two, one, {"p": "r", "q": "r"}, a)


def test_pushforward_needs_an_equivariant_map():
    g = cyclic(2)
    fbar = FamilyPseudofunctor(MatQ(2))
    pt = EquivarianceModel(g, trivial_gset(g, ["p"]), fbar)
    reg = EquivarianceModel(g, regular(g, "X"), fbar)
    a = descend(pt.p_x, random_naive_data(fbar.k, pt.space, random.Random(0), 1))
    with pytest.raises(ShapeMismatch):
        pushforward_along_injection(pt, reg, {"p": "0"}, a)


@pytest.mark.parametrize("twisted", [False, True])
def test_pullback_along_a_constant_map(twisted):
    g = cyclic(2)
    fbar = FamilyPseudofunctor(MatQ(3), twisted=twisted, seed=9)
    reg = EquivarianceModel(g, regular(g, "X"), fbar)
    two = EquivarianceModel(g, trivial_gset(g, ["p", "q"]), fbar)
    a = descend(two.p_x, random_naive_data(fbar.k, two.space, random.Random(3), 3))
    assert check_pullback(reg, two, {"0": "q", "1": "q"}, a).ok
    assert check_pullback(two, two, {"p": "q", "q": "p"}, a).ok
