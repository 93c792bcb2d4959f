import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudocone.equivariant import (ChangeOfGroups, EquivarianceModel, FamilyPseudofunctor, NaiveData, Naivification,
                                    Tower, build_resolutions, check_chofg_associativity, check_compositor,
                                    check_forgetful_pair, check_git_cocycle, check_induction_equivalence,
                                    check_naive, check_naivification, check_quotient_equivalence, check_theta,
                                    check_theta_naturality, deequivariantification, descend, equivariance_theta,
                                    forgetful_pair, random_naive_data)
from pseudocone.errors import (EquivariantificationUndefined, MissingRegularResolution, NotFree,
                               ShapeMismatch)
from pseudocone.fincat import bz2
from pseudocone.gsets import (GroupHom, cyclic, cyclic_inclusion, diagonal_power, equivariant_maps, regular, symmetric3,
                              trivial_gset)
from pseudocone.matrix import MatQ, Matrix
from pseudocone.pseudocone import PCMorphism, validate_family


def _model(order, space_kind, k, twisted=False, seed=0):
    g = cyclic(order)
    space = regular(g, "X") if space_kind == "regular" else trivial_gset(g, ["a", "b"], "2pt")
    return EquivarianceModel(g, space, FamilyPseudofunctor(k, twisted=twisted, seed=seed))


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("space_kind", ["regular", "trivial"])
def test_orbit_counts_match_free_quotient_sizes(order, space_kind):
    model = _model(order, space_kind, bz2())
    xs = len(model.space.carrier)
    # Gamma x X is free, so every orbit has |G| elements
    assert len(model.resl_x.quo["G"]) == order * xs // order
    assert len(model.resl_x.quo["Gc"]) == order * order * xs // order


def test_resolution_without_regular_generator():
    g = cyclic(2)
    r = build_resolutions(g, trivial_gset(g, ["p"]), [("GxG", diagonal_power(g, 2))])
    with pytest.raises(MissingRegularResolution):
        r.regular_name()


def test_non_free_generator_is_rejected():
    g = cyclic(2)
    with pytest.raises(NotFree):
        build_resolutions(g, trivial_gset(g, ["p"]), [("pt", trivial_gset(g, ["q"]))])
    with pytest.raises(NotFree):
        Naivification(g, trivial_gset(g, ["q"]))


@pytest.mark.parametrize("g", [cyclic(2), cyclic(3), symmetric3()])
def test_naivification_maps_are_equivariant_and_natural(g):
    reg = regular(g, "G")
    nv = Naivification(g, reg)
    others = [(Naivification(g, reg), fn) for fn in equivariant_maps(reg, reg)]
    assert check_naivification(nv, others).ok


def test_naive_data_cocycle_is_checked():
    k = MatQ(1)
    g = cyclic(2)
    space = trivial_gset(g, ["p"])
    good = NaiveData({"p": 1}, {("0", "p"): Matrix.identity(1), ("1", "p"): Matrix.scalar(1, -1)})
    assert check_naive(k, space, good).ok
    bad = NaiveData({"p": 1}, {("0", "p"): Matrix.identity(1), ("1", "p"): Matrix.scalar(1, 2)})
    assert "cocycle" in check_naive(k, space, bad).laws()


CASES = [(k, twisted, order, space_kind) for k in ("bz2", "mat") for twisted in (False, True)
         for order in (2, 3) for space_kind in ("regular", "trivial")]


@pytest.mark.parametrize("fibre,twisted,order,space_kind", CASES)
def test_theta_is_an_iso_satisfying_the_cocycle(fibre, twisted, order, space_kind):
    k = bz2() if fibre == "bz2" else MatQ(2)
    model = _model(order, space_kind, k, twisted, seed=3)
    a = descend(model.p_x, random_naive_data(k, model.space, random.Random(order)))
    assert validate_family(model.p_x, a).ok
    theta = equivariance_theta(model, a)
    assert check_theta(model, a, theta).ok
    assert check_git_cocycle(model, a, theta).ok


def test_scaled_theta_breaks_the_cocycle():
    k = MatQ(2)
    model = _model(2, "regular", k, twisted=True)
    a = descend(model.p_x, random_naive_data(k, model.space, random.Random(1)))
    theta = equivariance_theta(model, a)
    scaled = PCMorphism(theta.src, theta.tgt,
                        {n: tuple(m @ Matrix.scalar(m.cols, 2) for m in comps) for n, comps in theta.components.items()})
    assert "git/cocycle" in check_git_cocycle(model, a, scaled).laws()


def test_theta_is_natural_in_scalar_morphisms():
    k = MatQ(2)
    model = _model(3, "regular", k, twisted=True)
    a = descend(model.p_x, random_naive_data(k, model.space, random.Random(5)))
    m = PCMorphism(a, a, {n: tuple(Matrix.scalar(d, 3) for d in dims) for n, dims in a.family.items()})
    assert check_theta_naturality(model, m).ok


@settings(max_examples=15)
@given(st.integers(1, 4), st.booleans(), st.integers(0, 2**32))
def test_git_cocycle_on_random_matrix_data(order, twisted, seed):
    k = MatQ(2)
    model = _model(order, "regular", k, twisted, seed)
    a = descend(model.p_x, random_naive_data(k, model.space, random.Random(seed)))
    theta = equivariance_theta(model, a)
    assert check_theta(model, a, theta).ok
    assert check_git_cocycle(model, a, theta).ok


def test_forget_and_equivariantify_on_trivial_action():
    k = bz2()
    model = _model(2, "trivial", k, twisted=True)
    pair = forgetful_pair(model.p_x)
    power = model.fbar.fibre(tuple(model.space.carrier))
    assert check_forgetful_pair(pair, list(power.objects)).ok


def test_equivariantify_needs_trivial_action():
    model = _model(2, "regular", bz2())
    pair = forgetful_pair(model.p_x)
    with pytest.raises(EquivariantificationUndefined):
        pair.eq(next(iter(model.fbar.fibre(tuple(model.space.carrier)).objects)))


@pytest.fixture(scope="module", params=[False, True], ids=["strict", "twisted"])
def tower(request):
    k = MatQ(2)
    fbar = FamilyPseudofunctor(k, twisted=request.param, seed=7)
    homs = [cyclic_inclusion(a, b) for a, b in ((1, 2), (2, 4), (4, 4))]
    t = Tower(homs, regular(cyclic(4), "X"), fbar)
    a = descend(t.preeq[3], random_naive_data(k, t.top_space, random.Random(2)))
    return t, a


def test_change_of_groups_compositors(tower):
    t, a = tower
    for i, j, l in ((0, 1, 2), (1, 2, 3), (0, 1, 3), (0, 2, 3)):
        x = a if l == 3 else ChangeOfGroups(t, l, 3).obj(a)
        assert check_compositor(t, i, j, l, x).ok, (i, j, l)


def test_change_of_groups_associativity(tower):
    t, a = tower
    assert check_chofg_associativity(t, a).ok


def test_associativity_needs_four_levels():
    fbar = FamilyPseudofunctor(bz2())
    t = Tower([cyclic_inclusion(1, 2), cyclic_inclusion(2, 4)], regular(cyclic(4), "X"), fbar)
    a = descend(t.preeq[2], random_naive_data(bz2(), t.top_space, random.Random(0)))
    with pytest.raises(ShapeMismatch):
        check_chofg_associativity(t, a)


@pytest.mark.parametrize("twisted", [False, True])
def test_deequivariantification_is_an_iso_onto_the_forgetful_image(twisted):
    k = MatQ(2)
    fbar = FamilyPseudofunctor(k, twisted=twisted, seed=1)
    t = Tower([cyclic_inclusion(1, 2)], regular(cyclic(2), "X"), fbar)
    a = descend(t.preeq[1], random_naive_data(k, t.top_space, random.Random(4)))
    collapsed, forgotten, iso = deequivariantification(t, a)
    power = fbar.fibre(tuple(t.spaces[0].carrier))
    assert power.src(iso) == collapsed and power.tgt(iso) == forgotten
    assert power.is_iso(iso)
    assert forgetful_pair(t.preeq[1]).forget(a) == forgotten


def test_deequivariantification_needs_trivial_bottom():
    t = Tower([cyclic_inclusion(2, 4)], regular(cyclic(4), "X"), FamilyPseudofunctor(bz2()))
    with pytest.raises(ShapeMismatch):
        deequivariantification(t, None)


def test_induction_equivalence():
    rep = check_induction_equivalence(cyclic_inclusion(2, 4), trivial_gset(cyclic(2), ["pt"]), bz2())
    assert rep.ok, rep.laws()
    # one object per homomorphism Z/2 -> Aut(*) = Z/2, each with Z/2 worth of endomorphisms
    assert rep.sizes["target_objects"] == 2
    assert rep.sizes["target_morphisms"] == 4


def test_induction_needs_an_inclusion():
    with pytest.raises(ShapeMismatch):
        check_induction_equivalence(GroupHom(cyclic(2), cyclic(1), {"0": "0", "1": "0"}),
                                    trivial_gset(cyclic(2), ["pt"]), bz2())


def test_quotient_equivalence():
    rep = check_quotient_equivalence(cyclic(4), ["0", "2"], regular(cyclic(4), "X"), bz2())
    assert rep.ok, rep.laws()
    assert rep.sizes["source_objects"] == rep.sizes["target_objects"]


def test_quotient_needs_a_free_action_of_the_normal_subgroup():
    g = cyclic(4)
    with pytest.raises(NotFree):
        check_quotient_equivalence(g, ["0", "2"], trivial_gset(g, ["p"]), bz2())
