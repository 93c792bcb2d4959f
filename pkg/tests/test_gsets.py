import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudocone.errors import MalformedTable, NotFree, NotNormal
from pseudocone.gsets import (FINSETS, FinMap, GroupHom, Induced, check_group, check_gset, conjugation_gset, cyclic,
                              cyclic_inclusion, diagonal_power, equivariant_maps, is_equivariant, is_normal,
                              quotient_group, regular, restrict, subgroup, subgroup_elements, symmetric3,
                              trivial_gset)


@pytest.mark.parametrize("g", [cyclic(1), cyclic(2), cyclic(4), symmetric3()])
def test_groups_satisfy_axioms(g):
    assert check_group(g) == []
    assert check_gset(regular(g)) == []
    assert check_gset(conjugation_gset(g)) == []


def test_s3_subgroup_of_order_two_is_not_normal():
    s3 = symmetric3()
    h = ["012", "102"]
    assert subgroup_elements(s3, ["102"]) == h
    assert not is_normal(s3, h)
    with pytest.raises(NotNormal):
        quotient_group(s3, h)


def test_quotient_of_z4_by_z2():
    g = cyclic(4)
    q, hom = quotient_group(g, ["0", "2"])
    assert q.order() == 2 and check_group(q) == []
    assert hom("1") == hom("3") != hom("0")


def test_alternating_subgroup_is_normal():
    s3 = symmetric3()
    a3 = subgroup_elements(s3, ["120"])
    assert len(a3) == 3 and is_normal(s3, a3)
    q, _ = quotient_group(s3, a3)
    assert q.order() == 2


def test_cyclic_inclusion_requires_divisibility():
    assert cyclic_inclusion(2, 4)("1") == "2"
    with pytest.raises(MalformedTable):
        cyclic_inclusion(3, 4)


def test_non_homomorphism_rejected():
    g = cyclic(2)
    with pytest.raises(MalformedTable):
        GroupHom(g, g, {"0": "1", "1": "0"})


def test_equivariant_maps_need_free_source():
    g = cyclic(2)
    with pytest.raises(NotFree):
        equivariant_maps(trivial_gset(g, ["p"]), regular(g))


def test_equivariant_self_maps_of_regular_z2():
    g = cyclic(2)
    maps = equivariant_maps(regular(g), regular(g))
    assert len(maps) == 2
    assert all(is_equivariant(regular(g), regular(g), m) for m in maps)


def test_orbit_counts_of_generators():
    g = cyclic(2)
    x = trivial_gset(g, ["p"])
    assert len(regular(g).orbit_reps()) * len(x.carrier) == 1
    assert len(diagonal_power(g, 2).orbit_reps()) * len(x.carrier) == 2


def test_induction_of_regular_is_regular():
    inc = cyclic_inclusion(2, 4)
    y = Induced(inc, regular(inc.src))
    assert len(y.carrier) == 4 and y.is_free()
    assert check_gset(y) == []


@given(st.integers(1, 6), st.integers(1, 6))
def test_induced_space_size_is_index_times_points(m, k):
    n = m * k
    inc = cyclic_inclusion(m, n)
    x = trivial_gset(inc.src, ["p", "q"])
    y = Induced(inc, x)
    assert len(y.carrier) == 2 * k
    assert check_gset(y) == []


def test_restriction_along_hom():
    inc = cyclic_inclusion(2, 4)
    r = restrict(inc, regular(cyclic(4)))
    assert r.is_free() and len(r.orbit_reps()) == 2


def test_subgroup_inclusion_and_translator():
    g = cyclic(6)
    h, inc = subgroup(g, ["0", "3"])
    assert inc.is_injective() and h.order() == 2
    assert regular(g).translator("1", "4") == "3"


def test_finite_set_maps():
    u = FinMap(("a", "b"), ("x",), {"a": "x", "b": "x"})
    v = FinMap(("x",), ("y", "z"), {"x": "z"})
    w = FINSETS.compose(v, u)
    assert w.images == ("z", "z") and FINSETS.inverse(w) is None
    ident = FINSETS.identity(("a", "b"))
    assert ident.is_identity() and FINSETS.inverse(ident) == ident
