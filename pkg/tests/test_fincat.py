from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudocone.errors import MalformedTable, NoLimit, ShapeMismatch
from pseudocone.fincat import (AdjunctionData, FunctorData, NatTransData, adjoint_equivalence, arrow, automorphisms,
                               bz2, chaos2, check_adjunction, check_category, check_equivalence, check_functor,
                               check_nat, compose_functors, compute_limit, cyclic_group_category, disc2, discrete,
                               find_isos, functors_between, identity_functor, one, opposite, poset, pow2,
                               product_category, subset_of)


@pytest.mark.parametrize("make", [one, arrow, disc2, chaos2, bz2, pow2, lambda: cyclic_group_category(3)])
def test_standard_categories_are_valid(make):
    assert check_category(make()).ok


def test_product_and_opposite_are_valid():
    assert check_category(product_category(arrow(), bz2())).ok
    assert check_category(opposite(pow2())).ok
    assert len(product_category(arrow(), chaos2()).morphisms) == 3 * 4


def test_bad_composition_table_is_reported():
    c = arrow()
    c.table[("u", "id_X")] = "id_Y"
    assert not check_category(c).ok


def test_missing_composite_raises():
    c = arrow()
    with pytest.raises(MalformedTable):
        c.compose("u", "u")


def test_isos_in_chaos2_are_unique_per_pair():
    isos = find_isos(chaos2())
    assert set(isos) == {(a, b) for a in "ab" for b in "ab"}
    assert all(len(v) == 1 for v in isos.values())


@pytest.mark.parametrize("make", [disc2, arrow])
def test_only_identities_are_isos(make):
    c = make()
    isos = find_isos(c)
    assert all(m in c.identities.values() for v in isos.values() for m in v)


def _swap_on_chaos2():
    k = chaos2()
    obj = {"a": "b", "b": "a"}
    return FunctorData(k, k, obj, {m: k.hom(obj[k.src(m)], obj[k.tgt(m)])[0] for m in k.morphisms}, "swap")


def test_swap_adjoint_to_swap_on_chaos2():
    k = chaos2()
    sw = _swap_on_chaos2()
    twice = compose_functors(sw, sw)
    unit = NatTransData(identity_functor(k), twice, {a: k.identity(a) for a in k.objects})
    assert check_nat(unit).ok
    assert check_adjunction(AdjunctionData(sw, sw, unit, unit)).ok


def test_broken_unit_fails_triangle_or_naturality():
    k = chaos2()
    sw = _swap_on_chaos2()
    twice = compose_functors(sw, sw)
    unit = NatTransData(identity_functor(k), twice, {"a": "a->b", "b": "id_b"})
    assert not check_adjunction(AdjunctionData(sw, sw, unit, unit)).ok


def test_adjoint_equivalence_of_swap():
    data = adjoint_equivalence(_swap_on_chaos2())
    assert check_adjunction(data).ok


def test_adjoint_equivalence_rejects_non_equivalence():
    c = arrow()
    collapse = FunctorData(c, one(), {"X": "*", "Y": "*"}, {m: "id_*" for m in c.morphisms})
    assert not check_equivalence(collapse).ok
    with pytest.raises(ShapeMismatch):
        adjoint_equivalence(FunctorData(one(), c, {"*": "X"}, {"id_*": "id_X"}))


def test_functor_counts():
    assert len(functors_between(bz2(), bz2())) == 2
    assert len(automorphisms(chaos2())) == 2
    assert len(functors_between(arrow(), chaos2())) == 4
    for f in functors_between(arrow(), pow2()):
        assert check_functor(f).ok


def test_product_in_pow2_is_intersection():
    k = pow2()
    shape = discrete(["l", "r"])
    for a, b in product(k.objects, repeat=2):
        d = FunctorData(shape, k, {"l": a, "r": b}, {"id_l": k.identity(a), "id_r": k.identity(b)})
        res = compute_limit(k, d)
        assert subset_of(res.apex) == subset_of(a) & subset_of(b)
        co = compute_limit(k, d, "colimit")
        assert subset_of(co.apex) == subset_of(a) | subset_of(b)


def test_binary_product_missing_in_disc2():
    k = disc2()
    shape = discrete(["l", "r"])
    d = FunctorData(shape, k, {"l": "a", "r": "b"}, {"id_l": "id_a", "id_r": "id_b"})
    with pytest.raises(NoLimit):
        compute_limit(k, d)


def test_terminal_object_as_empty_limit():
    k = pow2()
    empty = discrete([], "Empty")
    assert compute_limit(k, FunctorData(empty, k, {}, {})).apex == "{0,1}"
    assert compute_limit(k, FunctorData(empty, k, {}, {}), "colimit").apex == "{}"


# random posets on {0..n-1}: i <= j iff i == j or (i, j) is in a transitively closed relation compatible with <
@st.composite
def posets(draw):
    n = draw(st.integers(1, 5))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rel = {p for p in pairs if draw(st.booleans())}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    names = [str(i) for i in range(n)]
    return names, lambda x, y: x == y or (int(x), int(y)) in rel


@given(posets(), st.data())
def test_poset_product_agrees_with_greatest_lower_bound(p, data):
    names, leq = p
    c = poset(names, leq)
    assert check_category(c).ok
    a = data.draw(st.sampled_from(names))
    b = data.draw(st.sampled_from(names))
    lower = [z for z in names if leq(z, a) and leq(z, b)]
    glb = [z for z in lower if all(leq(w, z) for w in lower)]
    shape = discrete(["l", "r"])
    d = FunctorData(shape, c, {"l": a, "r": b}, {"id_l": c.identity(a), "id_r": c.identity(b)})
    if glb:
        assert compute_limit(c, d).apex == glb[0]
    else:
        with pytest.raises(NoLimit):
            compute_limit(c, d)


@given(st.integers(1, 6))
def test_cyclic_group_category_is_a_group(n):
    c = cyclic_group_category(n)
    assert check_category(c).ok
    assert all(c.is_iso(m) for m in c.morphisms)
    assert len(c.morphisms) == n
