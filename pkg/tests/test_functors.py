import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudocone import fixtures as fx
from pseudocone import suite
from pseudocone.errors import NotComponentwiseAdjoint, ShapeMismatch
from pseudocone.fincat import (NatTransData, check_adjunction, check_equivalence, check_functor, compose_functors,
                               identity_functor)
from pseudocone.functors import (TranslationData, change_of_fibre, lift_adjunction, modification_to_nat,
                                 pc_two_functor_laws, translate_along)
from pseudocone.pseudocone import enumerate_pc
from pseudocone.twocat import identity_modification, identity_pseudonat, is_strict, natural_automorphisms, twist


@pytest.fixture(scope="module")
def chaos():
    p = fx.chaos2_bz2()
    k = p.fibre("*")
    sw = fx.swap_functor(k)
    return p, k, sw, fx.thin_pseudonat(p, p, {"*": sw}, "swap"), enumerate_pc(p)


def test_identity_pseudonat_lifts_to_identity(chaos):
    p, _, _, _, pc = chaos
    assert change_of_fibre(identity_pseudonat(p), pc, pc) == identity_functor(pc)


def test_swap_lifts_to_an_involutive_equivalence(chaos):
    _, _, _, swap, pc = chaos
    lifted = change_of_fibre(swap, pc, pc)
    assert check_functor(lifted).ok
    assert check_equivalence(lifted).ok
    assert compose_functors(lifted, lifted) == identity_functor(pc)


def test_two_functor_laws_on_swap(chaos):
    p, _, _, swap, pc = chaos
    ident = identity_modification(swap)
    rep = pc_two_functor_laws([swap, swap], etas=[ident, ident], pcs={p: pc})
    assert rep.ok, rep.laws()


def test_identity_modification_lifts_to_identity_transformation(chaos):
    _, _, _, swap, pc = chaos
    lifted = change_of_fibre(swap, pc, pc)
    nat = modification_to_nat(identity_modification(swap), lifted, lifted)
    assert all(nat.at(k) == pc.identity(lifted.obj(k)) for k in pc.objects)


def _units(k, sw):
    return {"*": NatTransData(identity_functor(k), compose_functors(sw, sw), {o: k.identity(o) for o in k.objects})}


def test_swap_adjunction_lifts(chaos):
    _, k, sw, swap, pc = chaos
    units = _units(k, sw)
    adj = lift_adjunction(swap, swap, units, units, pc, pc)
    assert check_adjunction(adj).ok


def test_broken_fibre_unit_is_rejected(chaos):
    _, k, sw, swap, pc = chaos
    bad = {"*": NatTransData(identity_functor(k), compose_functors(sw, sw), {"a": "a->b", "b": "id_b"})}
    with pytest.raises(NotComponentwiseAdjoint):
        lift_adjunction(swap, swap, bad, bad, pc, pc)


def test_adjunction_endpoints_must_be_opposed(chaos):
    p, k, sw, swap, pc = chaos
    other = fx.pow2_over_bz2()
    stray = identity_pseudonat(other)
    with pytest.raises(ShapeMismatch):
        lift_adjunction(swap, stray, _units(k, sw), _units(k, sw), pc, pc)


@pytest.mark.parametrize("make", [fx.pow2_over_bz2, fx.chaos2_bz2, fx.swap_strict])
def test_translation_routes_agree(make):
    p = make()
    ident = identity_functor(p.base)
    autos = natural_automorphisms(ident)
    assert len(autos) == 2
    for i, comps in enumerate(autos):
        t = translate_along(TranslationData(ident, ident, ident, NatTransData(ident, ident, comps, f"a{i}"), p))
        assert check_functor(t.functor).ok
        assert t.functor.obj_map == t.direct.obj_map
        assert t.functor.mor_map == t.direct.mor_map


def test_identity_translation_is_identity():
    p = fx.pow2_over_bz2()
    ident = identity_functor(p.base)
    t = translate_along(TranslationData(ident, ident, ident, NatTransData(ident, ident, {"*": "id_*"}), p))
    assert t.functor.obj_map == {k: k for k in t.functor.src.objects}


def test_non_natural_alpha_is_rejected():
    p = fx.pow2_over_arrow()
    ident = identity_functor(p.base)
    alpha = NatTransData(ident, ident, {"X": "u", "Y": "id_Y"})
    with pytest.raises(ShapeMismatch):
        translate_along(TranslationData(ident, ident, ident, alpha, p))


STRICT = [i for i, q in enumerate(suite.generated()) if is_strict(q)][:12]


@settings(max_examples=12)
@given(st.sampled_from(STRICT), st.integers(0, 2**32))
def test_twisting_lifts_to_an_equivalence(index, seed):
    q = suite.generated()[index]
    t, tau = twist(q, rng=random.Random(seed))
    pc_q, pc_t = suite.pc_of(q), enumerate_pc(t)
    assert pc_two_functor_laws([tau], pcs={q: pc_q, t: pc_t}).ok
    lifted = change_of_fibre(tau, pc_q, pc_t)
    assert check_functor(lifted).ok
    assert check_equivalence(lifted).ok
