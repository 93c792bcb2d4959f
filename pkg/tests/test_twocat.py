import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudocone import fixtures as fx
from pseudocone.errors import ShapeMismatch
from pseudocone.fincat import NatTransData, bz2, identity_functor
from pseudocone.twocat import (PseudofunctorData, check_modification, check_pseudofunctor, check_pseudonat,
                               identity_modification, identity_pseudonat, is_strict, paste, tabulate_pseudonat,
                               twist)

NAMED = [fx.swap_strict, fx.chaos2_bz2, fx.cnst_one, fx.pow2_over_arrow, fx.pow2_over_bz2]


@pytest.mark.parametrize("make", NAMED)
def test_named_instances_are_coherent(make):
    p = make()
    assert check_pseudofunctor(p).ok
    assert is_strict(p)
    assert check_pseudonat(identity_pseudonat(p)).ok
    assert check_modification(identity_modification(identity_pseudonat(p))).ok


def _bz2_over_bz2(phi_ss="id_*", phi_id_s="id_*"):
    base, k = bz2(), bz2()
    ident = identity_functor(k)
    comps = {}
    for f in base.morphisms:
        for g in base.morphisms:
            value = {("s", "s"): phi_ss, ("id_*", "s"): phi_id_s}.get((f, g), "id_*")
            comps[(f, g)] = NatTransData(ident, ident, {"*": value})
    return PseudofunctorData(base, {"*": k}, {"id_*": ident, "s": ident}, comps, "BZ2/BZ2")


def test_nontrivial_cocycle_is_a_valid_pseudofunctor():
    p = _bz2_over_bz2(phi_ss="s")
    assert check_pseudofunctor(p).ok
    assert not is_strict(p)


def test_non_normalized_compositor_is_rejected():
    assert not check_pseudofunctor(_bz2_over_bz2(phi_id_s="s")).ok


@given(st.integers(0, 2 ** 32))
def test_generated_instances_are_coherent(seed):
    p = fx.random_pseudofunctor(random.Random(seed))
    assert check_pseudofunctor(p).ok


@given(st.integers(0, 2 ** 32))
def test_twist_is_coherent_and_pseudonatural(seed):
    rng = random.Random(seed)
    p = fx.random_pseudofunctor(rng, twisted=False)
    q, tau = twist(p, rng=rng)
    assert check_pseudofunctor(q).ok
    assert check_pseudonat(tau).ok
    assert check_pseudonat(tabulate_pseudonat(tau)).ok


def test_swap_pseudonatural_on_chaos2():
    p = fx.chaos2_bz2()
    sw = fx.swap_functor(p.fibre("*"))
    alpha = fx.thin_pseudonat(p, p, {"*": sw}, "swap")
    assert check_pseudonat(alpha).ok
    both = paste("vertical", alpha, alpha)
    assert check_pseudonat(both).ok
    k = p.fibre("*")
    assert all(both.component("*").obj(a) == a for a in k.objects)


def test_identity_vertical_composite_is_identity():
    p = fx.swap_strict()
    ident = identity_pseudonat(p)
    comp = paste("vertical", ident, ident)
    k = p.fibre("*")
    for a in k.objects:
        assert comp.component("*").obj(a) == a
        for f in p.base.morphisms:
            assert comp.witness(f, a) == ident.witness(f, a)


def test_whisker_by_identity_keeps_components():
    p = fx.chaos2_bz2()
    k = p.fibre("*")
    sw = fx.swap_functor(k)
    alpha = fx.thin_pseudonat(p, p, {"*": sw}, "swap")
    eta = identity_modification(alpha)
    ident = identity_pseudonat(p)
    whiskered = paste("whisker", ident, eta)
    assert check_modification(whiskered).ok
    for a in k.objects:
        assert whiskered.at("*", a) == eta.at("*", a)
    vertical = paste("vertical", eta, eta)
    assert check_modification(vertical).ok


def test_paste_rejects_mismatched_kinds():
    p = fx.swap_strict()
    ident = identity_pseudonat(p)
    with pytest.raises(ShapeMismatch):
        paste("vertical", ident, identity_modification(ident))
    with pytest.raises(ShapeMismatch):
        paste("diagonal", ident, ident)
