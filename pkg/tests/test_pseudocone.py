import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudocone import fixtures as fx
from pseudocone.errors import (EnumerationCapExceeded, FibreLimitMissing, NoTerminalObject, NotACone,
                               NotPreserved, UnknownObject)
from pseudocone.fincat import FunctorData, disc2, discrete, one, subset_of
from pseudocone.pseudocone import (PCDiagram, PCObject, TestCone, check_collapse, check_monoidal_data,
                                   check_pc_limit, check_pc_monoidal, collapse_terminal, enumerate_pc,
                                   identity_pc, pc_limit, pc_tensor, pc_unit, validate_family, verify_pseudolimit)
from pseudocone.twocat import composable_pairs, constant


def brute_force_pc(p, kind="pseudo"):
    """Independent oracle: every family and every transition choice, filtered by the
    cone conditions written out directly; then all componentwise morphisms."""
    c = p.base
    xs, fs = list(c.objects), list(c.morphisms)
    objects = []
    for fam in product(*[p.fibre(x).objects for x in xs]):
        family = dict(zip(xs, fam))
        choices = []
        for f in fs:
            fx = p.fibre(c.src(f))
            choices.append(fx.hom(p.fmap(f).obj(family[c.tgt(f)]), family[c.src(f)]))
        for ts in product(*choices):
            trans = dict(zip(fs, ts))
            if any(trans[c.identity(x)] != p.fibre(x).identity(family[x]) for x in xs):
                continue
            if kind == "pseudo" and not all(p.fibre(c.src(f)).is_iso(trans[f]) for f in fs):
                continue
            ok = True
            for f, g in composable_pairs(c):
                fx = p.fibre(c.src(f))
                az = family[c.tgt(g)]
                if (fx.compose(trans[c.compose(g, f)], p.phi(f, g, az))
                        != fx.compose(trans[f], p.fmap(f).mor(trans[g]))):
                    ok = False
                    break
            if ok:
                objects.append((family, trans))
    morphisms = 0
    for (fa, ta), (fb, tb) in product(objects, repeat=2):
        for comps in product(*[p.fibre(x).hom(fa[x], fb[x]) for x in xs]):
            m = dict(zip(xs, comps))
            if all(p.fibre(c.src(f)).compose(tb[f], p.fmap(f).mor(m[c.tgt(f)]))
                   == p.fibre(c.src(f)).compose(m[c.src(f)], ta[f]) for f in fs):
                morphisms += 1
    return len(objects), morphisms


def test_swap_strict_has_no_pseudocones():
    assert len(enumerate_pc(fx.swap_strict()).objects) == 0


def test_chaos2_over_bz2_is_chaos2():
    pc = enumerate_pc(fx.chaos2_bz2())
    assert len(pc.objects) == 2
    assert all(len(pc.hom(a, b)) == 1 for a in pc.objects for b in pc.objects)


def test_constant_one_over_arrow():
    pc = enumerate_pc(fx.cnst_one())
    assert (len(pc.objects), len(pc.morphisms)) == (1, 1)


@pytest.mark.parametrize("make", [fx.swap_strict, fx.chaos2_bz2, fx.cnst_one, fx.pow2_over_arrow,
                                  fx.pow2_over_bz2])
@pytest.mark.parametrize("kind", ["pseudo", "lax"])
def test_named_sizes_match_bruteforce(make, kind):
    p = make()
    pc = enumerate_pc(p, kind)
    assert (len(pc.objects), len(pc.morphisms)) == brute_force_pc(p, kind)


@settings(max_examples=15)
@given(st.integers(0, 2 ** 32), st.booleans())
def test_generated_sizes_match_bruteforce(seed, twisted):
    p = fx.random_pseudofunctor(random.Random(seed), twisted=twisted)
    pc = enumerate_pc(p)
    assert (len(pc.objects), len(pc.morphisms)) == brute_force_pc(p)


def test_chaos2_family_with_unique_transition_is_valid():
    p = fx.chaos2_bz2()
    k = p.fibre("*")
    o = PCObject({"*": "a"}, {"id_*": "id_a", "s": k.hom("b", "a")[0]})
    assert validate_family(p, o).ok


def test_family_missing_component_raises():
    with pytest.raises(UnknownObject):
        validate_family(fx.chaos2_bz2(), PCObject({}, {}))


def test_caps_are_hard_errors():
    with pytest.raises(EnumerationCapExceeded):
        enumerate_pc(fx.chaos2_bz2(), caps={"fibre_objects": 1})
    with pytest.raises(EnumerationCapExceeded):
        enumerate_pc(fx.pow2_over_arrow(), max_candidates=2)


def _point_cone(p, obj):
    d = one()
    legs = {x: FunctorData(d, p.fibre(x), {"*": obj.family[x]}, {"id_*": p.fibre(x).identity(obj.family[x])})
            for x in p.base.objects}
    return TestCone(d, legs, {f: {"*": obj.transitions[f]} for f in p.base.morphisms})


def test_point_cone_picks_out_its_object():
    p = fx.chaos2_bz2()
    pc = enumerate_pc(p)
    for key, obj in pc.pc_objects.items():
        rep = verify_pseudolimit(p, _point_cone(p, obj), pc)
        assert rep.ok and rep.factorizations == 1
        assert rep.functor.obj("*") == key


def test_cone_with_non_invertible_witness_is_rejected():
    p = fx.pow2_over_arrow()
    bad = PCObject({"X": "{0,1}", "Y": "{}"}, {"id_X": "id_{0,1}", "id_Y": "id_{}", "u": "{0}<{0,1}"})
    with pytest.raises(NotACone):
        verify_pseudolimit(p, _point_cone(p, bad))


def test_collapse_over_pow2_base():
    p = fx.pow2_over_arrow()
    pair = collapse_terminal(p)
    assert pair.top == "Y"
    pc = enumerate_pc(p)
    assert check_collapse(pair, pc).ok
    for obj in pc.pc_objects.values():
        z = pair.z(obj)
        assert z.components["Y"] == obj.transitions["id_Y"]


def test_collapse_needs_terminal():
    with pytest.raises(NoTerminalObject):
        collapse_terminal(constant(disc2(), one()))


def _pair(p, a, b):
    return PCDiagram(discrete(["l", "r"], "Pair"), {"l": a, "r": b},
                     {"id_l": identity_pc(p, a), "id_r": identity_pc(p, b)})


def test_self_product_in_chaos2_instance():
    p = fx.chaos2_bz2()
    pc = enumerate_pc(p)
    a = next(iter(pc.pc_objects.values()))
    apex, legs = pc_limit(p, _pair(p, a, a))
    assert check_pc_limit(p, _pair(p, a, a), apex, legs, "limit", pc).ok


def test_disc2_product_of_distinct_objects_missing():
    p = constant(one(), disc2())
    pc = enumerate_pc(p)
    objs = sorted(pc.pc_objects.values(), key=lambda o: o.family["*"])
    with pytest.raises(FibreLimitMissing):
        pc_limit(p, _pair(p, objs[0], objs[1]))


def test_empty_limit_is_terminal_cone():
    p = fx.pow2_over_arrow()
    pc = enumerate_pc(p)
    empty = PCDiagram(discrete([], "Empty"), {}, {})
    apex, legs = pc_limit(p, empty)
    assert check_pc_limit(p, empty, apex, legs, "limit", pc).ok
    assert all(v == "{0,1}" for v in apex.family.values())
    # adding 0 does not keep the empty set fixed, so the initial object is not preserved
    with pytest.raises(NotPreserved):
        pc_limit(p, empty, "colimit")


@pytest.mark.parametrize("make", [fx.pow2_over_arrow, fx.pow2_over_bz2])
def test_meet_tensor_is_componentwise_intersection(make):
    p = make()
    m = fx.meet_monoidal(p)
    assert check_monoidal_data(p, m).ok
    pc = enumerate_pc(p)
    objs = list(pc.pc_objects.values())
    assert check_pc_monoidal(p, m, objs).ok
    for a, b in product(objs, repeat=2):
        t = pc_tensor(p, m, a, b)
        for x in p.base.objects:
            assert subset_of(t.family[x]) == subset_of(a.family[x]) & subset_of(b.family[x])
    assert all(v == "{0,1}" for v in pc_unit(p, m).family.values())


def test_identity_morphisms_compose_neutrally():
    p = fx.pow2_over_arrow()
    pc = enumerate_pc(p)
    for k, m in pc.pc_morphisms.items():
        assert pc.compose(pc.identity(m.tgt.key()), k) == k
        assert pc.compose(k, pc.identity(m.src.key())) == k
