import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudocone import fixtures as fx
from pseudocone.fincat import check_category, check_functor, one, pow2
from pseudocone.grothendieck import build_elements, compare_pc_csect, sections
from pseudocone.twocat import constant


@pytest.mark.parametrize("make, sizes", [(fx.swap_strict, (2, 4)), (fx.chaos2_bz2, (2, 8))])
def test_elements_sizes(make, sizes):
    e = build_elements(make())
    assert (len(e.total.objects), len(e.total.morphisms)) == sizes
    assert check_category(e.total).ok
    assert check_functor(e.projection).ok


def test_section_counts():
    assert len(sections(build_elements(fx.cnst_one())).objects) == 1
    assert len(sections(build_elements(fx.cnst_one())).morphisms) == 1
    assert len(sections(build_elements(fx.swap_strict()), "cartesian").objects) == 0
    cs = sections(build_elements(fx.chaos2_bz2()), "cartesian")
    assert len(cs.objects) == 2
    assert all(len(cs.hom(a, b)) == 1 for a in cs.objects for b in cs.objects)


@pytest.mark.parametrize("make", [fx.swap_strict, fx.chaos2_bz2, fx.cnst_one, fx.pow2_over_arrow,
                                  fx.pow2_over_bz2, lambda: constant(pow2(), one())])
def test_pc_is_literally_cartesian_sections(make):
    assert compare_pc_csect(make()).ok


def _cartesian_iff_iso(p):
    e = build_elements(p)
    for m in e.total.morphisms:
        f0, f1 = e.mor_info[m]
        x = p.base.src(f0)
        assert e.is_cartesian(m) == p.fibre(x).is_iso(f1), m


@pytest.mark.parametrize("make", [fx.chaos2_bz2, fx.pow2_over_arrow])
def test_cartesian_arrows_are_those_with_invertible_fibre_part(make):
    _cartesian_iff_iso(make())


@settings(max_examples=15)
@given(st.integers(0, 2 ** 32), st.booleans())
def test_generated_pc_equals_sections(seed, twisted):
    p = fx.random_pseudofunctor(random.Random(seed), twisted=twisted)
    assert compare_pc_csect(p).ok
    _cartesian_iff_iso(p)
