"""Functors between pseudocone categories induced by 2-cells of pseudofunctors:
change of fibre, modifications as natural transformations, lifted adjunctions,
the strict 2-functor laws and translations along 2-cells of base functors."""
from .errors import NotComponentwiseAdjoint, ShapeMismatch
from .fincat import (AdjunctionData, FunctorData, NatTransData, check_adjunction, check_functor, check_nat,
                     compose_functors, identity_functor)
from .pseudocone import PCMorphism, PCObject, enumerate_pc, pc_tensor, pc_unit, validate_family, validate_morphism
from .report import Report
from .twocat import (ModificationData, Pseudofunctor, PseudoNat, check_modification, check_pseudonat,
                     identity_pseudonat, paste)


def translate_object(alpha, a):
    """alpha_X(A_X) with transitions alpha_X(tau_f) o alpha_f(A_Y)^{-1}."""
    ep = alpha.tgt
    c = ep.base
    family = {x: alpha.component(x).obj(a.family[x]) for x in c.objects}
    trans = {}
    for f in c.morphisms:
        x, y = c.src(f), c.tgt(f)
        ex = ep.fibre(x)
        w = ex.inverse(alpha.witness(f, a.family[y]))
        trans[f] = ex.compose(alpha.component(x).mor(a.transitions[f]), w)
    return PCObject(family, trans)


def translate_morphism(alpha, m, src=None, tgt=None):
    c = alpha.src.base
    return PCMorphism(src or translate_object(alpha, m.src), tgt or translate_object(alpha, m.tgt),
                      {x: alpha.component(x).mor(m.components[x]) for x in c.objects})


class _PCCache:
    """Enumerated PC categories keyed by pseudofunctor identity."""

    def __init__(self, pcs=None, kind="pseudo"):
        self.kind = kind
        self.store = {id(k): v for k, v in (pcs or {}).items()}

    def __call__(self, p):
        if id(p) not in self.store:
            self.store[id(p)] = enumerate_pc(p, self.kind)
        return self.store[id(p)]


def change_of_fibre(alpha, pc_src=None, pc_tgt=None, kind="pseudo"):
    """The functor PC(F) -> PC(E) induced by a pseudonatural alpha: F => E."""
    pc_src = pc_src or enumerate_pc(alpha.src, kind)
    pc_tgt = pc_tgt or enumerate_pc(alpha.tgt, kind)
    obj_map, images = {}, {}
    for k, a in pc_src.pc_objects.items():
        b = translate_object(alpha, a)
        rep = validate_family(alpha.tgt, b, kind=kind)
        if not rep.ok or b.key() not in pc_tgt.pc_objects:
            raise ShapeMismatch(f"image of {k} is not a cone of the target: {rep.laws()}")
        obj_map[k], images[k] = b.key(), b
    mor_map = {}
    for k, m in pc_src.pc_morphisms.items():
        n = translate_morphism(alpha, m, images[m.src.key()], images[m.tgt.key()])
        if n.key() not in pc_tgt.pc_morphisms:
            raise ShapeMismatch(f"image of morphism {k} is not a morphism of the target: "
                                f"{validate_morphism(alpha.tgt, n).laws()}")
        mor_map[k] = n.key()
    return FunctorData(pc_src, pc_tgt, obj_map, mor_map, f"PC({alpha.name})")


def modification_to_nat(eta, lhs, rhs):
    """Natural transformation lhs => rhs between the change-of-fibre functors of
    eta.src and eta.tgt, with component eta_X(A_X) at every cone A."""
    pc_src, pc_tgt = lhs.src, lhs.tgt
    comps = {}
    for k, a in pc_src.pc_objects.items():
        m = PCMorphism(pc_tgt.pc_objects[lhs.obj(k)], pc_tgt.pc_objects[rhs.obj(k)],
                       {x: eta.at(x, a.family[x]) for x in a.family})
        rep = validate_morphism(eta.src.tgt, m)
        if not rep.ok or m.key() not in pc_tgt.pc_morphisms:
            raise ShapeMismatch(f"component at {k} is not a cone morphism: {rep.laws()}")
        comps[k] = m.key()
    return NatTransData(lhs, rhs, comps, f"PC({eta.name})")


def _modification_between(src, tgt, comps, name):
    return ModificationData(src, tgt, {x: (lambda t: (lambda a: t.at(a)))(t) for x, t in comps.items()}, name)


def lift_adjunction(alpha, beta, units, counits, pc_src=None, pc_tgt=None):
    """Componentwise adjunctions alpha_X -| beta_X (units[X], counits[X]) lifted to PC(F) <-> PC(E)."""
    fp, ep = alpha.src, alpha.tgt
    if beta.src is not ep or beta.tgt is not fp:
        raise ShapeMismatch("beta must run E => F when alpha runs F => E")
    for x in fp.base.objects:
        adj = AdjunctionData(alpha.component(x), beta.component(x), units[x], counits[x])
        rep = check_adjunction(adj)
        if not rep.ok:
            raise NotComponentwiseAdjoint(f"fibre adjunction over {x} fails: {rep.laws()}")
    ba = paste("vertical", alpha, beta)
    ab = paste("vertical", beta, alpha)
    unit = _modification_between(identity_pseudonat(fp), ba, units, "unit")
    counit = _modification_between(ab, identity_pseudonat(ep), counits, "counit")
    for label, mod in (("unit", unit), ("counit", counit)):
        rep = check_modification(mod)
        if not rep.ok:
            raise NotComponentwiseAdjoint(f"the {label} family is not a modification: {rep.laws()}")
    pc_src = pc_src or enumerate_pc(fp)
    pc_tgt = pc_tgt or enumerate_pc(ep)
    left = change_of_fibre(alpha, pc_src, pc_tgt)
    right = change_of_fibre(beta, pc_tgt, pc_src)
    lifted_unit = modification_to_nat(unit, identity_functor(pc_src), compose_functors(right, left))
    lifted_counit = modification_to_nat(counit, compose_functors(left, right), identity_functor(pc_tgt))
    out = AdjunctionData(left, right, lifted_unit, lifted_counit)
    rep = check_adjunction(out)
    if not rep.ok:
        raise NotComponentwiseAdjoint(f"lifted adjunction fails: {rep.laws()}")
    return out


def pc_two_functor_laws(alphas=(), etas=(), pcs=None):
    """PC(beta o alpha) = PC(beta) PC(alpha), PC(Id) = Id and PC(eps . eta) = PC(eps) . PC(eta),
    all as literal table equalities.  `alphas` is a composable chain of pseudonaturals,
    `etas` a vertically composable chain of modifications."""
    rep = Report("strict 2-functor laws")
    pc = _PCCache(pcs)
    cache = {}

    def lift(a):
        if id(a) not in cache:
            cache[id(a)] = change_of_fibre(a, pc(a.src), pc(a.tgt))
        return cache[id(a)]

    for a in alphas:
        ident = change_of_fibre(identity_pseudonat(a.src), pc(a.src), pc(a.src))
        if ident != identity_functor(pc(a.src)):
            rep.add("identity", pseudofunctor=getattr(a.src, "name", "F"))
    for a, b in zip(alphas, alphas[1:]):
        whole = lift(paste("vertical", a, b))
        parts = compose_functors(lift(b), lift(a))
        if whole != parts:
            bad = next((k for k in whole.obj_map if whole.obj_map[k] != parts.obj_map.get(k)), None)
            if bad is None:
                bad = next(k for k in whole.mor_map if whole.mor_map[k] != parts.mor_map.get(k))
            rep.add("composition", first_difference=bad)
    for e1, e2 in zip(etas, etas[1:]):
        l1, r1 = lift(e1.src), lift(e1.tgt)
        r2 = lift(e2.tgt)
        whole = modification_to_nat(paste("vertical", e1, e2), l1, r2)
        n1 = modification_to_nat(e1, l1, r1)
        n2 = modification_to_nat(e2, r1, r2)
        target = l1.tgt
        for k in l1.src.objects:
            if whole.at(k) != target.compose(n2.at(k), n1.at(k)):
                rep.add("vertical", first_difference=k)
                break
    return rep


# ------------------------------------------------------------ translations

class PulledBack(Pseudofunctor):
    """F o g^op for a functor g: C -> E between finite categories."""

    def __init__(self, p, g, name=None):
        self.p, self.g = p, g
        self.base = g.src
        self.name = name or f"{getattr(p, 'name', 'F')}o{g.name}"

    def fibre(self, x):
        return self.p.fibre(self.g.obj(x))

    def fmap(self, f):
        return self.p.fmap(self.g.mor(f))

    def phi(self, f, h, a):
        return self.p.phi(self.g.mor(f), self.g.mor(h), a)


class TranslationData:
    """Base functor gamma: C -> D, functors phi: C -> E and psi: D -> E,
    a 2-cell alpha: phi => psi o gamma, and a pseudofunctor F on E."""

    def __init__(self, gamma, phi, psi, alpha, p):
        self.gamma, self.phi, self.psi, self.alpha, self.p = gamma, phi, psi, alpha, p


class Translation:
    def __init__(self, pseudonat, functor, direct):
        self.pseudonat, self.functor, self.direct = pseudonat, functor, direct


def translation_pseudonat(t):
    """F * alpha: F(psi gamma) => F(phi) with h_X = F(alpha_X) and
    h_f = phi_{phi f, alpha_Y}^{-1} o phi_{alpha_X, psi gamma f}."""
    rep = check_nat(t.alpha)
    if not rep.ok:
        raise ShapeMismatch(f"alpha is not natural: {rep.laws()}")
    p, c = t.p, t.gamma.src
    psi_gamma = compose_functors(t.psi, t.gamma)
    src, tgt = PulledBack(p, psi_gamma, "F.psi.gamma"), PulledBack(p, t.phi, "F.phi")

    def component(x):
        return p.fmap(t.alpha.at(x))

    def witness(f, a):
        x, y = c.src(f), c.tgt(f)
        fx = p.fibre(t.phi.obj(x))
        ax, ay = t.alpha.at(x), t.alpha.at(y)
        return fx.compose(p.phi_inv(t.phi.mor(f), ay, a), p.phi(ax, psi_gamma.mor(f), a))

    return PseudoNat(src, tgt, component, witness, "h")


def translate_along(t, pc_src=None, pc_tgt=None):
    """The pseudonatural F * alpha, its change-of-fibre functor, and the same
    functor computed directly from the compositors of F."""
    h = translation_pseudonat(t)
    rep = check_pseudonat(h)
    if not rep.ok:
        raise ShapeMismatch(f"translation is not pseudonatural: {rep.laws()}")
    pc_src = pc_src or enumerate_pc(h.src)
    pc_tgt = pc_tgt or enumerate_pc(h.tgt)
    functor = change_of_fibre(h, pc_src, pc_tgt)
    direct = _direct_translation(t, pc_src, pc_tgt)
    return Translation(h, functor, direct)


def _direct_translation(t, pc_src, pc_tgt):
    # tau'_f = F(alpha_X)(tau_f) o phi_{alpha_X, psi gamma f}^{-1} o phi_{phi f, alpha_Y}
    p, c = t.p, t.gamma.src
    obj_map = {}
    for k, a in pc_src.pc_objects.items():
        fam = {x: p.fmap(t.alpha.at(x)).obj(a.family[x]) for x in c.objects}
        trans = {}
        for f in c.morphisms:
            x, y = c.src(f), c.tgt(f)
            fx = p.fibre(t.phi.obj(x))
            ax, ay = t.alpha.at(x), t.alpha.at(y)
            pgf = t.psi.mor(t.gamma.mor(f))
            trans[f] = fx.compose(p.fmap(ax).mor(a.transitions[f]),
                                  fx.compose(p.phi_inv(ax, pgf, a.family[y]), p.phi(t.phi.mor(f), ay, a.family[y])))
        obj_map[k] = PCObject(fam, trans).key()
    mor_map = {}
    for k, m in pc_src.pc_morphisms.items():
        n = PCMorphism(pc_tgt.pc_objects.get(obj_map[m.src.key()]) or PCObject({}, {}),
                       pc_tgt.pc_objects.get(obj_map[m.tgt.key()]) or PCObject({}, {}),
                       {x: p.fmap(t.alpha.at(x)).mor(m.components[x]) for x in c.objects})
        mor_map[k] = n.key()
    return FunctorData(pc_src, pc_tgt, obj_map, mor_map, "direct")


# ------------------------------------------------------------ monoidal comparison

def check_monoidal_pseudonat(alpha, m_src, m_tgt, pc_src, tensor_cmp, unit_cmp):
    """Componentwise comparisons alpha_X(a (x) b) -> alpha_X a (x) alpha_X b and
    alpha_X(1) -> 1 assemble into cone morphisms for every pair of cones."""
    rep = Report(f"monoidal {alpha.name}")
    fp, ep = alpha.src, alpha.tgt
    xs = fp.base.objects
    objs = list(pc_src.pc_objects.values())
    for a in objs:
        for b in objs:
            ab = pc_tensor(fp, m_src, a, b)
            lhs = translate_object(alpha, ab)
            rhs = pc_tensor(ep, m_tgt, translate_object(alpha, a), translate_object(alpha, b))
            m = PCMorphism(lhs, rhs, {x: tensor_cmp(x, a.family[x], b.family[x]) for x in xs})
            if not validate_morphism(ep, m).ok:
                rep.add("tensor-comparison", pair=[a.key(), b.key()])
    u = pc_unit(fp, m_src)
    m = PCMorphism(translate_object(alpha, u), pc_unit(ep, m_tgt), {x: unit_cmp(x) for x in xs})
    if not validate_morphism(ep, m).ok:
        rep.add("unit-comparison")
    return rep
