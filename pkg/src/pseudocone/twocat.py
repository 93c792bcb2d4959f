"""Pseudofunctors C^op -> Cat over a finite base, pseudonatural transformations,
modifications and their composites, each with a coherence checker.

Conventions: for f: X -> Y in the base, fmap(f) is the functor F(Y) -> F(X);
phi(f, g, a) is the component at a in F(Z) of the compositor
F(f)F(g) => F(g o f) for f: X -> Y, g: Y -> Z.
"""
import random

from .errors import MalformedTable, ShapeMismatch
from .fincat import (FinCat, Functor, FunctorData, NatTrans, NatTransData, compose_functors,
                     identity_functor, tabulate)
from .report import Report


class Pseudofunctor:
    """Protocol: base, fibre(X), fmap(f), phi(f, g, a)."""

    base = None

    def fibre(self, x):
        raise NotImplementedError

    def fmap(self, f):
        raise NotImplementedError

    def phi(self, f, g, a):
        raise NotImplementedError

    def phi_inv(self, f, g, a):
        c = self.fibre(self.base.src(f))
        return c.inverse(self.phi(f, g, a))

    def is_identity(self, f):
        return f == self.base.identity(self.base.src(f)) and self.base.src(f) == self.base.tgt(f)


class PseudofunctorData(Pseudofunctor):
    def __init__(self, base, fibre, fibre_functor, compositor, name="F"):
        self.base, self.name = base, name
        self.fibres = dict(fibre)
        self.fibre_functor = dict(fibre_functor)
        self.compositor = dict(compositor)

    def fibre(self, x):
        try:
            return self.fibres[x]
        except KeyError:
            raise MalformedTable(f"{self.name} has no fibre over {x}") from None

    def fmap(self, f):
        try:
            return self.fibre_functor[f]
        except KeyError:
            raise MalformedTable(f"{self.name} has no fibre functor for {f}") from None

    def phi(self, f, g, a):
        try:
            return self.compositor[(f, g)].at(a)
        except KeyError:
            raise MalformedTable(f"{self.name} has no compositor for ({f}, {g})") from None


def composable_pairs(c):
    return [(f, g) for f in c.morphisms for g in c.morphisms if c.tgt(f) == c.src(g)]


def strict_pseudofunctor(base, fibre, fibre_functor, name="F"):
    """All compositors identities; valid iff F(g o f) = F(f) F(g) on the nose."""
    compositor = {}
    for f, g in composable_pairs(base):
        ff, fg = fibre_functor[f], fibre_functor[g]
        src = compose_functors(ff, fg)
        tgt = fibre_functor[base.compose(g, f)]
        cx = fibre[base.src(f)]
        compositor[(f, g)] = NatTransData(src, tgt, {a: cx.identity(src.obj(a)) for a in fg.src.objects},
                                          f"phi_{f},{g}")
    return PseudofunctorData(base, fibre, fibre_functor, compositor, name)


def constant(base, d, name=None):
    fibre = {x: d for x in base.objects}
    idf = identity_functor(d)
    return strict_pseudofunctor(base, fibre, {f: idf for f in base.morphisms}, name or f"cnst({d.name})")


def fibre_objects(p, x, samples=None):
    if samples is not None:
        return list(samples(x)) if callable(samples) else list(samples.get(x, []))
    return list(p.fibre(x).objects)


def check_pseudofunctor(p, samples=None):
    """Normalization, functoriality of each F(f), compositor typing, naturality,
    invertibility and triple coherence.  `samples` restricts the fibre objects
    examined when fibres are too large (or infinite) to enumerate."""
    rep = Report(f"pseudofunctor {getattr(p, 'name', 'F')}")
    c = p.base
    for x in c.objects:
        fx = p.fmap(c.identity(x))
        for a in fibre_objects(p, x, samples):
            if fx.obj(a) != a:
                rep.add("normalization/identity-functor", object=x, fibre_object=a)
                break
    for f in c.morphisms:
        x, y = c.src(f), c.tgt(f)
        fx, fy, ff = p.fibre(x), p.fibre(y), p.fmap(f)
        objs = fibre_objects(p, y, samples)
        for a in objs:
            if not fx.has_object(ff.obj(a)):
                rep.add("functor/object", morphism=f, fibre_object=a)
        if samples is None and isinstance(fy, FinCat):
            for m in fy.morphisms:
                fm = ff.mor(m)
                if fx.src(fm) != ff.obj(fy.src(m)) or fx.tgt(fm) != ff.obj(fy.tgt(m)):
                    rep.add("functor/endpoints", morphism=f, fibre_morphism=m)
            for a in fy.objects:
                if ff.mor(fy.identity(a)) != fx.identity(ff.obj(a)):
                    rep.add("functor/identity", morphism=f, fibre_object=a)
            for (g2, f2), r in fy.table.items():
                if ff.mor(r) != fx.compose(ff.mor(g2), ff.mor(f2)):
                    rep.add("functor/composition", morphism=f, pair=[g2, f2])
                    break
    if not rep.ok:
        return rep
    for f, g in composable_pairs(c):
        x, z = c.src(f), c.tgt(g)
        fx, fz = p.fibre(x), p.fibre(z)
        ff, fg, fgf = p.fmap(f), p.fmap(g), p.fmap(c.compose(g, f))
        for a in fibre_objects(p, z, samples):
            k = p.phi(f, g, a)
            if fx.src(k) != ff.obj(fg.obj(a)) or fx.tgt(k) != fgf.obj(a):
                rep.add("compositor/endpoints", pair=[f, g], fibre_object=a)
                continue
            if not fx.is_iso(k):
                rep.add("compositor/invertible", pair=[f, g], fibre_object=a)
            if (p.is_identity(f) or p.is_identity(g)) and k != fx.identity(fgf.obj(a)):
                rep.add("normalization/compositor", pair=[f, g], fibre_object=a)
        if samples is None and isinstance(fz, FinCat):
            for m in fz.morphisms:
                a, b = fz.src(m), fz.tgt(m)
                lhs = fx.compose(p.phi(f, g, b), ff.mor(fg.mor(m)))
                rhs = fx.compose(fgf.mor(m), p.phi(f, g, a))
                if lhs != rhs:
                    rep.add("compositor/naturality", pair=[f, g], fibre_morphism=m)
                    break
    if not rep.ok:
        return rep
    for f, g in composable_pairs(c):
        for h in c.morphisms:
            if c.src(h) != c.tgt(g):
                continue
            x = c.src(f)
            fx = p.fibre(x)
            ff = p.fmap(f)
            hg, gf = c.compose(h, g), c.compose(g, f)
            for a in fibre_objects(p, c.tgt(h), samples):
                lhs = fx.compose(p.phi(f, hg, a), ff.mor(p.phi(g, h, a)))
                rhs = fx.compose(p.phi(gf, h, a), p.phi(f, g, p.fmap(h).obj(a)))
                if lhs != rhs:
                    rep.add("compositor/coherence", triple=[f, g, h], fibre_object=a)
    return rep


# ------------------------------------------------------------ pseudonaturals

class PseudoNat:
    """Protocol: src, tgt pseudofunctors; component(X) functor F(X) -> E(X);
    witness(f, a) component at a in F(Y) of alpha_X F(f) => E(f) alpha_Y."""

    def __init__(self, src, tgt, component, witness, name="alpha"):
        self.src, self.tgt, self.name = src, tgt, name
        self._component, self._witness = component, witness

    def component(self, x):
        return self._component(x)

    def witness(self, f, a):
        return self._witness(f, a)


class PseudoNatData(PseudoNat):
    def __init__(self, src, tgt, obj_component, mor_component, name="alpha"):
        self.src, self.tgt, self.name = src, tgt, name
        self.obj_component = dict(obj_component)
        self.mor_component = dict(mor_component)

    def component(self, x):
        return self.obj_component[x]

    def witness(self, f, a):
        return self.mor_component[f].at(a)


def identity_pseudonat(p, name="Id"):
    comps = {x: identity_functor(p.fibre(x)) for x in p.base.objects}
    return PseudoNat(p, p, lambda x: comps[x],
                     lambda f, a: p.fibre(p.base.src(f)).identity(p.fmap(f).obj(a)), name)


def tabulate_pseudonat(alpha):
    c = alpha.src.base
    comps, wit = {}, {}
    for x in c.objects:
        comp = alpha.component(x)
        comps[x] = tabulate(comp) if isinstance(comp.src, FinCat) else comp
    for f in c.morphisms:
        x, y = c.src(f), c.tgt(f)
        fy = alpha.src.fibre(y)
        src = compose_functors(comps[x], alpha.src.fmap(f))
        tgt = compose_functors(alpha.tgt.fmap(f), comps[y])
        wit[f] = NatTransData(src, tgt, {a: alpha.witness(f, a) for a in fy.objects}, f"{alpha.name}_{f}")
    return PseudoNatData(alpha.src, alpha.tgt, comps, wit, alpha.name)


def check_pseudonat(alpha, samples=None):
    """Witness typing, naturality in the fibre, invertibility, unit and pasting coherence."""
    rep = Report(f"pseudonatural {alpha.name}")
    fp, ep = alpha.src, alpha.tgt
    c = fp.base
    if ep.base is not c and ep.base != c:
        raise ShapeMismatch("pseudonatural endpoints live over different bases")
    for f in c.morphisms:
        x, y = c.src(f), c.tgt(f)
        ex = ep.fibre(x)
        ax, ay = alpha.component(x), alpha.component(y)
        objs = fibre_objects(fp, y, samples)
        for a in objs:
            w = alpha.witness(f, a)
            if ex.src(w) != ax.obj(fp.fmap(f).obj(a)) or ex.tgt(w) != ep.fmap(f).obj(ay.obj(a)):
                rep.add("witness/endpoints", morphism=f, fibre_object=a)
                continue
            if not ex.is_iso(w):
                rep.add("witness/invertible", morphism=f, fibre_object=a)
            if fp.is_identity(f) and w != ex.identity(ax.obj(a)):
                rep.add("witness/unit", morphism=f, fibre_object=a)
        fy = fp.fibre(y)
        if samples is None and isinstance(fy, FinCat):
            for m in fy.morphisms:
                a, b = fy.src(m), fy.tgt(m)
                lhs = ex.compose(alpha.witness(f, b), ax.mor(fp.fmap(f).mor(m)))
                rhs = ex.compose(ep.fmap(f).mor(ay.mor(m)), alpha.witness(f, a))
                if lhs != rhs:
                    rep.add("witness/naturality", morphism=f, fibre_morphism=m)
    if not rep.ok:
        return rep
    for f, g in composable_pairs(c):
        x = c.src(f)
        ex = ep.fibre(x)
        ax = alpha.component(x)
        gf = c.compose(g, f)
        for a in fibre_objects(fp, c.tgt(g), samples):
            lhs = ex.compose(alpha.witness(gf, a), ax.mor(fp.phi(f, g, a)))
            az = alpha.component(c.tgt(g)).obj(a)
            rhs = ex.compose(ep.phi(f, g, az),
                             ex.compose(ep.fmap(f).mor(alpha.witness(g, a)),
                                        alpha.witness(f, fp.fmap(g).obj(a))))
            if lhs != rhs:
                rep.add("pseudonat/coherence", pair=[f, g], fibre_object=a)
    return rep


# ------------------------------------------------------------ modifications

class ModificationData:
    def __init__(self, src, tgt, components, name="eta"):
        self.src, self.tgt, self.name = src, tgt, name
        self.components = dict(components)

    def at(self, x, a):
        comp = self.components[x]
        return comp.at(a) if hasattr(comp, "at") else comp(a)


def check_modification(eta, samples=None):
    rep = Report(f"modification {eta.name}")
    alpha, beta = eta.src, eta.tgt
    fp, ep = alpha.src, alpha.tgt
    c = fp.base
    for x in c.objects:
        ex = ep.fibre(x)
        for a in fibre_objects(fp, x, samples):
            k = eta.at(x, a)
            if ex.src(k) != alpha.component(x).obj(a) or ex.tgt(k) != beta.component(x).obj(a):
                rep.add("modification/endpoints", object=x, fibre_object=a)
        fx = fp.fibre(x)
        if samples is None and isinstance(fx, FinCat) and rep.ok:
            for m in fx.morphisms:
                a, b = fx.src(m), fx.tgt(m)
                if ex.compose(beta.component(x).mor(m), eta.at(x, a)) != ex.compose(eta.at(x, b), alpha.component(x).mor(m)):
                    rep.add("modification/naturality", object=x, fibre_morphism=m)
    if not rep.ok:
        return rep
    for g in c.morphisms:
        x, y = c.src(g), c.tgt(g)
        ex = ep.fibre(x)
        for a in fibre_objects(fp, y, samples):
            lhs = ex.compose(ep.fmap(g).mor(eta.at(y, a)), alpha.witness(g, a))
            rhs = ex.compose(beta.witness(g, a), eta.at(x, fp.fmap(g).obj(a)))
            if lhs != rhs:
                rep.add("modification/square", morphism=g, fibre_object=a)
    return rep


def identity_modification(alpha):
    fp, ep = alpha.src, alpha.tgt
    comps = {}
    for x in fp.base.objects:
        ax, ex = alpha.component(x), ep.fibre(x)
        comps[x] = (lambda ax, ex: (lambda a: ex.identity(ax.obj(a))))(ax, ex)
    return ModificationData(alpha, alpha, comps, f"id_{alpha.name}")


# ------------------------------------------------------------ pasting

def _pseudonat_composite(alpha, beta):
    """beta o alpha for alpha: F => E, beta: E => H."""
    if alpha.tgt is not beta.src:
        raise ShapeMismatch("pseudonaturals are not composable")
    fp, hp = alpha.src, beta.tgt
    c = fp.base

    def component(x):
        return compose_functors(beta.component(x), alpha.component(x))

    def witness(f, a):
        x, y = c.src(f), c.tgt(f)
        hx = hp.fibre(x)
        return hx.compose(beta.witness(f, alpha.component(y).obj(a)),
                          beta.component(x).mor(alpha.witness(f, a)))

    return PseudoNat(fp, hp, component, witness, f"{beta.name}{alpha.name}")


def _modification_vertical(eta, eps):
    """eps o eta for eta: alpha => beta, eps: beta => gamma."""
    if eta.tgt is not eps.src:
        raise ShapeMismatch("modifications are not vertically composable")
    ep = eta.src.tgt
    comps = {}
    for x in ep.base.objects:
        ex = ep.fibre(x)
        comps[x] = (lambda x, ex: (lambda a: ex.compose(eps.at(x, a), eta.at(x, a))))(x, ex)
    return ModificationData(eta.src, eps.tgt, comps, f"{eps.name}.{eta.name}")


def _modification_horizontal(eta, eps):
    """eps * eta for eta: alpha => alpha' (F => E), eps: beta => beta' (E => H),
    using (K * a) o (b * F): component beta'_X(eta_X a) o eps_X(alpha_X a)."""
    if eta.src.tgt is not eps.src.src:
        raise ShapeMismatch("modifications are not horizontally composable")
    src = _pseudonat_composite(eta.src, eps.src)
    tgt = _pseudonat_composite(eta.tgt, eps.tgt)
    hp = eps.src.tgt
    comps = {}
    for x in hp.base.objects:
        hx = hp.fibre(x)

        def comp(a, x=x, hx=hx):
            return hx.compose(eps.tgt.component(x).mor(eta.at(x, a)), eps.at(x, eta.src.component(x).obj(a)))

        comps[x] = comp
    return ModificationData(src, tgt, comps, f"{eps.name}*{eta.name}")


def _whisker(lhs, rhs):
    if isinstance(lhs, ModificationData) and isinstance(rhs, PseudoNat):
        # eta * gamma: precompose with gamma: H => F
        eta, gamma = lhs, rhs
        if gamma.tgt is not eta.src.src:
            raise ShapeMismatch("whiskering endpoints do not match")
        comps = {x: (lambda x: (lambda a: eta.at(x, gamma.component(x).obj(a))))(x)
                 for x in gamma.src.base.objects}
        return ModificationData(_pseudonat_composite(gamma, eta.src), _pseudonat_composite(gamma, eta.tgt),
                                comps, f"{eta.name}*{gamma.name}")
    if isinstance(lhs, PseudoNat) and isinstance(rhs, ModificationData):
        beta, eta = lhs, rhs
        if beta.src is not eta.src.tgt:
            raise ShapeMismatch("whiskering endpoints do not match")
        comps = {x: (lambda x: (lambda a: beta.component(x).mor(eta.at(x, a))))(x)
                 for x in beta.src.base.objects}
        return ModificationData(_pseudonat_composite(eta.src, beta), _pseudonat_composite(eta.tgt, beta),
                                comps, f"{beta.name}*{eta.name}")
    raise ShapeMismatch("whisker needs one pseudonatural and one modification")


def paste(kind, lhs, rhs):
    """Composite of two 2-cells.

    vertical: pseudonaturals lhs: F => E then rhs: E => H, or modifications lhs then rhs.
    horizontal: Godement product rhs * lhs of modifications; for two pseudonaturals
    this is their 1-cell composite (the same as vertical).
    whisker: one pseudonatural and one modification, in either order.
    """
    if kind == "vertical":
        if isinstance(lhs, ModificationData) and isinstance(rhs, ModificationData):
            return _modification_vertical(lhs, rhs)
        if isinstance(lhs, PseudoNat) and isinstance(rhs, PseudoNat):
            return _pseudonat_composite(lhs, rhs)
    elif kind == "horizontal":
        if isinstance(lhs, ModificationData) and isinstance(rhs, ModificationData):
            return _modification_horizontal(lhs, rhs)
        if isinstance(lhs, PseudoNat) and isinstance(rhs, PseudoNat):
            return _pseudonat_composite(lhs, rhs)
    elif kind == "whisker":
        return _whisker(lhs, rhs)
    raise ShapeMismatch(f"cannot paste {type(lhs).__name__} with {type(rhs).__name__} as {kind}")


# ------------------------------------------------------------ twisting

def natural_automorphisms(functor):
    """All natural automorphisms of a functor between finite categories, as dicts a -> component."""
    c, d = functor.src, functor.tgt
    objs = list(c.objects)
    choices = [[m for m in d.hom(functor.obj(a), functor.obj(a)) if d.is_iso(m)] for a in objs]
    pos = {a: i for i, a in enumerate(objs)}
    checks = [[] for _ in objs]
    for m in c.morphisms:
        checks[max(pos[c.src(m)], pos[c.tgt(m)])].append(m)
    out, cur = [], {}

    def go(i):
        if i == len(objs):
            out.append(dict(cur))
            return
        for k in choices[i]:
            cur[objs[i]] = k
            if all(d.compose(functor.mor(m), cur[c.src(m)]) == d.compose(cur[c.tgt(m)], functor.mor(m))
                   for m in checks[i]):
                go(i + 1)
        cur.pop(objs[i], None)

    go(0)
    return out


def twist(p, seed=0, rng=None):
    """Conjugate the compositors of p by seeded natural automorphisms c_u of F(u):
    phi'_{u,v} = c_{vu} o phi_{u,v} o (c_u * c_v)^{-1}.  Returns (p', tau) where
    tau: p => p' is the pseudonatural with identity components and witnesses c_u."""
    rng = rng or random.Random(seed)
    c = p.base
    chosen = {}
    for u in c.morphisms:
        ff = p.fmap(u)
        if p.is_identity(u):
            chosen[u] = {a: ff.tgt.identity(ff.obj(a)) for a in ff.src.objects}
        else:
            auts = natural_automorphisms(ff)
            chosen[u] = auts[rng.randrange(len(auts))]
    compositor = {}
    for u, v in composable_pairs(c):
        x = c.src(u)
        fx = p.fibre(x)
        fu, fv = p.fmap(u), p.fmap(v)
        vu = c.compose(v, u)
        comps = {}
        for a in p.fibre(c.tgt(v)).objects:
            horiz = fx.compose(chosen[u][fv.obj(a)], fu.mor(chosen[v][a]))
            comps[a] = fx.compose(chosen[vu][a], fx.compose(p.phi(u, v, a), fx.inverse(horiz)))
        old = p.compositor[(u, v)] if isinstance(p, PseudofunctorData) else None
        src = old.src if old is not None else compose_functors(fu, fv)
        tgt = old.tgt if old is not None else p.fmap(vu)
        compositor[(u, v)] = NatTransData(src, tgt, comps, f"phi_{u},{v}")
    fibres = {x: p.fibre(x) for x in c.objects}
    functors = {f: p.fmap(f) for f in c.morphisms}
    q = PseudofunctorData(c, fibres, functors, compositor, f"{getattr(p, 'name', 'F')}~")
    comps = {x: identity_functor(fibres[x]) for x in c.objects}
    wit = {u: NatTransData(functors[u], functors[u], chosen[u], f"c_{u}") for u in c.morphisms}
    return q, PseudoNatData(p, q, comps, wit, "twist")


def is_strict(p):
    c = p.base
    for f, g in composable_pairs(c):
        fx = p.fibre(c.src(f))
        for a in p.fibre(c.tgt(g)).objects:
            if p.phi(f, g, a) != fx.identity(p.fmap(c.compose(g, f)).obj(a)):
                return False
    return True
