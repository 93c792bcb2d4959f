"""Pre-equivariant pseudofunctors over resolution categories of finite free G-sets.

The base pseudofunctor sends a finite set S to K^S (families of objects of a
fibre category K indexed by S) and a map u to reindexing along u.  It can be
twisted by a coboundary of central automorphisms of K so that its compositors
are not identities.  A pre-equivariant pseudofunctor is its composite with the
orbit-set functor of a resolution category."""
import hashlib
import json
from fractions import Fraction
from itertools import product

from . import canon
from .errors import (EnumerationCapExceeded, EquivariantificationUndefined, MalformedTable,
                     MissingRegularResolution, NotClosedUnderInduction, NotFree, ResolutionNotClosed,
                     ShapeMismatch)
from .fincat import FinCat, Functor, FunctorData, NatTransData, compose_functors, identity_functor
from .functors import TranslationData, translate_morphism, translate_object, translation_pseudonat
from .gsets import (FINSETS, FinMap, GSet, Induced, conjugation_gset, equivariant_maps, is_equivariant,
                    product_gset, regular, restrict)
from .matrix import Matrix, MatQ
from .pseudocone import PCMorphism, PCObject, validate_family, validate_morphism
from .report import Report
from .twocat import Pseudofunctor, natural_automorphisms

MAX_RESOLUTION_MORPHISMS = 2000


# ------------------------------------------------------------ K^S

class PowerCategory:
    """K^S for a finite set S: objects and morphisms are tuples indexed by sorted S."""

    def __init__(self, k, s):
        self.k, self.points = k, tuple(s)
        self.index = {x: i for i, x in enumerate(self.points)}
        self.name = f"{k.name}^{len(self.points)}"
        self._objects = None

    @property
    def objects(self):
        if self._objects is None:
            self._objects = [tuple(o) for o in product(*[self.k.objects] * len(self.points))]
        return self._objects

    def src(self, m):
        return tuple(self.k.src(c) for c in m)

    def tgt(self, m):
        return tuple(self.k.tgt(c) for c in m)

    def identity(self, a):
        return tuple(self.k.identity(c) for c in a)

    def compose(self, g, f):
        return tuple(self.k.compose(a, b) for a, b in zip(g, f))

    def inverse(self, m):
        out = []
        for c in m:
            i = self.k.inverse(c)
            if i is None:
                return None
            out.append(i)
        return tuple(out)

    def is_iso(self, m):
        return self.inverse(m) is not None

    def hom(self, a, b):
        return [tuple(h) for h in product(*[self.k.hom(x, y) for x, y in zip(a, b)])]

    def has_object(self, a):
        return (isinstance(a, tuple) and len(a) == len(self.points)
                and all(self.k.has_object(c) for c in a))

    def morphism_count(self):
        return self.k.morphism_count() ** len(self.points)


class Reindex(Functor):
    """u^*: K^T -> K^S for u: S -> T."""

    def __init__(self, k, u, src_cat, tgt_cat):
        self.u, self.src, self.tgt = u, src_cat, tgt_cat
        self.name = "reindex"
        idx = src_cat.index
        self._pick = tuple(idx[u(s)] for s in u.src)

    def obj(self, a):
        return tuple(a[i] for i in self._pick)

    def mor(self, m):
        return tuple(m[i] for i in self._pick)


def central_elements(k):
    """Natural automorphisms of Id_K as (apply, apply_inverse) pairs; the identity comes first."""
    if isinstance(k, MatQ):
        return [((lambda lam: lambda n: _scalar(n, lam))(lam),
                 (lambda lam: lambda n: _scalar(n, 1 / lam))(lam)) for lam in k.center()]
    autos = natural_automorphisms(identity_functor(k))
    ident = {a: k.identity(a) for a in k.objects}
    autos.sort(key=lambda d: d != ident)
    return [((lambda d: lambda a: d[a])(d), (lambda d: lambda a: k.inverse(d[a]))(d)) for d in autos]


_SCALARS = {}


def _scalar(n, lam):
    key = (n, lam)
    if key not in _SCALARS:
        _SCALARS[key] = Matrix.scalar(n, lam)
    return _SCALARS[key]


class FamilyPseudofunctor(Pseudofunctor):
    """S -> K^S on finite sets, optionally twisted by the coboundary of a
    deterministic choice t(u, s) of central automorphisms (t = 1 on identities)."""

    def __init__(self, k, twisted=False, seed=0, name=None):
        self.k, self.twisted, self.seed = k, twisted, seed
        self.base = FINSETS
        self.centers = central_elements(k) if twisted else [(k.identity, k.identity)]
        self.name = name or f"{'twisted ' if twisted else ''}{k.name}^(-)"
        self._fibres, self._fmaps, self._t = {}, {}, {}

    def fibre(self, s):
        if s not in self._fibres:
            self._fibres[s] = PowerCategory(self.k, s)
        return self._fibres[s]

    def fmap(self, u):
        if u not in self._fmaps:
            self._fmaps[u] = Reindex(self.k, u, self.fibre(u.tgt), self.fibre(u.src))
        return self._fmaps[u]

    def is_identity(self, u):
        return u.is_identity()

    def twist_index(self, u, s):
        if not self.twisted or len(self.centers) == 1 or u.is_identity():
            return 0
        key = (u, s)
        if key not in self._t:
            digest = hashlib.sha256(f"{self.seed}|{u.key()}|{canon.key(s)}".encode()).digest()
            self._t[key] = int.from_bytes(digest[:8], "big") % len(self.centers)
        return self._t[key]

    def twist_component(self, u, s, obj, inverse=False):
        pair = self.centers[self.twist_index(u, s)]
        return pair[1 if inverse else 0](obj)

    def phi(self, u, v, a):
        """Component at a in K^U of u^* v^* => (vu)^*: at s it is t(vu,s) t(u,s)^-1 t(v,u s)^-1."""
        k = self.k
        idx = self.fibre(v.tgt).index
        out = []
        vu = FINSETS.compose(v, u) if self.twisted else None
        scalars = isinstance(k, MatQ)
        for s in u.src:
            obj = a[idx[v(u(s))]]
            if not self.twisted:
                out.append(k.identity(obj))
            elif scalars:
                lams = k.center()
                lam = (lams[self.twist_index(vu, s)] / lams[self.twist_index(u, s)]
                       / lams[self.twist_index(v, u(s))])
                out.append(_scalar(obj, lam))
            else:
                out.append(k.compose(self.twist_component(vu, s, obj),
                                     k.compose(self.twist_component(u, s, obj, True),
                                               self.twist_component(v, u(s), obj, True))))
        return tuple(out)

    def phi_inv(self, u, v, a):
        return self.fibre(u.src).inverse(self.phi(u, v, a))


# ------------------------------------------------------------ resolution categories

def _images_key(gamma, fn):
    return json.dumps([canon.plain(fn[x]) for x in gamma.carrier], separators=(",", ":"))


class ResolutionCategory(FinCat):
    """Objects Gamma x X for named free G-sets Gamma; morphisms f x id_X for the
    equivariant maps f generated (under composition) by the supplied ones."""

    def __init__(self, group, space, generators, maps, name=None):
        self.group, self.space = group, space
        self.generators = dict(generators)
        self.order = [n for n, _ in generators]
        self.products, self.quo = {}, {}
        for n, gam in generators:
            if gam.group is not group and gam.group.elements != group.elements:
                raise ShapeMismatch(f"generator {n} is acted on by another group")
            if not gam.is_free():
                raise NotFree(f"generator {n} is not a free {group.name}-set")
            prod = product_gset(gam, space)
            self.products[n] = prod
            self.quo[n] = prod.orbit_reps()
        self.maps = {}
        ends = {}

        def add(s, t, fn):
            mid = f"{s}>{t}:{_images_key(self.generators[s], fn)}"
            if mid not in self.maps:
                self.maps[mid] = dict(fn)
                ends[mid] = (s, t)
                return mid
            return None

        for n in self.order:
            add(n, n, {x: x for x in self.generators[n].carrier})
        frontier = []
        for s, t, fn in maps:
            if s not in self.generators or t not in self.generators:
                raise ResolutionNotClosed(f"map {s} -> {t} mentions an unknown generator")
            if not is_equivariant(self.generators[s], self.generators[t], fn):
                raise MalformedTable(f"map {s} -> {t} is not equivariant")
            mid = add(s, t, fn)
            if mid:
                frontier.append(mid)
        frontier = list(self.maps)
        while frontier:
            new = []
            for f in frontier:
                fs, ft = ends[f]
                for g in list(self.maps):
                    gs, gt = ends[g]
                    if gs == ft:
                        mid = add(fs, gt, {x: self.maps[g][self.maps[f][x]] for x in self.generators[fs].carrier})
                        if mid:
                            new.append(mid)
                    if gt == fs:
                        mid = add(gs, ft, {x: self.maps[f][self.maps[g][x]] for x in self.generators[gs].carrier})
                        if mid:
                            new.append(mid)
            if len(self.maps) > MAX_RESOLUTION_MORPHISMS:
                raise EnumerationCapExceeded(f"resolution category exceeds {MAX_RESOLUTION_MORPHISMS} morphisms")
            frontier = new
        table = {}
        by_src = {}
        for m, (s, _) in ends.items():
            by_src.setdefault(s, []).append(m)
        for f, (fs, ft) in ends.items():
            for g in by_src.get(ft, []):
                gt = ends[g][1]
                table[(g, f)] = self.map_id(fs, gt, {x: self.maps[g][self.maps[f][x]]
                                                     for x in self.generators[fs].carrier})
        ident = {n: self.map_id(n, n, {x: x for x in self.generators[n].carrier}) for n in self.order}
        super().__init__(self.order, [(m, s, t) for m, (s, t) in ends.items()], ident, table,
                         name or f"Resl_{group.name}({space.name})")
        self.quotient = FunctorData(self, FINSETS, {n: self.quo[n] for n in self.order},
                                    {m: self._orbit_map(m) for m in self.morphisms}, "quo")

    def map_id(self, s, t, fn):
        mid = f"{s}>{t}:{_images_key(self.generators[s], fn)}"
        if mid not in self.maps:
            raise ResolutionNotClosed(f"no morphism {mid} in {self.name}")
        return mid

    def find(self, s, t, fn):
        mid = f"{s}>{t}:{_images_key(self.generators[s], fn)}"
        return mid if mid in self.maps else None

    def rep(self, n, elem):
        return self.products[n].rep(elem)

    def _orbit_map(self, m):
        s, t = self.src(m), self.tgt(m)
        fn = self.maps[m]
        return FinMap(self.quo[s], self.quo[t], lambda r: self.rep(t, (fn[r[0]], r[1])))

    def orbit_map(self, other, s, t, fn):
        """The map of orbit sets quo(s x X) -> other.quo(t x Y) induced by fn on representatives."""
        return FinMap(self.quo[s], other.quo[t], lambda r: other.rep(t, fn(r)))

    def regular_name(self):
        g = self.group
        for n in self.order:
            gam = self.generators[n]
            if gam.carrier == sorted(g.elements) and all(gam.act(a, b) == g.mul(a, b)
                                                         for a in g.elements for b in g.elements):
                return n
        raise MissingRegularResolution(f"{self.name} has no regular generator")


def build_resolutions(group, space, generators=None, maps=None, name=None):
    """generators: list of (name, free G-set); maps: list of (src, tgt, dict) or None for
    every equivariant map between generators."""
    if generators is None:
        from .gsets import diagonal_power
        generators = [("G", regular(group, "G")), ("GxG", diagonal_power(group, 2)),
                      ("GxGxG", diagonal_power(group, 3))]
    generators = [(n, g) if isinstance(n, str) else (g.name, g) for n, g in
                  (x if isinstance(x, tuple) else (x.name, x) for x in generators)]
    for n, g in generators:
        if not g.is_free():
            raise NotFree(f"generator {n} is not a free {group.name}-set")
    if maps is None:
        maps = all_maps(generators)
    return ResolutionCategory(group, space, generators, maps, name)


def all_maps(generators):
    total = 0
    out = []
    for s, gs in generators:
        for t, gt in generators:
            reps = len(gs.orbit_reps())
            total += len(gt.carrier) ** reps
            if total > MAX_RESOLUTION_MORPHISMS * 4:
                raise EnumerationCapExceeded("too many equivariant maps between generators; pass maps explicitly")
            out.extend((s, t, fn) for fn in equivariant_maps(gs, gt))
    return out


# ------------------------------------------------------------ pre-equivariant pseudofunctors

class PreEq(Pseudofunctor):
    """F = Fbar o quo^op on a resolution category."""

    def __init__(self, resl, fbar, name=None):
        self.resl, self.fbar, self.base = resl, fbar, resl
        self.name = name or f"{fbar.name} o quo[{resl.name}]"

    def fibre(self, n):
        return self.fbar.fibre(self.resl.quo[n])

    def fmap(self, f):
        return self.fbar.fmap(self.resl.quotient.mor(f))

    def phi(self, f, g, a):
        q = self.resl.quotient
        return self.fbar.phi(q.mor(f), q.mor(g), a)

    def phi_inv(self, f, g, a):
        q = self.resl.quotient
        return self.fbar.phi_inv(q.mor(f), q.mor(g), a)


class NaiveData:
    """Objects V_x of K and isomorphisms rho[(g, x)]: V_x -> V_{g x}."""

    def __init__(self, values, rho):
        self.values, self.rho = dict(values), dict(rho)


def check_naive(k, space, data):
    rep = Report("naive equivariant data")
    g = space.group
    for x in space.carrier:
        if data.rho[(g.e, x)] != k.identity(data.values[x]):
            rep.add("unit", point=x)
        for a in g.elements:
            m = data.rho[(a, x)]
            if k.src(m) != data.values[x] or k.tgt(m) != data.values[space.act(a, x)]:
                rep.add("endpoints", element=a, point=x)
                continue
            for b in g.elements:
                lhs = data.rho[(g.mul(a, b), x)]
                rhs = k.compose(data.rho[(a, space.act(b, x))], data.rho[(b, x)])
                if lhs != rhs:
                    rep.add("cocycle", pair=[a, b], point=x)
    return rep


def descend(p, data):
    """The PC object with A_Gamma[(gamma, x)] = V_x on orbit representatives and
    transitions rho_{k, x'} corrected by the twist of the base pseudofunctor."""
    resl, fbar = p.resl, p.fbar
    k = fbar.k
    family = {n: tuple(data.values[r[1]] for r in resl.quo[n]) for n in resl.order}
    trans = {}
    for f in resl.morphisms:
        s, t = resl.src(f), resl.tgt(f)
        fn = resl.maps[f]
        u = resl.quotient.mor(f)
        prod_t = resl.products[t]
        comps = []
        for r in resl.quo[s]:
            gamma, x = r
            image = (fn[gamma], x)
            r2 = prod_t.rep(image)
            kk = prod_t.translator(r2, image)
            iota = data.rho[(kk, r2[1])]
            comps.append(k.compose(iota, fbar.twist_component(u, r, data.values[r2[1]], inverse=True)))
        trans[f] = tuple(comps)
    return PCObject(family, trans)


def descend_morphism(p, a, b, components):
    """A cone morphism from a family of maps m_x: V_x -> W_x commuting with the actions."""
    resl = p.resl
    return PCMorphism(a, b, {n: tuple(components[r[1]] for r in resl.quo[n]) for n in resl.order})


def random_naive_data(k, space, rng, max_dim=2):
    """Random equivariant data for a cyclic group (elements '0'..'n-1') acting on space."""
    g = space.group
    n = g.order()
    to_int = (lambda a: 0) if n == 1 else int
    from_int = (lambda i: g.e) if n == 1 else (lambda i: str(i % n))
    values, rho = {}, {}
    for x0 in space.orbit_reps():
        orbit = sorted({space.act(a, x0) for a in g.elements})
        size = len(orbit)
        m = n // size
        v = _random_object(k, rng, max_dim)
        gen = _random_root(k, v, m, rng)
        step = {}
        for i in range(size):
            step.setdefault(space.act(from_int(i), x0), i)
        frame = {x: (k.identity(v) if x == x0 else _random_auto(k, v, rng)) for x in orbit}
        for x in orbit:
            values[x] = v
        for a in g.elements:
            for x in orbit:
                y = space.act(a, x)
                j = (step[y] * -1 + to_int(a) + step[x]) % n
                assert j % size == 0
                power = _power(k, gen, j // size, v)
                rho[(a, x)] = k.compose(frame[y], k.compose(power, k.inverse(frame[x])))
    return NaiveData(values, rho)


def _random_object(k, rng, max_dim):
    if isinstance(k, MatQ):
        return rng.randint(1, min(max_dim, k.n))
    return rng.choice(k.objects)


def _power(k, m, e, obj):
    out = k.identity(obj)
    for _ in range(e):
        out = k.compose(m, out)
    return out


def _random_auto(k, v, rng):
    if isinstance(k, MatQ):
        while True:
            m = Matrix(v, v, [Fraction(rng.randint(-3, 3)) for _ in range(v * v)])
            if m.inverse() is not None:
                return m
    return rng.choice([m for m in k.hom(v, v) if k.is_iso(m)])


def _random_root(k, v, order, rng):
    """An automorphism of v whose order divides `order`."""
    if isinstance(k, MatQ):
        p = _random_auto(k, v, rng)
        if v > 1 and order % v == 0 and rng.random() < 0.5:
            core = Matrix.from_rows([[1 if i == (j + 1) % v else 0 for j in range(v)] for i in range(v)])
        else:
            signs = [rng.choice([1, -1]) if order % 2 == 0 else 1 for _ in range(v)]
            core = Matrix.from_rows([[signs[i] if i == j else 0 for j in range(v)] for i in range(v)])
        return p @ core @ p.inverse()
    roots = [m for m in k.hom(v, v) if k.is_iso(m) and _power(k, m, order, v) == k.identity(v)]
    return rng.choice(roots)


# ------------------------------------------------------------ pullbacks along equivariant maps

def inclusion_functor(small, big):
    """Resl -> Resl' on shared generator names and morphism ids; ResolutionNotClosed otherwise."""
    for m in small.morphisms:
        if not big.has_morphism(m):
            raise ResolutionNotClosed(f"{m} of {small.name} is missing from {big.name}")
    return FunctorData(small, big, {n: n for n in small.objects}, {m: m for m in small.morphisms}, "incl")


def orbit_transformation(src_resl, tgt_resl, fn, name="q"):
    """Natural transformation quo_src => quo_tgt o incl from a pointwise map on Gamma x Y."""
    gamma = inclusion_functor(src_resl, tgt_resl)
    comps = {n: src_resl.orbit_map(tgt_resl, n, n, fn) for n in src_resl.objects}
    return gamma, NatTransData(src_resl.quotient, compose_functors(tgt_resl.quotient, gamma), comps, name)


def pullback_pseudonat(fbar, src_resl, tgt_resl, point_map, name="h*"):
    """The pseudonatural (F o quo_tgt o incl) => (F o quo_src) whose change-of-fibre is
    pullback along an equivariant map Y -> X given on points by point_map."""
    gamma, alpha = orbit_transformation(src_resl, tgt_resl, lambda r: (r[0], point_map(r[1])), name)
    t = TranslationData(gamma, src_resl.quotient, tgt_resl.quotient, alpha, fbar)
    h = translation_pseudonat(t)
    h.name = name
    return h


class Pullback:
    def __init__(self, fbar, src_resl, tgt_resl, point_map, name="h*"):
        self.pseudonat = pullback_pseudonat(fbar, src_resl, tgt_resl, point_map, name)
        self.name = name

    def obj(self, a):
        return translate_object(self.pseudonat, a)

    def mor(self, m, src=None, tgt=None):
        return translate_morphism(self.pseudonat, m, src, tgt)


# ------------------------------------------------------------ naivification

class Naivification:
    """Gamma_c = Gamma x G with h.(gamma, g) = (h gamma, h g h^-1), a(gamma, g) = g^-1 gamma,
    p(gamma, g) = gamma."""

    def __init__(self, group, gamma, name=None):
        if not gamma.is_free():
            raise NotFree(f"{gamma.name} is not free")
        g = group
        self.group, self.gamma = g, gamma
        carrier = [(c, a) for c in gamma.carrier for a in g.elements]
        self.space = GSet(g, carrier, lambda h, p: (gamma.act(h, p[0]), g.conj(h, p[1])),
                          name or f"{gamma.name}c")
        self.a = {p: gamma.act(g.inv(p[1]), p[0]) for p in carrier}
        self.p = {p: p[0] for p in carrier}

    def lift(self, fn):
        """f x id_G: Gamma_c -> Gamma'_c."""
        return {(c, a): (fn[c], a) for c, a in self.space.carrier}


def check_naivification(nv, others=()):
    """Equivariance of a and p, and the naturality squares against maps f: Gamma -> Gamma'."""
    rep = Report(f"naivification of {nv.gamma.name}")
    if not is_equivariant(nv.space, nv.gamma, nv.a):
        rep.add("a/equivariant")
    if not is_equivariant(nv.space, nv.gamma, nv.p):
        rep.add("p/equivariant")
    for other, fn in others:
        lifted = {pt: (fn[pt[0]], pt[1]) for pt in nv.space.carrier}
        if not is_equivariant(nv.space, other.space, lifted):
            rep.add("lift/equivariant")
        for pt in nv.space.carrier:
            if other.a[lifted[pt]] != fn[nv.a[pt]]:
                rep.add("a/naturality", point=pt)
            if other.p[lifted[pt]] != fn[nv.p[pt]]:
                rep.add("p/naturality", point=pt)
    return rep


def action_space(group, space, name=None):
    """G x X with h.(g, x) = (h g h^-1, h x)."""
    return product_gset(conjugation_gset(group), space, name or f"{group.name}x{space.name}")


def double_action_space(group, space, name=None):
    g = group
    carrier = [(a, b, x) for a in g.elements for b in g.elements for x in space.carrier]
    return GSet(g, carrier, lambda h, t: (g.conj(h, t[0]), g.conj(h, t[1]), space.act(h, t[2])),
                name or f"{g.name}x{g.name}x{space.name}")


class EquivarianceModel:
    """Resolution categories over X (generators L plus their naivifications), over
    G x X and over G x G x X (generators L), sharing one base pseudofunctor."""

    def __init__(self, group, space, fbar, generators=None, maps=None):
        g = group
        if generators is None:
            generators = [("G", regular(g, "G"))]
        self.group, self.space, self.fbar = g, space, fbar
        self.generators = list(generators)
        base_maps = all_maps(self.generators) if maps is None else list(maps)
        self.naive = {n: Naivification(g, gam, f"{n}c") for n, gam in self.generators}
        gens_x = self.generators + [(f"{n}c", nv.space) for n, nv in self.naive.items()]
        maps_x = list(base_maps)
        for s, t, fn in base_maps:
            maps_x.append((f"{s}c", f"{t}c", self.naive[s].lift(fn)))
        for n, nv in self.naive.items():
            maps_x.append((f"{n}c", n, nv.a))
            maps_x.append((f"{n}c", n, nv.p))
        self.gx = action_space(g, space)
        self.ggx = double_action_space(g, space)
        self.resl_x = ResolutionCategory(g, space, gens_x, maps_x)
        self.resl_gx = ResolutionCategory(g, self.gx, self.generators, base_maps)
        self.resl_ggx = ResolutionCategory(g, self.ggx, self.generators, base_maps)
        self.p_x = PreEq(self.resl_x, fbar, "F_X")
        self.p_gx = PreEq(self.resl_gx, fbar, "F_GX")
        self.p_ggx = PreEq(self.resl_ggx, fbar, "F_GGX")
        self.action_pullback = Pullback(fbar, self.resl_gx, self.resl_x, lambda t: space.act(t[0], t[1]), "act*")
        self.projection_pullback = Pullback(fbar, self.resl_gx, self.resl_x, lambda t: t[1], "pr*")
        self.face = {
            0: Pullback(fbar, self.resl_ggx, self.resl_gx, lambda t: (t[1], t[2]), "d0*"),
            1: Pullback(fbar, self.resl_ggx, self.resl_gx, lambda t: (g.mul(t[0], t[1]), t[2]), "d1*"),
            2: Pullback(fbar, self.resl_ggx, self.resl_gx, lambda t: (t[0], space.act(t[1], t[2])), "d2*"),
        }

    def mu(self, n):
        """[gamma, (g, x)] -> [(gamma, g), x]."""
        return self.resl_gx.orbit_map(self.resl_x, n, f"{n}c", lambda r: ((r[0], r[1][0]), r[1][1]))

    def descend(self, data):
        return descend(self.p_x, data)


def equivariance_theta(model, a):
    """Theta_A: act^* A -> pr^* A with theta_Gamma = phi_{mu,p} o F(mu)(tau_p^-1 tau_a) o phi_{mu,a}^-1."""
    rx, fbar = model.resl_x, model.fbar
    src = model.action_pullback.obj(a)
    tgt = model.projection_pullback.obj(a)
    comps = {}
    for n, nv in model.naive.items():
        nc = f"{n}c"
        a_id = rx.find(nc, n, nv.a)
        p_id = rx.find(nc, n, nv.p)
        if a_id is None or p_id is None:
            raise ResolutionNotClosed(f"naivification maps for {n} are missing")
        qa, qp = rx.quotient.mor(a_id), rx.quotient.mor(p_id)
        mu = model.mu(n)
        fc = model.p_x.fibre(nc)
        inner = fc.compose(fc.inverse(a.transitions[p_id]), a.transitions[a_id])
        fibre = fbar.fibre(mu.src)
        theta = fibre.compose(fbar.phi(mu, qp, a.family[n]),
                              fibre.compose(fbar.fmap(mu).mor(inner), fbar.phi_inv(mu, qa, a.family[n])))
        comps[n] = theta
    return PCMorphism(src, tgt, comps)


def check_theta(model, a, theta):
    rep = Report("equivariance")
    rep.extend(validate_family(model.p_gx, theta.src), "act*A")
    rep.extend(validate_family(model.p_gx, theta.tgt), "pr*A")
    if not rep.ok:
        return rep
    rep.extend(validate_morphism(model.p_gx, theta), "theta")
    for n, m in theta.components.items():
        if not model.p_gx.fibre(n).is_iso(m):
            rep.add("theta/invertible", generator=n)
    return rep


def check_theta_naturality(model, morphism):
    """pr^*(P) o Theta_A = Theta_B o act^*(P)."""
    rep = Report("equivariance naturality")
    ta = equivariance_theta(model, morphism.src)
    tb = equivariance_theta(model, morphism.tgt)
    lhs_p = model.projection_pullback.mor(morphism, ta.tgt, tb.tgt)
    rhs_p = model.action_pullback.mor(morphism, ta.src, tb.src)
    for n in model.resl_gx.objects:
        fb = model.p_gx.fibre(n)
        if fb.compose(lhs_p.components[n], ta.components[n]) != fb.compose(tb.components[n], rhs_p.components[n]):
            rep.add("theta/naturality", generator=n)
    return rep


def check_git_cocycle(model, a, theta):
    """d1^*Theta = d0^*Theta o d2^*Theta over G x G x X, each face corrected by the
    compositors of the base pseudofunctor so that all three live between the
    reindexings along the composite orbit maps."""
    rep = Report("GIT cocycle")
    fbar = model.fbar
    rx, rgx, rggx = model.resl_x, model.resl_gx, model.resl_ggx
    q_act = model.action_pullback.pseudonat
    q_pr = model.projection_pullback.pseudonat
    for n in rggx.objects:
        fibre = model.p_ggx.fibre(n)
        an = a.family[n]
        qa = _component_map(q_act, n)
        qp = _component_map(q_pr, n)
        corrected = {}
        for i, face in model.face.items():
            d = _component_map(face.pseudonat, n)
            raw = fbar.fmap(d).mor(theta.components[n])
            corrected[i] = (fibre.compose(fbar.phi(d, qp, an), fibre.compose(raw, fbar.phi_inv(d, qa, an))),
                            FINSETS.compose(qa, d), FINSETS.compose(qp, d))
        (c0, s0, t0), (c1, s1, t1), (c2, s2, t2) = corrected[0], corrected[1], corrected[2]
        if not (s1 == s2 and t2 == s0 and t0 == t1):
            rep.add("git/typing", generator=n)
            continue
        lhs = c1
        rhs = fibre.compose(c0, c2)
        if lhs != rhs:
            bad = next(i for i, (l, r) in enumerate(zip(lhs, rhs)) if l != r)
            rep.add("git/cocycle", generator=n, orbit=canon.plain(rggx.quo[n][bad]))
    return rep


def _component_map(pseudonat, n):
    """The orbit map a pullback pseudonatural reindexes along at generator n."""
    return pseudonat.component(n).u


# ------------------------------------------------------------ forgetful functor and equivariantification

class ForgetfulPair:
    def __init__(self, p, regular_name, psi, quotient_maps):
        self.p, self.regular_name, self.psi = p, regular_name, psi
        self.quotient_maps = quotient_maps

    def forget(self, a):
        return self.p.fbar.fmap(self.psi).obj(a.family[self.regular_name])

    def forget_mor(self, m):
        return self.p.fbar.fmap(self.psi).mor(m.components[self.regular_name])

    def eq(self, b):
        if self.quotient_maps is None:
            raise EquivariantificationUndefined("the action is not trivial, so quo(Gamma x X) -> X is undefined")
        p, fbar, resl = self.p, self.p.fbar, self.p.resl
        family = {n: fbar.fmap(self.quotient_maps[n]).obj(b) for n in resl.order}
        trans = {}
        for f in resl.morphisms:
            t = resl.tgt(f)
            trans[f] = fbar.phi(resl.quotient.mor(f), self.quotient_maps[t], b)
        return PCObject(family, trans)

    def eq_mor(self, m):
        """Eq on a morphism of K^X."""
        if self.quotient_maps is None:
            raise EquivariantificationUndefined("the action is not trivial")
        power = self.p.fbar.fibre(self.psi.src)
        comps = {n: self.p.fbar.fmap(self.quotient_maps[n]).mor(m) for n in self.p.resl.order}
        return PCMorphism(self.eq(power.src(m)), self.eq(power.tgt(m)), comps)

    def nu(self, b):
        """Forget(Eq(B)) -> B, the compositor phi_{psi, Gbar}."""
        n = self.regular_name
        return self.p.fbar.phi(self.psi, self.quotient_maps[n], b)


def forgetful_pair(p):
    resl = p.resl
    n = resl.regular_name()
    x = resl.space
    g = resl.group
    points = tuple(x.carrier)
    psi = FinMap(points, resl.quo[n], lambda pt: resl.rep(n, (g.e, pt)))
    trivial = all(x.act(a, pt) == pt for a in g.elements for pt in x.carrier)
    qmaps = None
    if trivial:
        qmaps = {m: FinMap(resl.quo[m], points, lambda r: r[1]) for m in resl.order}
    return ForgetfulPair(p, n, psi, qmaps)


def check_forgetful_pair(pair, objects):
    """Eq(B) is a cone, nu_B is invertible and natural, Forget(Eq(B)) is its source."""
    rep = Report("forget/eq")
    power = pair.p.fbar.fibre(pair.psi.src)
    for b in objects:
        e = pair.eq(b)
        rep.extend(validate_family(pair.p, e), "Eq")
        nu = pair.nu(b)
        if power.src(nu) != pair.forget(e) or power.tgt(nu) != b:
            rep.add("nu/endpoints")
        elif not power.is_iso(nu):
            rep.add("nu/invertible")
    return rep


# ------------------------------------------------------------ towers of groups and change of groups

class Tower:
    """Groups G_0 -> ... -> G_n, a G_n-set X, and at each level a resolution category
    whose generators are induction words: a regular generator of a lower level
    followed by a composition of the hom chain into segments."""

    def __init__(self, homs, space, fbar, extra_spaces=None):
        self.homs = list(homs)
        self.groups = [homs[0].src] + [h.tgt for h in homs] if homs else [space.group]
        self.n = len(self.groups) - 1
        self.fbar = fbar
        self.top_space = space
        self.spaces = [self._restrict_to(i, space) for i in range(self.n + 1)]
        self.words = {i: {} for i in range(self.n + 1)}
        self.maps = {i: [] for i in range(self.n + 1)}
        self.resl, self.preeq = {}, {}
        for i in range(self.n + 1):
            self._build_level(i)
            self.resl[i] = ResolutionCategory(self.groups[i], self.spaces[i],
                                              [(w, info[0]) for w, info in self.words[i].items()],
                                              self.maps[i], f"Resl_{self.groups[i].name}#{i}")
            self.preeq[i] = PreEq(self.resl[i], fbar, f"F_{i}")

    def hom(self, a, b):
        """The composite G_a -> G_b."""
        from .gsets import identity_hom
        h = identity_hom(self.groups[a])
        for i in range(a, b):
            h = h.then(self.homs[i])
        return h

    def _restrict_to(self, i, space):
        if i == self.n:
            return space
        return restrict(self.hom(i, self.n), space, space.name)

    def _build_level(self, i):
        g = self.groups[i]
        own = f"R{i}"
        words = self.words[i]
        reg = regular(g, own)
        words[own] = (reg, (i, ()), lambda z: z)
        # words from lower levels: every composition of [j, i] into segments
        for j in range(i):
            for cuts in product([False, True], repeat=i - j - 1):
                ends = [k for k, c in zip(range(j + 1, i), cuts) if c] + [i]
                self._word(i, j, tuple(ends))
        for a in g.elements:
            self.maps[i].append((own, own, {z: g.mul(z, a) for z in reg.carrier}))
        for w, (gam, (j, ends), value) in list(words.items()):
            if w != own:
                self.maps[i].append((w, own, {z: value(z) for z in gam.carrier}))
            if len(ends) >= 2:
                inner_name = self._name(j, ends[:-2] + (ends[-1],))
                target = words[inner_name][0]
                self.maps[i].append((w, inner_name, {z: self._merge(j, ends, gam, target, z) for z in gam.carrier}))
        for k in range(i):
            for s, t, fn in self.maps[k]:
                s2, t2 = self._extend(k, s, i), self._extend(k, t, i)
                gs, gt = words[s2][0], words[t2][0]
                self.maps[i].append((s2, t2, {z: gt.cls(z[0], fn[z[1]]) for z in gs.carrier}))

    def _extend(self, k, name, i):
        gam, (j, ends), _ = self.words[k][name]
        return self._name(j, ends + (i,))

    def _name(self, j, ends):
        return f"R{j}" + "".join(f">{e}" for e in ends)

    def _word(self, i, j, ends):
        name = self._name(j, ends)
        if name in self.words[i]:
            return self.words[i][name]
        if len(ends) == 1:
            inner_name, prev = f"R{j}", j
        else:
            inner_name, prev = self._name(j, ends[:-1]), ends[-2]
        inner = self.words[prev][inner_name]
        gam = Induced(self.hom(prev, i), inner[0], name)
        h = self.hom(prev, i)
        inner_value = inner[2]
        value = (lambda h, inner_value, g: (lambda z: g.mul(z[0], h(inner_value(z[1])))))(h, inner_value, self.groups[i])
        self.words[i][name] = (gam, (j, ends), value)
        return self.words[i][name]

    def _merge(self, j, ends, gam, target, z):
        """[h2, [h1, y]] -> [h2 phi(h1), y] merging the last two segments."""
        h2, inner = z
        h1, y = inner
        mid = ends[-2]
        return target.cls(self.groups[ends[-1]].mul(h2, self.hom(mid, ends[-1])(h1)), y)

    def induced_name(self, a, name, b):
        gam, (j, ends), _ = self.words[a][name]
        return self._name(j, ends + (b,))

    def h_map(self, a, b, name):
        """quo_a(Gamma x X) -> quo_b(Ind Gamma x X), [z, x] -> [[e, z], x]."""
        up = self.induced_name(a, name, b)
        ind = self.words[b][up][0]
        return self.resl[a].orbit_map(self.resl[b], name, up, lambda r: (ind.unit(r[0]), r[1]))

    def resolution_over(self, i, space, name=None):
        """Level i generators and maps over a different G_i-set."""
        r = self.resl[i]
        return ResolutionCategory(self.groups[i], space, [(w, r.generators[w]) for w in r.order],
                                  [(r.src(m), r.tgt(m), r.maps[m]) for m in r.morphisms], name)


class ChangeOfGroups:
    """phi^#: F_b(X) -> F_a(X) for levels a <= b of a tower, as the translation along
    Gamma -> G_b x^{G_a} Gamma with the orbit bijections h_Gamma."""

    def __init__(self, tower, a, b):
        self.tower, self.a, self.b = tower, a, b
        ra, rb = tower.resl[a], tower.resl[b]
        obj_map, mor_map = {}, {}
        for w in ra.order:
            obj_map[w] = tower.induced_name(a, w, b)
            if obj_map[w] not in rb.generators:
                raise NotClosedUnderInduction(f"{obj_map[w]} is missing at level {b}")
        for m in ra.morphisms:
            s, t = ra.src(m), ra.tgt(m)
            gs, gt = rb.generators[obj_map[s]], rb.generators[obj_map[t]]
            fn = ra.maps[m]
            mid = rb.find(obj_map[s], obj_map[t], {z: gt.cls(z[0], fn[z[1]]) for z in gs.carrier})
            if mid is None:
                raise NotClosedUnderInduction(f"induced map of {m} is missing at level {b}")
            mor_map[m] = mid
        gamma = FunctorData(ra, rb, obj_map, mor_map, "Ind")
        alpha = NatTransData(ra.quotient, compose_functors(rb.quotient, gamma),
                             {w: tower.h_map(a, b, w) for w in ra.order}, "h")
        self.translation = TranslationData(gamma, ra.quotient, rb.quotient, alpha, tower.fbar)
        self.pseudonat = translation_pseudonat(self.translation)
        self.gamma = gamma
        self.name = f"({a}->{b})#"

    def restrict(self, x):
        g = self.gamma
        return PCObject({w: x.family[g.obj(w)] for w in g.src.objects},
                        {f: x.transitions[g.mor(f)] for f in g.src.morphisms})

    def obj(self, x):
        return translate_object(self.pseudonat, self.restrict(x))

    def mor(self, m, src=None, tgt=None):
        g = self.gamma
        inner = PCMorphism(self.restrict(m.src), self.restrict(m.tgt),
                           {w: m.components[g.obj(w)] for w in g.src.objects})
        return translate_morphism(self.pseudonat, inner, src, tgt)


def change_of_groups(tower, a, b):
    return ChangeOfGroups(tower, a, b)


def chofg_compositor(tower, a, b, c, x):
    """alpha: (psi phi)^# A -> phi^# psi^# A for phi: G_a -> G_b, psi: G_b -> G_c and A over level c."""
    fbar = tower.fbar
    ra, rc = tower.resl[a], tower.resl[c]
    direct = ChangeOfGroups(tower, a, c)
    first, second = ChangeOfGroups(tower, b, c), ChangeOfGroups(tower, a, b)
    src = direct.obj(x)
    mid = first.obj(x)
    tgt = second.obj(mid)
    comps = {}
    for w in ra.order:
        wb = tower.induced_name(a, w, b)
        wbc = tower.induced_name(b, wb, c)
        wc = tower.induced_name(a, w, c)
        gam, target = rc.generators[wbc], rc.generators[wc]
        j, ends = tower.words[c][wbc][1]
        rho = rc.find(wbc, wc, {z: tower._merge(j, ends, gam, target, z) for z in gam.carrier})
        if rho is None:
            raise NotClosedUnderInduction(f"no merge map {wbc} -> {wc}")
        h_ab = tower.h_map(a, b, w)
        h_bc = tower.h_map(b, c, wb)
        rho_bar = rc.quotient.mor(rho)
        h_ac = tower.h_map(a, c, w)
        if FINSETS.compose(rho_bar, FINSETS.compose(h_bc, h_ab)) != h_ac:
            raise ShapeMismatch(f"orbit maps do not close up at {w}")
        fib = fbar.fibre(ra.quo[w])
        tau = x.transitions[rho]
        lifted = fbar.fmap(h_ab).mor(fbar.fmap(h_bc).mor(tau))
        a_c = x.family[wc]
        rho_a = fbar.fmap(rho_bar).obj(a_c)
        hh = FINSETS.compose(h_bc, h_ab)
        comps[w] = fib.compose(lifted, fib.compose(fbar.phi_inv(h_ab, h_bc, rho_a), fbar.phi_inv(hh, rho_bar, a_c)))
    return PCMorphism(src, tgt, comps)


def check_chofg_associativity(tower, x, levels=(0, 1, 2, 3)):
    """(phi01^# * alpha_123) o alpha_{0,1,3} = (alpha_012 * phi23^#) o alpha_{0,2,3} at A = x."""
    i0, i1, i2, i3 = levels
    if not 0 <= i0 <= i1 <= i2 <= i3 <= tower.n:
        raise ShapeMismatch(f"levels {levels} are not increasing within 0..{tower.n}")
    rep = Report("change-of-groups associativity")
    p0 = tower.preeq[i0]
    a013 = chofg_compositor(tower, i0, i1, i3, x)
    a123 = chofg_compositor(tower, i1, i2, i3, x)
    lifted = ChangeOfGroups(tower, i0, i1).mor(a123)
    a023 = chofg_compositor(tower, i0, i2, i3, x)
    a012 = chofg_compositor(tower, i0, i1, i2, ChangeOfGroups(tower, i2, i3).obj(x))
    for label, m in (("alpha013", a013), ("alpha123#", lifted), ("alpha023", a023), ("alpha012", a012)):
        rep.extend(validate_morphism(p0 if label != "alpha123#" else p0, m), label)
    if not rep.ok:
        return rep
    if lifted.src != a013.tgt or a012.src != a023.tgt or lifted.tgt != a012.tgt or a013.src != a023.src:
        rep.add("associativity/endpoints")
        return rep
    for w in tower.resl[i0].order:
        fib = p0.fibre(w)
        lhs = fib.compose(lifted.components[w], a013.components[w])
        rhs = fib.compose(a012.components[w], a023.components[w])
        if lhs != rhs:
            rep.add("associativity/component", generator=w)
    return rep


def check_compositor(tower, a, b, c, x):
    rep = Report("change-of-groups compositor")
    m = chofg_compositor(tower, a, b, c, x)
    pa = tower.preeq[a]
    rep.extend(validate_family(pa, m.src), "source")
    rep.extend(validate_family(pa, m.tgt), "target")
    rep.extend(validate_morphism(pa, m), "alpha")
    for w, comp in m.components.items():
        if not pa.fibre(w).is_iso(comp):
            rep.add("alpha/invertible", generator=w)
    return rep


def deequivariantification(tower, x):
    """For a tower 1 -> G: the iso collapse(1^# A) -> Forget(A), built from the
    transition of A along the collapse map Ind(pt) -> G."""
    if tower.groups[0].order() != 1:
        raise ShapeMismatch("de-equivariantification needs a trivial bottom group")
    fbar = tower.fbar
    r0, r1 = tower.resl[0], tower.resl[1]
    own, word = "R1", tower.induced_name(0, "R0", 1)
    gam, target = r1.generators[word], r1.generators[own]
    value = tower.words[1][word][2]
    rho = r1.find(word, own, {z: value(z) for z in gam.carrier})
    rho_bar = r1.quotient.mor(rho)
    h = tower.h_map(0, 1, "R0")
    points = tuple(r0.space.carrier)
    kappa = FinMap(points, r0.quo["R0"], lambda pt: r0.rep("R0", (tower.groups[0].e, pt)))
    psi = FinMap(points, r1.quo[own], lambda pt: r1.rep(own, (tower.groups[1].e, pt)))
    hk = FINSETS.compose(h, kappa)
    if FINSETS.compose(rho_bar, hk) != psi:
        raise ShapeMismatch("collapse and forgetful orbit maps disagree")
    power = fbar.fibre(points)
    a_g = x.family[own]
    inv_tau = fbar.fibre(r1.quo[word]).inverse(x.transitions[rho])
    back = fbar.fmap(kappa).mor(fbar.fmap(h).mor(inv_tau))
    corr = power.compose(fbar.phi(hk, rho_bar, a_g), fbar.phi(kappa, h, fbar.fmap(rho_bar).obj(a_g)))
    iso = power.compose(corr, back)
    collapsed = fbar.fmap(kappa).obj(ChangeOfGroups(tower, 0, 1).obj(x).family["R0"])
    forgotten = fbar.fmap(psi).obj(a_g)
    return collapsed, forgotten, iso


# ------------------------------------------------------------ induction and quotient equivalences

class EquivalenceCheck(Report):
    def __init__(self, subject):
        super().__init__(subject)
        self.functor = None
        self.adjunction = None
        self.sizes = {}


def _tabulate_functor(obj_fn, mor_fn, pc_src, pc_tgt, name):
    obj_map, mor_map, images = {}, {}, {}
    for k, o in pc_src.pc_objects.items():
        img = obj_fn(o)
        if img.key() not in pc_tgt.pc_objects:
            raise ShapeMismatch(f"{name} sends {k} outside the target")
        obj_map[k], images[k] = img.key(), img
    for k, m in pc_src.pc_morphisms.items():
        img = mor_fn(m, images[m.src.key()], images[m.tgt.key()])
        if img.key() not in pc_tgt.pc_morphisms:
            raise ShapeMismatch(f"{name} sends morphism {k} outside the target")
        mor_map[k] = img.key()
    return FunctorData(pc_src, pc_tgt, obj_map, mor_map, name)


def _finish(rep, functor):
    from .fincat import adjoint_equivalence, check_adjunction, check_equivalence, check_functor
    rep.functor = functor
    rep.extend(check_functor(functor), "functor")
    eq = check_equivalence(functor)
    rep.extend(eq, "equivalence")
    if eq.ok:
        rep.adjunction = adjoint_equivalence(functor)
        rep.extend(check_adjunction(rep.adjunction), "adjoint-equivalence")
    rep.sizes = {"source_objects": len(functor.src.objects), "source_morphisms": len(functor.src.morphisms),
                 "target_objects": len(functor.tgt.objects), "target_morphisms": len(functor.tgt.morphisms)}
    return rep


def check_induction_equivalence(inclusion, space, k, caps=None):
    """F_G(G x^H X) -> F_H(X) as restriction along H -> G followed by pullback along x -> [e, x]."""
    from .pseudocone import enumerate_pc
    if not inclusion.is_injective():
        raise ShapeMismatch("induction needs a subgroup inclusion")
    fbar = FamilyPseudofunctor(k)
    y = Induced(inclusion, space, f"Ind({space.name})")
    tower = Tower([inclusion], y, fbar)
    r_h_x = tower.resolution_over(0, space, f"Resl_{inclusion.src.name}({space.name})")
    p_h_x = PreEq(r_h_x, fbar, "F_H(X)")
    restrict_ = ChangeOfGroups(tower, 0, 1)
    pull = Pullback(fbar, r_h_x, tower.resl[0], lambda pt: y.unit(pt), "j*")
    rep = EquivalenceCheck("induction equivalence")
    pc_g = enumerate_pc(tower.preeq[1], caps=caps)
    pc_h = enumerate_pc(p_h_x, caps=caps)

    def obj(o):
        return pull.obj(restrict_.obj(o))

    def mor(m, s, t):
        return pull.mor(restrict_.mor(m), s, t)

    return _finish(rep, _tabulate_functor(obj, mor, pc_g, pc_h, "j* i#"))


def check_quotient_equivalence(group, normal, space, k, caps=None):
    """F_{G/H}(H\\X) -> F_G(X) as change of groups along G -> G/H followed by pullback along X -> H\\X."""
    from .gsets import quotient_group
    from .pseudocone import enumerate_pc
    q, qhom = quotient_group(group, normal)
    if any(space.act(h, x) == x for h in normal if h != group.e for x in space.carrier):
        raise NotFree(f"{space.name} is not free for the normal subgroup")
    orbit = {x: min(space.act(h, x) for h in normal) for x in space.carrier}
    quotient_space = GSet(q, sorted(set(orbit.values())),
                          lambda c, x: orbit[space.act(c, x)], f"H\\{space.name}")
    fbar = FamilyPseudofunctor(k)
    tower = Tower([qhom], quotient_space, fbar)
    r_g_x = tower.resolution_over(0, space, f"Resl_{group.name}({space.name})")
    p_g_x = PreEq(r_g_x, fbar, "F_G(X)")
    chg = ChangeOfGroups(tower, 0, 1)
    pull = Pullback(fbar, r_g_x, tower.resl[0], lambda pt: orbit[pt], "pi*")
    rep = EquivalenceCheck("quotient equivalence")
    pc_q = enumerate_pc(tower.preeq[1], caps=caps)
    pc_g = enumerate_pc(p_g_x, caps=caps)

    def obj(o):
        return pull.obj(chg.obj(o))

    def mor(m, s, t):
        return pull.mor(chg.mor(m), s, t)

    return _finish(rep, _tabulate_functor(obj, mor, pc_q, pc_g, "pi* q#"))


def check_equivalences(kind, **data):
    if kind == "induction":
        return check_induction_equivalence(data["inclusion"], data["space"], data["k"], data.get("caps"))
    if kind == "quotient":
        return check_quotient_equivalence(data["group"], data["normal"], data["space"], data["k"], data.get("caps"))
    raise ShapeMismatch(f"unknown equivalence kind {kind!r}")
