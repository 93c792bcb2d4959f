"""Pseudocone categories PC(F) and lax cone categories LC(F) by exhaustive
search, with the pseudolimit property, the terminal-object collapse,
fibrewise (co)limits and the componentwise monoidal structure."""
from itertools import product

from . import canon
from .errors import (EnumerationCapExceeded, FibreLimitMissing, IncoherentMonoidalData, NoLimit,
                     NoTerminalObject, NotACone, NotPreserved, UnknownObject)
from .fincat import FinCat, FunctorData, NatTrans, check_functor, compute_limit, mediator
from .report import Report
from .twocat import PseudoNat, check_pseudonat, composable_pairs, constant

DEFAULT_CAPS = {"base_objects": 5, "base_morphisms": 16, "fibre_objects": 4, "fibre_morphisms": 16}


class PCObject:
    """A family A_X with transitions tau_f: F(f)(A_Y) -> A_X."""

    __slots__ = ("family", "transitions", "_key")

    def __init__(self, family, transitions):
        self.family = dict(family)
        self.transitions = dict(transitions)
        self._key = None

    def key(self):
        if self._key is None:
            self._key = canon.key({"A": self.family, "T": self.transitions})
        return self._key

    def __eq__(self, other):
        return isinstance(other, PCObject) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"PCObject({self.family})"


class PCMorphism:
    __slots__ = ("src", "tgt", "components", "_key")

    def __init__(self, src, tgt, components):
        self.src, self.tgt = src, tgt
        self.components = dict(components)
        self._key = None

    def key(self):
        if self._key is None:
            self._key = canon.key({"src": self.src.key(), "tgt": self.tgt.key(), "P": self.components})
        return self._key

    def __eq__(self, other):
        return isinstance(other, PCMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"PCMorphism({self.components})"


def _fibre_of(p, x):
    return p.fibre(x)


def validate_family(p, family, transitions=None, kind="pseudo"):
    """Cocycle, invertibility (pseudo only), typing and tau_id = id."""
    if isinstance(family, PCObject):
        family, transitions = family.family, family.transitions
    c = p.base
    rep = Report("family")
    for x in c.objects:
        if x not in family:
            raise UnknownObject(f"family has no component over {x}")
        fx = p.fibre(x)
        if hasattr(fx, "has_object") and not fx.has_object(family[x]):
            raise UnknownObject(f"{family[x]!r} is not an object of the fibre over {x}")
    for f in c.morphisms:
        if f not in transitions:
            raise UnknownObject(f"family has no transition for {f}")
        x, y = c.src(f), c.tgt(f)
        fx = p.fibre(x)
        t = transitions[f]
        if fx.src(t) != p.fmap(f).obj(family[y]) or fx.tgt(t) != family[x]:
            rep.add("transition/endpoints", morphism=f)
            continue
        if kind == "pseudo" and not fx.is_iso(t):
            rep.add("transition/invertible", morphism=f)
        if p.is_identity(f) and t != fx.identity(family[x]):
            rep.add("transition/tau_id", morphism=f)
    if not rep.ok:
        return rep
    for f, g in composable_pairs(c):
        fx = p.fibre(c.src(f))
        gf = c.compose(g, f)
        az = family[c.tgt(g)]
        lhs = fx.compose(transitions[gf], p.phi(f, g, az))
        rhs = fx.compose(transitions[f], p.fmap(f).mor(transitions[g]))
        if lhs != rhs:
            rep.add("cocycle", pair=[f, g])
    return rep


def validate_morphism(p, m):
    c = p.base
    rep = Report("pc-morphism")
    a, b = m.src, m.tgt
    for x in c.objects:
        if x not in m.components:
            raise UnknownObject(f"morphism has no component over {x}")
        k = p.fibre(x).src(m.components[x]), p.fibre(x).tgt(m.components[x])
        if k != (a.family[x], b.family[x]):
            rep.add("component/endpoints", object=x)
    if not rep.ok:
        return rep
    for f in c.morphisms:
        x, y = c.src(f), c.tgt(f)
        fx = p.fibre(x)
        lhs = fx.compose(b.transitions[f], p.fmap(f).mor(m.components[y]))
        rhs = fx.compose(m.components[x], a.transitions[f])
        if lhs != rhs:
            rep.add("square", morphism=f)
    return rep


def compose_pc(p, g, f):
    c = p.base
    return PCMorphism(f.src, g.tgt, {x: p.fibre(x).compose(g.components[x], f.components[x]) for x in c.objects})


def identity_pc(p, a):
    return PCMorphism(a, a, {x: p.fibre(x).identity(a.family[x]) for x in p.base.objects})


# ------------------------------------------------------------ enumeration

def check_caps(p, caps=None):
    caps = {**DEFAULT_CAPS, **(caps or {})}
    c = p.base
    if len(c.objects) > caps["base_objects"] or c.morphism_count() > caps["base_morphisms"]:
        raise EnumerationCapExceeded(
            f"base has {len(c.objects)} objects / {c.morphism_count()} morphisms; caps are "
            f"{caps['base_objects']} / {caps['base_morphisms']}")
    for x in c.objects:
        fx = p.fibre(x)
        n = len(fx.objects)
        if n > caps["fibre_objects"]:
            raise EnumerationCapExceeded(f"fibre over {x} has {n} objects; cap is {caps['fibre_objects']}")
        m = fx.morphism_count()
        if m > caps["fibre_morphisms"]:
            raise EnumerationCapExceeded(f"fibre over {x} has {m} morphisms; cap is {caps['fibre_morphisms']}")


class _Budget:
    def __init__(self, limit):
        self.limit, self.used = limit, 0

    def tick(self):
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise EnumerationCapExceeded(f"candidate budget of {self.limit} exhausted")


def enumerate_objects(p, kind="pseudo", caps=None, max_candidates=None):
    """Every PC object (pseudo) or lax cone (lax), deterministic order.

    In the pseudo case identity transitions are searched over all automorphisms
    and only pinned down by the cocycle; in the lax case they are fixed to the
    identity (the unit axiom of a lax transformation)."""
    check_caps(p, caps)
    budget = _Budget(max_candidates)
    c = p.base
    xs = list(c.objects)
    mors = [m for m in c.morphisms if kind == "pseudo" or not p.is_identity(m)]
    idx = {m: i for i, m in enumerate(mors)}
    checks = [[] for _ in mors]
    for f, g in composable_pairs(c):
        gf = c.compose(g, f)
        k = max(idx.get(f, -1), idx.get(g, -1), idx.get(gf, -1))
        if k >= 0:
            checks[k].append((f, g, gf))
    out = []
    for objs in product(*[p.fibre(x).objects for x in xs]):
        family = dict(zip(xs, objs))
        trans = {m: p.fibre(m_x).identity(family[m_x]) for m in c.morphisms
                 if kind != "pseudo" and p.is_identity(m) for m_x in [c.src(m)]}

        def go(i):
            budget.tick()
            if i == len(mors):
                out.append(PCObject(family, trans))
                return
            f = mors[i]
            x, y = c.src(f), c.tgt(f)
            fx = p.fibre(x)
            for t in fx.hom(p.fmap(f).obj(family[y]), family[x]):
                if kind == "pseudo" and not fx.is_iso(t):
                    continue
                trans[f] = t
                if all(_cocycle_ok(p, family, trans, f2, g2, gf2) for f2, g2, gf2 in checks[i]):
                    go(i + 1)
            trans.pop(f, None)

        go(0)
    return out


def _cocycle_ok(p, family, trans, f, g, gf):
    c = p.base
    fx = p.fibre(c.src(f))
    lhs = fx.compose(trans[gf], p.phi(f, g, family[c.tgt(g)]))
    rhs = fx.compose(trans[f], p.fmap(f).mor(trans[g]))
    return lhs == rhs


def _hom_order(c):
    """Objects ordered so that later ones usually have an arrow into an earlier one."""
    order, rest = [], list(c.objects)
    while rest:
        forced = [x for x in rest if any(c.hom(x, y) for y in order)]
        if forced:
            pick = forced[0]
        else:
            pick = max(rest, key=lambda y: (sum(len(c.hom(x, y)) for x in rest if x != y), -rest.index(y)))
        order.append(pick)
        rest.remove(pick)
    return order


def pc_hom(p, a, b, kind="pseudo", budget=None):
    """All PC morphisms a -> b, with components forced along invertible transitions."""
    c = p.base
    order = _hom_order(c)
    pos = {x: i for i, x in enumerate(order)}
    squares = [[] for _ in order]
    for f in c.morphisms:
        squares[max(pos[c.src(f)], pos[c.tgt(f)])].append(f)
    out, comp = [], {}

    def square_ok(f):
        x, y = c.src(f), c.tgt(f)
        fx = p.fibre(x)
        return (fx.compose(b.transitions[f], p.fmap(f).mor(comp[y]))
                == fx.compose(comp[x], a.transitions[f]))

    def candidates(x):
        fx = p.fibre(x)
        for f in c.morphisms:
            y = c.tgt(f)
            if c.src(f) == x and y != x and y in comp:
                inv = fx.inverse(a.transitions[f])
                if inv is not None:
                    return [fx.compose(b.transitions[f], fx.compose(p.fmap(f).mor(comp[y]), inv))]
        return fx.hom(a.family[x], b.family[x])

    def go(i):
        if budget is not None:
            budget.tick()
        if i == len(order):
            out.append(PCMorphism(a, b, comp))
            return
        x = order[i]
        fx = p.fibre(x)
        for k in candidates(x):
            if fx.src(k) != a.family[x] or fx.tgt(k) != b.family[x]:
                continue
            comp[x] = k
            if all(square_ok(f) for f in squares[i]):
                go(i + 1)
        comp.pop(x, None)

    go(0)
    return sorted(out, key=lambda m: m.key())


class PCCategory(FinCat):
    """The enumerated PC(F) (or LC(F)) as a FinCat with literal encoded identifiers."""

    def __init__(self, p, kind, objects, morphisms):
        self.p, self.kind = p, kind
        self.pc_objects = {o.key(): o for o in objects}
        self.pc_morphisms = {m.key(): m for m in morphisms}
        by_src = {}
        for m in morphisms:
            by_src.setdefault(m.src.key(), []).append(m)
        table = {}
        for f in morphisms:
            for g in by_src.get(f.tgt.key(), []):
                table[(g.key(), f.key())] = compose_pc(p, g, f).key()
        ident = {o.key(): identity_pc(p, o).key() for o in objects}
        super().__init__(list(self.pc_objects), [(m.key(), m.src.key(), m.tgt.key()) for m in morphisms],
                         ident, table, f"{kind.upper()}C({getattr(p, 'name', 'F')})")

    def projection(self, x):
        fx = self.p.fibre(x)
        return FunctorData(self, fx, {k: o.family[x] for k, o in self.pc_objects.items()},
                           {k: m.components[x] for k, m in self.pc_morphisms.items()}, f"p_{x}")


def enumerate_pc(p, kind="pseudo", caps=None, max_candidates=None):
    objs = enumerate_objects(p, kind, caps, max_candidates)
    budget = _Budget(max_candidates)
    morphisms = []
    for a in objs:
        for b in objs:
            morphisms.extend(pc_hom(p, a, b, kind, budget))
    return PCCategory(p, kind, objs, morphisms)


# ------------------------------------------------------------ pseudolimit

class TestCone:
    """Shape D, legs G_X: D -> F(X), witnesses beta_f with components
    beta_f(Z): F(f)(G_Y Z) -> G_X Z."""

    __test__ = False

    def __init__(self, shape, legs, witnesses):
        self.shape, self.legs, self.witnesses = shape, dict(legs), dict(witnesses)

    def beta(self, f, z):
        w = self.witnesses[f]
        return w.at(z) if hasattr(w, "at") else w[z]


def cone_as_pseudonat(p, cone):
    """The cone as a pseudonatural cnst(D) => F; witnesses are the inverses of beta."""
    cd = constant(p.base, cone.shape)

    def witness(f, z):
        fx = p.fibre(p.base.src(f))
        inv = fx.inverse(cone.beta(f, z))
        if inv is None:
            raise NotACone(f"beta_{f} at {z} is not invertible")
        return inv

    return PseudoNat(cd, p, lambda x: cone.legs[x], witness, "cone")


class FactorizationReport(Report):
    def __init__(self):
        super().__init__("pseudolimit factorization")
        self.functor = None
        self.factorizations = 0
        self.without_transition_condition = 0


def verify_pseudolimit(p, cone, pc=None):
    rep_cone = check_pseudonat(cone_as_pseudonat(p, cone))
    if not rep_cone.ok:
        raise NotACone(f"test cone is not pseudonatural: {rep_cone.laws()}")
    pc = pc or enumerate_pc(p)
    c, d = p.base, cone.shape
    rep = FactorizationReport()
    gobj = {z: PCObject({x: cone.legs[x].obj(z) for x in c.objects},
                        {f: cone.beta(f, z) for f in c.morphisms}) for z in d.objects}
    gmor = {m: PCMorphism(gobj[d.src(m)], gobj[d.tgt(m)], {x: cone.legs[x].mor(m) for x in c.objects})
            for m in d.morphisms}
    for z, o in gobj.items():
        if o.key() not in pc.pc_objects:
            rep.add("factorization/object-not-in-pc", object=z)
    for m, pm in gmor.items():
        if pm.key() not in pc.pc_morphisms:
            rep.add("factorization/morphism-not-in-pc", morphism=m)
    if not rep.ok:
        return rep
    g = FunctorData(d, pc, {z: o.key() for z, o in gobj.items()}, {m: pm.key() for m, pm in gmor.items()}, "G")
    rep.extend(check_functor(g), "factorization")
    rep.functor = g
    for x in c.objects:
        px = pc.projection(x)
        for z in d.objects:
            if px.obj(g.obj(z)) != cone.legs[x].obj(z):
                rep.add("factorization/projection", object=x, at=z)
        for m in d.morphisms:
            if px.mor(g.mor(m)) != cone.legs[x].mor(m):
                rep.add("factorization/projection", object=x, at=m)
    # exhaustive uniqueness over functors D -> PC(F) lying over the legs
    loose = {z: [k for k, o in pc.pc_objects.items()
                 if all(o.family[x] == cone.legs[x].obj(z) for x in c.objects)] for z in d.objects}
    strict = {z: [k for k in loose[z]
                  if all(pc.pc_objects[k].transitions[f] == cone.beta(f, z) for f in c.morphisms)]
              for z in d.objects}
    rep.factorizations = _count_lifts(pc, cone, d, c, strict)
    rep.without_transition_condition = _count_lifts(pc, cone, d, c, loose)
    if rep.factorizations != 1:
        rep.add("factorization/uniqueness", count=rep.factorizations)
    return rep


def _count_lifts(pc, cone, d, c, obj_cands):
    total = 0
    zs = list(d.objects)
    for choice in product(*[obj_cands[z] for z in zs]):
        assign = dict(zip(zs, choice))
        ways = 1
        for m in d.morphisms:
            want = {x: cone.legs[x].mor(m) for x in c.objects}
            n = sum(1 for k in pc.hom(assign[d.src(m)], assign[d.tgt(m)])
                    if pc.pc_morphisms[k].components == want)
            ways *= n
            if not ways:
                break
        # components are fixed by the legs, so functoriality follows from that of each leg
        total += ways
    return total


# ------------------------------------------------------------ terminal collapse

def find_terminal(c):
    for t in c.objects:
        if all(len(c.hom(x, t)) == 1 for x in c.objects):
            return t
    raise NoTerminalObject(f"{c.name} has no terminal object")


class EquivalencePair:
    def __init__(self, p, top, bang):
        self.p, self.top, self.bang = p, top, bang

    def left(self, a):
        p, c = self.p, self.p.base
        fam = {x: p.fmap(self.bang[x]).obj(a) for x in c.objects}
        trans = {f: p.phi(f, self.bang[c.tgt(f)], a) for f in c.morphisms}
        return PCObject(fam, trans)

    def left_mor(self, m):
        p, c = self.p, self.p.base
        ft = p.fibre(self.top)
        return PCMorphism(self.left(ft.src(m)), self.left(ft.tgt(m)),
                          {x: p.fmap(self.bang[x]).mor(m) for x in c.objects})

    def right(self, obj):
        return obj.family[self.top]

    def right_mor(self, m):
        return m.components[self.top]

    def z(self, obj):
        """Z: L R => Id, component tau_{!_X}."""
        return PCMorphism(self.left(self.right(obj)), obj,
                          {x: obj.transitions[self.bang[x]] for x in self.p.base.objects})


def collapse_terminal(p):
    c = p.base
    top = find_terminal(c)
    bang = {x: c.hom(x, top)[0] for x in c.objects}
    return EquivalencePair(p, top, bang)


def check_collapse(pair, pc=None):
    p = pair.p
    pc = pc or enumerate_pc(p)
    rep = Report("terminal collapse")
    ft = p.fibre(pair.top)
    for a in ft.objects:
        la = pair.left(a)
        rep.extend(validate_family(p, la), f"L({a})")
        if pair.right(la) != a:
            rep.add("RL/objects", object=a)
    for m in ft.morphisms:
        lm = pair.left_mor(m)
        rep.extend(validate_morphism(p, lm), f"L({m})")
        if pair.right_mor(lm) != m:
            rep.add("RL/morphisms", morphism=m)
    for k, obj in pc.pc_objects.items():
        z = pair.z(obj)
        rep.extend(validate_morphism(p, z), "Z")
        if not all(p.fibre(x).is_iso(z.components[x]) for x in p.base.objects):
            rep.add("Z/invertible", object=k)
    for k, m in pc.pc_morphisms.items():
        lhs = compose_pc(p, m, pair.z(m.src))
        rhs = compose_pc(p, pair.z(m.tgt), pair.left_mor(pair.right_mor(m)))
        if lhs != rhs:
            rep.add("Z/naturality", morphism=k)
    return rep


# ------------------------------------------------------------ (co)limits

class PCDiagram:
    def __init__(self, shape, objects, morphisms):
        self.shape = shape
        self.objects = dict(objects)
        self.morphisms = dict(morphisms)


def _component_diagram(p, diagram, x):
    return FunctorData(diagram.shape, p.fibre(x), {j: a.family[x] for j, a in diagram.objects.items()},
                       {u: m.components[x] for u, m in diagram.morphisms.items()}, f"d_{x}")


def _fibre_limit(c, d, orientation, where):
    try:
        return compute_limit(c, d, orientation)
    except NoLimit:
        raise FibreLimitMissing(f"no {orientation} of the componentwise diagram {where}") from None


def pc_limit(p, diagram, orientation="limit"):
    """Componentwise (co)limit with transitions lim(tau) o theta_f, theta computed as a mediator."""
    c = p.base
    limit = orientation == "limit"
    results = {x: _fibre_limit(p.fibre(x), _component_diagram(p, diagram, x), orientation, f"over {x}")
               for x in c.objects}
    js = list(diagram.shape.objects)
    trans = {}
    for f in c.morphisms:
        x, y = c.src(f), c.tgt(f)
        fx, ff = p.fibre(x), p.fmap(f)
        dy = _component_diagram(p, diagram, y)
        pushed = FunctorData(diagram.shape, fx, {j: ff.obj(dy.obj(j)) for j in js},
                             {u: ff.mor(dy.mor(u)) for u in diagram.shape.morphisms})
        r2 = _fibre_limit(fx, pushed, orientation, f"pushed along {f}")
        image_legs = {j: ff.mor(results[y].legs[j]) for j in js}
        try:
            theta = mediator(fx, r2, ff.obj(results[y].apex), image_legs)
        except NoLimit:
            raise NotPreserved(f"F({f}) does not carry the {orientation} cone to a cone with a unique mediator") from None
        inv = fx.inverse(theta)
        if inv is None:
            raise NotPreserved(f"mediator theta_{f} is not invertible")
        if limit:
            lim_tau = mediator(fx, results[x], r2.apex,
                               {j: fx.compose(diagram.objects[j].transitions[f], r2.legs[j]) for j in js})
            trans[f] = fx.compose(lim_tau, theta)
        else:
            lim_tau = mediator(fx, results[x], r2.apex,
                               {j: fx.compose(results[x].legs[j], diagram.objects[j].transitions[f]) for j in js})
            trans[f] = fx.compose(lim_tau, inv)
    apex = PCObject({x: results[x].apex for x in c.objects}, trans)
    legs = {}
    for j in js:
        comps = {x: results[x].legs[j] for x in c.objects}
        legs[j] = PCMorphism(apex, diagram.objects[j], comps) if limit else PCMorphism(diagram.objects[j], apex, comps)
    return apex, legs


def check_pc_limit(p, diagram, apex, legs, orientation="limit", pc=None):
    """Oracle: the brute-force universal cone inside the enumerated PC(F) agrees up to a unique iso."""
    pc = pc or enumerate_pc(p)
    rep = Report(f"pc {orientation}")
    rep.extend(validate_family(p, apex), "apex")
    for j, leg in legs.items():
        rep.extend(validate_morphism(p, leg), f"leg {j}")
    if not rep.ok:
        return rep
    d = FunctorData(diagram.shape, pc, {j: a.key() for j, a in diagram.objects.items()},
                    {u: m.key() for u, m in diagram.morphisms.items()})
    try:
        brute = compute_limit(pc, d, orientation)
    except NoLimit:
        rep.add("oracle/no-limit-in-pc")
        return rep
    limit = orientation == "limit"
    ours = {j: leg.key() for j, leg in legs.items()}
    if apex.key() not in pc.pc_objects:
        rep.add("oracle/apex-not-enumerated")
        return rep
    hom = pc.hom(apex.key(), brute.apex) if limit else pc.hom(brute.apex, apex.key())
    good = []
    for k in hom:
        if not pc.is_iso(k):
            continue
        if all((pc.compose(brute.legs[j], k) if limit else pc.compose(k, brute.legs[j])) == ours[j] for j in ours):
            good.append(k)
    if len(good) != 1:
        rep.add("oracle/comparison-iso", count=len(good))
    return rep


# ------------------------------------------------------------ monoidal structure

class MonoidalData:
    """Per-fibre tensor, unit and structure maps plus the comparison maps
    theta(f, a, b): F(f)(a (x) b) -> F(f)a (x) F(f)b and sigma(f): F(f)(I_Y) -> I_X."""

    def __init__(self, tensor, tensor_mor, unit, theta, sigma, associator=None, left_unitor=None,
                 right_unitor=None, braiding=None, symmetric=False):
        self.tensor, self.tensor_mor, self.unit = tensor, tensor_mor, unit
        self.theta, self.sigma = theta, sigma
        self.associator, self.left_unitor, self.right_unitor = associator, left_unitor, right_unitor
        self.braiding, self.symmetric = braiding, symmetric


def check_monoidal_data(p, m):
    c = p.base
    rep = Report("monoidal data")
    for f in c.morphisms:
        x, y = c.src(f), c.tgt(f)
        fx, fy, ff = p.fibre(x), p.fibre(y), p.fmap(f)
        s = m.sigma(f)
        if fx.src(s) != ff.obj(m.unit(y)) or fx.tgt(s) != m.unit(x) or not fx.is_iso(s):
            rep.add("sigma/typing", morphism=f)
        for a in fy.objects:
            for b in fy.objects:
                t = m.theta(f, a, b)
                if (fx.src(t) != ff.obj(m.tensor(y, a, b)) or fx.tgt(t) != m.tensor(x, ff.obj(a), ff.obj(b))
                        or not fx.is_iso(t)):
                    rep.add("theta/typing", morphism=f, pair=[a, b])
        for u in fy.morphisms:
            for v in fy.morphisms:
                a, b = fy.src(u), fy.src(v)
                a2, b2 = fy.tgt(u), fy.tgt(v)
                lhs = fx.compose(m.theta(f, a2, b2), ff.mor(m.tensor_mor(y, u, v)))
                rhs = fx.compose(m.tensor_mor(x, ff.mor(u), ff.mor(v)), m.theta(f, a, b))
                if lhs != rhs:
                    rep.add("theta/naturality", morphism=f, pair=[u, v])
    if not rep.ok:
        return rep
    for f, g in composable_pairs(c):
        x, z = c.src(f), c.tgt(g)
        fx, fz = p.fibre(x), p.fibre(z)
        ff, fg = p.fmap(f), p.fmap(g)
        gf = c.compose(g, f)
        lhs = fx.compose(m.sigma(gf), p.phi(f, g, m.unit(z)))
        rhs = fx.compose(m.sigma(f), ff.mor(m.sigma(g)))
        if lhs != rhs:
            rep.add("sigma/cocycle", pair=[f, g])
        for a in fz.objects:
            for b in fz.objects:
                lhs = fx.compose(m.theta(gf, a, b), p.phi(f, g, m.tensor(z, a, b)))
                rhs = fx.compose(m.tensor_mor(x, p.phi(f, g, a), p.phi(f, g, b)),
                                 fx.compose(m.theta(f, fg.obj(a), fg.obj(b)), ff.mor(m.theta(g, a, b))))
                if lhs != rhs:
                    rep.add("theta/cocycle", pair=[f, g], objects=[a, b])
    return rep


def pc_tensor(p, m, a, b, check=True):
    if check:
        rep = check_monoidal_data(p, m)
        if not rep.ok:
            raise IncoherentMonoidalData(str(rep.laws()))
    c = p.base
    fam = {x: m.tensor(x, a.family[x], b.family[x]) for x in c.objects}
    trans = {}
    for f in c.morphisms:
        x, y = c.src(f), c.tgt(f)
        fx = p.fibre(x)
        trans[f] = fx.compose(m.tensor_mor(x, a.transitions[f], b.transitions[f]),
                              m.theta(f, a.family[y], b.family[y]))
    return PCObject(fam, trans)


def pc_tensor_mor(p, m, u, v):
    c = p.base
    return PCMorphism(pc_tensor(p, m, u.src, v.src, False), pc_tensor(p, m, u.tgt, v.tgt, False),
                      {x: m.tensor_mor(x, u.components[x], v.components[x]) for x in c.objects})


def pc_unit(p, m, check=True):
    if check:
        rep = check_monoidal_data(p, m)
        if not rep.ok:
            raise IncoherentMonoidalData(str(rep.laws()))
    c = p.base
    return PCObject({x: m.unit(x) for x in c.objects}, {f: m.sigma(f) for f in c.morphisms})


def _structure_map(p, src, tgt, fn):
    return PCMorphism(src, tgt, {x: fn(x) for x in p.base.objects})


def check_pc_monoidal(p, m, objects):
    """Unitors, associator and braiding are PC morphisms; pentagon, triangle and symmetry hold componentwise."""
    rep = Report("pc monoidal laws")
    unit = pc_unit(p, m)
    c = p.base
    for a in objects:
        if m.right_unitor:
            r = _structure_map(p, pc_tensor(p, m, a, unit, False), a, lambda x: m.right_unitor(x, a.family[x]))
            rep.extend(validate_morphism(p, r), "right-unitor")
        if m.left_unitor:
            lam = _structure_map(p, pc_tensor(p, m, unit, a, False), a, lambda x: m.left_unitor(x, a.family[x]))
            rep.extend(validate_morphism(p, lam), "left-unitor")
        for b in objects:
            if m.braiding:
                ab, ba = pc_tensor(p, m, a, b, False), pc_tensor(p, m, b, a, False)
                br = _structure_map(p, ab, ba, lambda x: m.braiding(x, a.family[x], b.family[x]))
                rep.extend(validate_morphism(p, br), "braiding")
                if m.symmetric:
                    back = _structure_map(p, ba, ab, lambda x: m.braiding(x, b.family[x], a.family[x]))
                    if compose_pc(p, back, br) != identity_pc(p, ab):
                        rep.add("braiding/symmetry", pair=[a.key(), b.key()])
            if not m.associator:
                continue
            for d in objects:
                src = pc_tensor(p, m, pc_tensor(p, m, a, b, False), d, False)
                tgt = pc_tensor(p, m, a, pc_tensor(p, m, b, d, False), False)
                assoc = _structure_map(p, src, tgt, lambda x: m.associator(x, a.family[x], b.family[x], d.family[x]))
                rep.extend(validate_morphism(p, assoc), "associator")
                for x in c.objects:
                    fx = p.fibre(x)
                    if m.left_unitor and m.right_unitor:
                        lhs = fx.compose(m.tensor_mor(x, fx.identity(a.family[x]), m.left_unitor(x, b.family[x])),
                                         m.associator(x, a.family[x], m.unit(x), b.family[x]))
                        rhs = m.tensor_mor(x, m.right_unitor(x, a.family[x]), fx.identity(b.family[x]))
                        if lhs != rhs:
                            rep.add("triangle", object=x)
                    for e in objects:
                        A, B, C, D = (o.family[x] for o in (a, b, d, e))
                        t = lambda u, v: m.tensor(x, u, v)
                        i = fx.identity
                        lhs = fx.compose(m.associator(x, A, B, t(C, D)), m.associator(x, t(A, B), C, D))
                        rhs = fx.compose(m.tensor_mor(x, i(A), m.associator(x, B, C, D)),
                                         fx.compose(m.associator(x, A, t(B, C), D),
                                                    m.tensor_mor(x, m.associator(x, A, B, C), i(D))))
                        if lhs != rhs:
                            rep.add("pentagon", object=x)
    return rep
