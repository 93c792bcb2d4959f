"""Finite 1-categories given by explicit tables, plus functors, natural
transformations, brute-force (co)limits and adjunction checks.

Everything downstream talks to categories through a small duck-typed
protocol (objects, hom, src, tgt, identity, compose, inverse), so lazily
built categories such as powers K^S or matrix categories plug in too.
"""
from itertools import product

from .errors import MalformedTable, NoLimit, ShapeMismatch
from .report import Report


class Category:
    """Protocol base. Subclasses provide objects/hom/src/tgt/identity/compose."""

    name = "C"

    def inverse(self, m):
        a, b = self.src(m), self.tgt(m)
        for k in self.hom(b, a):
            if self.compose(k, m) == self.identity(a) and self.compose(m, k) == self.identity(b):
                return k
        return None

    def is_iso(self, m):
        return self.inverse(m) is not None

    def morphism_count(self):
        return sum(len(self.hom(a, b)) for a in self.objects for b in self.objects)


class FinCat(Category):
    """A finite category. Identifiers are opaque strings, enumerated in sorted order."""

    def __init__(self, objects, morphisms, identity, compose, name="C"):
        self.name = name
        self.objects = sorted(objects)
        self._src, self._tgt = {}, {}
        for m in morphisms:
            mid, s, t = (m["id"], m["src"], m["tgt"]) if isinstance(m, dict) else m
            self._src[mid], self._tgt[mid] = s, t
        self.morphisms = sorted(self._src)
        self.identities = dict(identity)
        self.table = dict(compose)
        self._hom = {}
        for m in self.morphisms:
            self._hom.setdefault((self._src[m], self._tgt[m]), []).append(m)
        self._inv = {}

    def src(self, m):
        return self._src[m]

    def tgt(self, m):
        return self._tgt[m]

    def identity(self, a):
        return self.identities[a]

    def hom(self, a, b):
        return self._hom.get((a, b), [])

    def compose(self, g, f):
        try:
            return self.table[(g, f)]
        except KeyError:
            raise MalformedTable(f"{self.name}: composite {g} o {f} is undefined") from None

    def inverse(self, m):
        if m not in self._inv:
            self._inv[m] = Category.inverse(self, m)
        return self._inv[m]

    def morphism_count(self):
        return len(self.morphisms)

    def has_object(self, a):
        return a in self.identities

    def has_morphism(self, m):
        return m in self._src

    def to_tables(self):
        return {
            "objects": list(self.objects),
            "morphisms": [{"id": m, "src": self._src[m], "tgt": self._tgt[m]} for m in self.morphisms],
            "compose": sorted([g, f, r] for (g, f), r in self.table.items()),
            "identities": dict(sorted(self.identities.items())),
        }

    def __eq__(self, other):
        return isinstance(other, FinCat) and self.to_tables() == other.to_tables()

    def __hash__(self):
        return hash((tuple(self.objects), tuple(self.morphisms)))

    def __repr__(self):
        return f"FinCat({self.name}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def check_category(c):
    rep = Report(f"category {c.name}")
    objs = set(c.objects)
    for m in c.morphisms:
        if c.src(m) not in objs or c.tgt(m) not in objs:
            raise MalformedTable(f"morphism {m} has unknown endpoint")
    for a in c.objects:
        if a not in c.identities:
            raise MalformedTable(f"object {a} has no identity")
    for a, i in c.identities.items():
        if a not in objs or not c.has_morphism(i):
            raise MalformedTable(f"identity {a} -> {i} references unknown ids")
        if c.src(i) != a or c.tgt(i) != a:
            rep.add("identity/endpoints", object=a, morphism=i)
    for (g, f), r in c.table.items():
        if not (c.has_morphism(g) and c.has_morphism(f) and c.has_morphism(r)):
            raise MalformedTable(f"compose entry ({g}, {f}) -> {r} references unknown ids")
        if c.tgt(f) != c.src(g):
            rep.add("composition/spurious", g=g, f=f)
        elif c.src(r) != c.src(f) or c.tgt(r) != c.tgt(g):
            rep.add("composition/endpoints", g=g, f=f, result=r)
    for f in c.morphisms:
        for g in _out(c, c.tgt(f)):
            if (g, f) not in c.table:
                rep.add("composition/undefined", g=g, f=f)
    if not rep.ok:
        return rep
    for f in c.morphisms:
        a, b = c.src(f), c.tgt(f)
        if c.table[(c.identity(b), f)] != f or c.table[(f, c.identity(a))] != f:
            rep.add("identity/law", morphism=f)
    for f in c.morphisms:
        for g in _out(c, c.tgt(f)):
            gf = c.table[(g, f)]
            for h in _out(c, c.tgt(g)):
                if c.table[(h, gf)] != c.table[(c.table[(h, g)], f)]:
                    rep.add("associativity", h=h, g=g, f=f)
    return rep


def _out(c, a):
    return [m for b in c.objects for m in c.hom(a, b)]


def opposite(c):
    table = {(f, g): r for (g, f), r in c.table.items()}
    morphisms = [(m, c.tgt(m), c.src(m)) for m in c.morphisms]
    return FinCat(c.objects, morphisms, c.identities, table, name=f"{c.name}^op")


class Functor:
    """Protocol: obj(a), mor(m); src and tgt categories."""

    def __init__(self, src, tgt, obj, mor, name="F"):
        self.src, self.tgt, self.name = src, tgt, name
        self._obj, self._mor = obj, mor

    def obj(self, a):
        return self._obj(a)

    def mor(self, m):
        return self._mor(m)


class FunctorData(Functor):
    def __init__(self, src, tgt, obj_map, mor_map, name="F"):
        self.src, self.tgt, self.name = src, tgt, name
        self.obj_map, self.mor_map = dict(obj_map), dict(mor_map)

    def obj(self, a):
        try:
            return self.obj_map[a]
        except KeyError:
            raise MalformedTable(f"functor {self.name} undefined on object {a}") from None

    def mor(self, m):
        try:
            return self.mor_map[m]
        except KeyError:
            raise MalformedTable(f"functor {self.name} undefined on morphism {m}") from None

    def __eq__(self, other):
        return (isinstance(other, FunctorData) and self.obj_map == other.obj_map
                and self.mor_map == other.mor_map)

    def __hash__(self):
        return hash(tuple(sorted(self.obj_map.items(), key=repr)))


def tabulate(functor, name=None):
    """Materialize a functor out of a FinCat into explicit tables."""
    c = functor.src
    return FunctorData(c, functor.tgt, {a: functor.obj(a) for a in c.objects},
                       {m: functor.mor(m) for m in c.morphisms}, name or functor.name)


def identity_functor(c, name=None):
    if isinstance(c, FinCat):
        return FunctorData(c, c, {a: a for a in c.objects}, {m: m for m in c.morphisms}, name or f"Id_{c.name}")
    return Functor(c, c, lambda a: a, lambda m: m, name or "Id")


def compose_functors(g, f):
    """g o f, tabulated when the source is a FinCat."""
    out = Functor(f.src, g.tgt, lambda a: g.obj(f.obj(a)), lambda m: g.mor(f.mor(m)), f"{g.name}{f.name}")
    return tabulate(out) if isinstance(f.src, FinCat) else out


def check_functor(fn):
    rep = Report(f"functor {fn.name}")
    c, d = fn.src, fn.tgt
    for m in c.morphisms:
        fm = fn.mor(m)
        if d.src(fm) != fn.obj(c.src(m)) or d.tgt(fm) != fn.obj(c.tgt(m)):
            rep.add("functor/endpoints", morphism=m)
    if not rep.ok:
        return rep
    for a in c.objects:
        if fn.mor(c.identity(a)) != d.identity(fn.obj(a)):
            rep.add("functor/identity", object=a)
    for (g, f), r in c.table.items():
        if fn.mor(r) != d.compose(fn.mor(g), fn.mor(f)):
            rep.add("functor/composition", g=g, f=f)
    return rep


class NatTrans:
    def __init__(self, src, tgt, at, name="eta"):
        self.src, self.tgt, self.name = src, tgt, name
        self._at = at

    def at(self, a):
        return self._at(a)


class NatTransData(NatTrans):
    def __init__(self, src, tgt, components, name="eta"):
        self.src, self.tgt, self.name = src, tgt, name
        self.components = dict(components)

    def at(self, a):
        try:
            return self.components[a]
        except KeyError:
            raise MalformedTable(f"transformation {self.name} has no component at {a}") from None

    def __eq__(self, other):
        return isinstance(other, NatTransData) and self.components == other.components

    def __hash__(self):
        return hash(tuple(sorted(self.components.items(), key=repr)))


def check_nat(eta, objects=None, morphisms=None):
    """Typing and naturality of eta: F => G over the source category."""
    rep = Report(f"transformation {eta.name}")
    fn, gn = eta.src, eta.tgt
    c, d = fn.src, fn.tgt
    objects = c.objects if objects is None else objects
    for a in objects:
        k = eta.at(a)
        if d.src(k) != fn.obj(a) or d.tgt(k) != gn.obj(a):
            rep.add("nat/endpoints", object=a, component=k)
    if not rep.ok:
        return rep
    morphisms = c.morphisms if morphisms is None else morphisms
    for m in morphisms:
        a, b = c.src(m), c.tgt(m)
        if d.compose(gn.mor(m), eta.at(a)) != d.compose(eta.at(b), fn.mor(m)):
            rep.add("nat/naturality", morphism=m)
    return rep


class AdjunctionData:
    def __init__(self, left, right, unit, counit):
        self.left, self.right, self.unit, self.counit = left, right, unit, counit


def check_adjunction(a):
    lf, rf = a.left, a.right
    c, d = lf.src, lf.tgt
    if rf.src is not d and rf.src != d or rf.tgt is not c and rf.tgt != c:
        raise ShapeMismatch("left and right adjoint endpoints do not align")
    rep = Report("adjunction")
    for x in c.objects:
        k = a.unit.at(x)
        if c.src(k) != x or c.tgt(k) != rf.obj(lf.obj(x)):
            rep.add("unit/endpoints", object=x, component=k)
    for y in d.objects:
        k = a.counit.at(y)
        if d.src(k) != lf.obj(rf.obj(y)) or d.tgt(k) != y:
            rep.add("counit/endpoints", object=y, component=k)
    if not rep.ok:
        return rep
    for m in c.morphisms:
        x, y = c.src(m), c.tgt(m)
        if c.compose(rf.mor(lf.mor(m)), a.unit.at(x)) != c.compose(a.unit.at(y), m):
            rep.add("unit/naturality", morphism=m)
    for m in d.morphisms:
        x, y = d.src(m), d.tgt(m)
        if d.compose(a.counit.at(y), lf.mor(rf.mor(m))) != d.compose(m, a.counit.at(x)):
            rep.add("counit/naturality", morphism=m)
    for x in c.objects:
        lx = lf.obj(x)
        if d.compose(a.counit.at(lx), lf.mor(a.unit.at(x))) != d.identity(lx):
            rep.add("triangle/left", object=x)
    for y in d.objects:
        ry = rf.obj(y)
        if c.compose(rf.mor(a.counit.at(y)), a.unit.at(ry)) != c.identity(ry):
            rep.add("triangle/right", object=y)
    return rep


def find_isos(c):
    out = {}
    for a in c.objects:
        for b in c.objects:
            isos = [m for m in c.hom(a, b) if c.is_iso(m)]
            if isos:
                out[(a, b)] = isos
    return out


class ConeResult:
    def __init__(self, apex, legs, mediators, orientation="limit"):
        self.apex, self.legs, self.mediators = apex, legs, mediators
        self.orientation = orientation

    def __repr__(self):
        return f"ConeResult({self.orientation} apex={self.apex!r})"


def _commutes(c, d, legs, u, limit):
    j, k = d.src.src(u), d.src.tgt(u)
    if limit:
        return c.compose(d.mor(u), legs[j]) == legs[k]
    return c.compose(legs[k], d.mor(u)) == legs[j]


def all_cones(c, d, orientation="limit"):
    """Every (co)cone over d, in enumeration order: apex by object order, legs by hom order."""
    limit = orientation == "limit"
    shape = d.src
    js = list(shape.objects)
    found = []
    for apex in c.objects:
        # backtrack over legs, checking each diagram arrow once both ends are set
        choices = [c.hom(apex, d.obj(j)) if limit else c.hom(d.obj(j), apex) for j in js]
        pos = {j: i for i, j in enumerate(js)}
        checks = [[] for _ in js]
        for u in shape.morphisms:
            checks[max(pos[shape.src(u)], pos[shape.tgt(u)])].append(u)
        legs = {}

        def go(i):
            if i == len(js):
                found.append((apex, dict(legs)))
                return
            for m in choices[i]:
                legs[js[i]] = m
                if all(_commutes(c, d, legs, u, limit) for u in checks[i]):
                    go(i + 1)
            legs.pop(js[i], None)

        go(0)
    return found


def compute_limit(c, d, orientation="limit"):
    if orientation not in ("limit", "colimit"):
        raise ValueError(orientation)
    limit = orientation == "limit"
    js = list(d.src.objects)
    cones = all_cones(c, d, orientation)
    for apex, legs in cones:
        mediators = {}
        universal = True
        for other_apex, other_legs in cones:
            cands = c.hom(other_apex, apex) if limit else c.hom(apex, other_apex)
            hits = []
            for m in cands:
                if all((c.compose(legs[j], m) if limit else c.compose(m, legs[j])) == other_legs[j] for j in js):
                    hits.append(m)
                    if len(hits) > 1:
                        break
            if len(hits) != 1:
                universal = False
                break
            mediators[(other_apex, tuple(other_legs[j] for j in js))] = hits[0]
        if universal:
            return ConeResult(apex, legs, mediators, orientation)
    raise NoLimit(f"no universal {orientation} cone in {c.name}")


def mediator(c, result, apex, legs):
    """Unique morphism from a competing (co)cone into a universal one."""
    key = (apex, tuple(legs[j] for j in result.legs))
    if key in result.mediators:
        return result.mediators[key]
    limit = result.orientation == "limit"
    cands = c.hom(apex, result.apex) if limit else c.hom(result.apex, apex)
    hits = [m for m in cands
            if all((c.compose(result.legs[j], m) if limit else c.compose(m, result.legs[j])) == legs[j]
                   for j in result.legs)]
    if len(hits) != 1:
        raise NoLimit("competing cone has no unique mediator")
    return hits[0]


# ---------------------------------------------------------------- builders

def from_composition(objects, arrows, identity, law, name="C"):
    """Build a FinCat from arrows [(id, src, tgt)] and a composition rule law(g, f) -> id."""
    table = {}
    tgt_of = {a[0]: a[2] for a in arrows}
    src_of = {a[0]: a[1] for a in arrows}
    for f, _, _ in arrows:
        for g, _, _ in arrows:
            if tgt_of[f] == src_of[g]:
                table[(g, f)] = law(g, f)
    return FinCat(objects, arrows, identity, table, name)


def discrete(names, name=None):
    names = list(names)
    arrows = [(f"id_{a}", a, a) for a in names]
    return from_composition(names, arrows, {a: f"id_{a}" for a in names}, lambda g, f: g,
                            name or f"Disc{len(names)}")


def indiscrete(names, name=None):
    names = list(names)
    mid = {(a, b): f"id_{a}" if a == b else f"{a}->{b}" for a in names for b in names}
    arrows = [(m, a, b) for (a, b), m in mid.items()]
    ends = {m: ab for ab, m in mid.items()}
    return from_composition(names, arrows, {a: mid[(a, a)] for a in names},
                            lambda g, f: mid[(ends[f][0], ends[g][1])], name or f"Chaos{len(names)}")


def cyclic_group_category(n, name=None):
    """One object with Aut = Z/n."""
    ids = ["id_*"] + (["s"] if n == 2 else [f"s{k}" for k in range(1, n)])
    arrows = [(m, "*", "*") for m in ids]
    return from_composition(["*"], arrows, {"*": "id_*"},
                            lambda g, f: ids[(ids.index(g) + ids.index(f)) % n], name or f"BZ{n}")


def poset(elements, leq, name="P"):
    elements = list(elements)

    def mid(a, b):
        return f"id_{a}" if a == b else f"{a}<{b}"

    arrows = [(mid(a, b), a, b) for a in elements for b in elements if leq(a, b)]
    ends = {m: (a, b) for m, a, b in arrows}
    return from_composition(elements, arrows, {a: mid(a, a) for a in elements},
                            lambda g, f: mid(ends[f][0], ends[g][1]), name)


def one():
    return discrete(["*"], "One")


def arrow():
    arrows = [("id_X", "X", "X"), ("id_Y", "Y", "Y"), ("u", "X", "Y")]
    return from_composition(["X", "Y"], arrows, {"X": "id_X", "Y": "id_Y"},
                            lambda g, f: f if g.startswith("id") else g, "Arrow")


def disc2():
    return discrete(["a", "b"], "Disc2")


def chaos2():
    return indiscrete(["a", "b"], "Chaos2")


def bz2():
    return cyclic_group_category(2, "BZ2")


POW2_ELEMENTS = ["{}", "{0}", "{1}", "{0,1}"]


def subset_of(label):
    return frozenset(label.strip("{}").split(",")) - {""}


def pow2():
    return poset(POW2_ELEMENTS, lambda a, b: subset_of(a) <= subset_of(b), "Pow2")


def pow2_label(s):
    return "{" + ",".join(sorted(s)) + "}"


def functors_between(c, d, bijective=False):
    """Every functor c -> d (optionally only isomorphisms), by backtracking."""
    objs = list(c.objects)
    mors = [m for m in c.morphisms if m not in set(c.identities.values())]
    out = []
    for images in product(*[d.objects] * len(objs)):
        if bijective and len(set(images)) != len(images):
            continue
        if bijective and len(images) != len(d.objects):
            continue
        omap = dict(zip(objs, images))
        mmap = {c.identity(a): d.identity(omap[a]) for a in objs}

        def go(i):
            if i == len(mors):
                if bijective and len(set(mmap.values())) != len(d.morphisms):
                    return
                out.append(FunctorData(c, d, omap, mmap))
                return
            m = mors[i]
            for k in d.hom(omap[c.src(m)], omap[c.tgt(m)]):
                mmap[m] = k
                if all(mmap[r] == d.compose(mmap[g], mmap[f])
                       for (g, f), r in c.table.items() if g in mmap and f in mmap and r in mmap):
                    go(i + 1)
            mmap.pop(m, None)

        go(0)
    return out


def automorphisms(c):
    return functors_between(c, c, bijective=True)


def product_category(c, d, name=None):
    def oid(a, b):
        return f"({a},{b})"

    objects = [oid(a, b) for a in c.objects for b in d.objects]
    arrows, parts = [], {}
    for f in c.morphisms:
        for g in d.morphisms:
            m = oid(f, g)
            parts[m] = (f, g)
            arrows.append((m, oid(c.src(f), d.src(g)), oid(c.tgt(f), d.tgt(g))))
    table = {}
    for m1, (f1, g1) in parts.items():
        for m2, (f2, g2) in parts.items():
            if c.tgt(f1) == c.src(f2) and d.tgt(g1) == d.src(g2):
                table[(m2, m1)] = oid(c.compose(f2, f1), d.compose(g2, g1))
    ident = {oid(a, b): oid(c.identity(a), d.identity(b)) for a in c.objects for b in d.objects}
    return FinCat(objects, arrows, ident, table, name or f"{c.name}x{d.name}")


def check_equivalence(fn):
    """Faithful, full and essentially surjective, checked exhaustively."""
    rep = Report(f"equivalence {fn.name}")
    c, d = fn.src, fn.tgt
    for a in c.objects:
        for b in c.objects:
            images = [fn.mor(m) for m in c.hom(a, b)]
            if len(set(images)) != len(images):
                rep.add("faithful", src=a, tgt=b)
            if set(images) != set(d.hom(fn.obj(a), fn.obj(b))):
                rep.add("full", src=a, tgt=b)
    hit = {fn.obj(a) for a in c.objects}
    for y in d.objects:
        if not any(any(d.is_iso(m) for m in d.hom(x, y)) for x in hit):
            rep.add("essentially-surjective", object=y)
    return rep


def adjoint_equivalence(fn):
    """A quasi-inverse G of an equivalence F with unit and counit forming an adjoint
    equivalence: pick a preimage x_y and an iso e_y: F x_y -> y for every y."""
    c, d = fn.src, fn.tgt
    pick = {}
    for y in d.objects:
        for x in c.objects:
            isos = [m for m in d.hom(fn.obj(x), y) if d.is_iso(m)]
            if isos:
                pick[y] = (x, isos[0])
                break
        else:
            raise ShapeMismatch(f"{fn.name} misses {y} up to isomorphism")
    back = {}
    for a in c.objects:
        for b in c.objects:
            for m in c.hom(a, b):
                back[(a, b, fn.mor(m))] = m

    def lift(a, b, k):
        try:
            return back[(a, b, k)]
        except KeyError:
            raise ShapeMismatch(f"{fn.name} is not full") from None

    mor_map = {}
    for m in d.morphisms:
        y, y2 = d.src(m), d.tgt(m)
        (x, e), (x2, e2) = pick[y], pick[y2]
        mor_map[m] = lift(x, x2, d.compose(d.inverse(e2), d.compose(m, e)))
    right = FunctorData(d, c, {y: pick[y][0] for y in d.objects}, mor_map, f"{fn.name}^-1")
    unit = NatTransData(identity_functor(c), compose_functors(right, fn),
                        {x: lift(x, pick[fn.obj(x)][0], d.inverse(pick[fn.obj(x)][1])) for x in c.objects}, "unit")
    counit = NatTransData(compose_functors(fn, right), identity_functor(d),
                          {y: pick[y][1] for y in d.objects}, "counit")
    return AdjunctionData(fn, right, unit, counit)
