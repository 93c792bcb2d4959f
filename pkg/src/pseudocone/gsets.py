"""Finite groups, finite G-sets, maps of finite sets and induction spaces."""
from itertools import permutations, product

from . import canon
from .errors import MalformedTable, NotFree, NotNormal


class FinGroup:
    def __init__(self, elements, mul, identity, name="G"):
        self.elements = list(elements)
        self.mul_table = dict(mul)
        self.e = identity
        self.name = name
        self._inv = {}
        for g in self.elements:
            for h in self.elements:
                if self.mul_table[(g, h)] == identity:
                    self._inv[g] = h
                    break

    def mul(self, g, h):
        return self.mul_table[(g, h)]

    def inv(self, g):
        return self._inv[g]

    def order(self):
        return len(self.elements)

    def conj(self, h, g):
        return self.mul(self.mul(h, g), self.inv(h))

    def __repr__(self):
        return f"FinGroup({self.name}, order {self.order()})"


def check_group(g):
    bad = []
    els = g.elements
    for a in els:
        if g.mul(g.e, a) != a or g.mul(a, g.e) != a:
            bad.append(("unit", a))
        if a not in g._inv:
            bad.append(("inverse", a))
    for a, b, c in product(els, repeat=3):
        if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)):
            bad.append(("associativity", a, b, c))
            break
    return bad


def cyclic(n):
    els = [str(k) for k in range(n)]
    return FinGroup(els, {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}, "0",
                    "1" if n == 1 else f"Z/{n}")


def trivial_group():
    return FinGroup(["e"], {("e", "e"): "e"}, "e", "1")


def symmetric3():
    perms = ["".join(p) for p in permutations("012")]

    def comp(a, b):
        # (a b)(i) = a(b(i))
        return "".join(a[int(b[i])] for i in range(3))

    return FinGroup(perms, {(a, b): comp(a, b) for a in perms for b in perms}, "012", "S3")


class GroupHom:
    def __init__(self, src, tgt, images, name=None):
        self.src, self.tgt = src, tgt
        self.images = dict(images)
        self.name = name or f"{src.name}->{tgt.name}"
        for a in src.elements:
            for b in src.elements:
                if self.images[src.mul(a, b)] != tgt.mul(self.images[a], self.images[b]):
                    raise MalformedTable(f"{self.name} is not a homomorphism at ({a}, {b})")

    def __call__(self, g):
        return self.images[g]

    def then(self, other):
        """other o self."""
        return GroupHom(self.src, other.tgt, {g: other(self(g)) for g in self.src.elements},
                        f"{self.name};{other.name}")

    def is_injective(self):
        return len(set(self.images.values())) == len(self.images)


def identity_hom(g):
    return GroupHom(g, g, {a: a for a in g.elements}, f"id_{g.name}")


def trivial_hom(g):
    one = trivial_group()
    return GroupHom(one, g, {"e": g.e}, f"1->{g.name}")


def cyclic_inclusion(m, n):
    """Z/m -> Z/n, k -> k * n/m."""
    if n % m:
        raise MalformedTable(f"Z/{m} does not embed in Z/{n}")
    src, tgt = cyclic(m), cyclic(n)
    return GroupHom(src, tgt, {str(k): str(k * (n // m)) for k in range(m)}, f"Z/{m}->Z/{n}")


def subgroup_elements(g, gens):
    out = {g.e}
    frontier = list(gens)
    while frontier:
        a = frontier.pop()
        if a in out:
            continue
        out.add(a)
        frontier.extend(g.mul(a, b) for b in list(out))
        frontier.extend(g.mul(b, a) for b in list(out))
    return sorted(out)


def subgroup(g, elements, name=None):
    els = sorted(elements)
    sub = FinGroup(els, {(a, b): g.mul(a, b) for a in els for b in els}, g.e, name or f"H<{g.name}")
    return sub, GroupHom(sub, g, {a: a for a in els}, f"{sub.name}->{g.name}")


def is_normal(g, h_elements):
    hs = set(h_elements)
    return all(g.conj(x, h) in hs for x in g.elements for h in hs)


def quotient_group(g, h_elements, name=None):
    """G/H with cosets named by their least member; raises NotNormal."""
    if not is_normal(g, h_elements):
        raise NotNormal(f"{sorted(h_elements)} is not normal in {g.name}")
    coset = {x: min(g.mul(x, h) for h in h_elements) for x in g.elements}
    reps = sorted(set(coset.values()))
    q = FinGroup(reps, {(a, b): coset[g.mul(a, b)] for a in reps for b in reps}, coset[g.e],
                 name or f"{g.name}/H")
    return q, GroupHom(g, q, coset, f"{g.name}->{q.name}")


# ------------------------------------------------------------ G-sets

class GSet:
    def __init__(self, group, carrier, act, name="X"):
        self.group, self.name = group, name
        self.carrier = sorted(carrier)
        self._act = {(g, x): act(g, x) for g in group.elements for x in self.carrier}
        self._orbit_rep = {}
        for x in self.carrier:
            if x not in self._orbit_rep:
                orb = {self._act[(g, x)] for g in group.elements}
                r = min(orb)
                for y in orb:
                    self._orbit_rep[y] = r

    def act(self, g, x):
        return self._act[(g, x)]

    def rep(self, x):
        return self._orbit_rep[x]

    def orbit_reps(self):
        return tuple(sorted(set(self._orbit_rep.values())))

    def is_free(self):
        return all(self._act[(g, x)] != x for g in self.group.elements if g != self.group.e
                   for x in self.carrier)

    def translator(self, x, y):
        """The unique k with k.x = y in a free G-set."""
        for k in self.group.elements:
            if self._act[(k, x)] == y:
                return k
        raise MalformedTable(f"{y!r} is not in the orbit of {x!r}")

    def __repr__(self):
        return f"GSet({self.name}, {len(self.carrier)} points over {self.group.name})"


def check_gset(s):
    g = s.group
    bad = []
    for x in s.carrier:
        if s.act(g.e, x) != x:
            bad.append(("unit", x))
        for a in g.elements:
            if s.act(a, x) not in s._orbit_rep:
                bad.append(("closure", a, x))
            for b in g.elements:
                if s.act(g.mul(a, b), x) != s.act(a, s.act(b, x)):
                    bad.append(("associativity", a, b, x))
    return bad


def regular(g, name=None):
    return GSet(g, g.elements, g.mul, name or g.name.replace("/", ""))


def trivial_gset(g, points, name=None):
    return GSet(g, list(points), lambda a, x: x, name or f"{len(points)}pt")


def diagonal_power(g, k, name=None):
    """G x ... x G (k factors) with the diagonal left action."""
    carrier = list(product(g.elements, repeat=k))
    return GSet(g, carrier, lambda a, x: tuple(g.mul(a, y) for y in x), name or "x".join([g.name] * k))


def product_gset(a, b, name=None):
    g = a.group
    return GSet(g, list(product(a.carrier, b.carrier)), lambda h, p: (a.act(h, p[0]), b.act(h, p[1])),
                name or f"{a.name}x{b.name}")


def conjugation_gset(g, name=None):
    return GSet(g, g.elements, g.conj, name or f"{g.name}^ad")


def restrict(hom, s, name=None):
    """An H-set viewed as a G-set through hom: G -> H."""
    return GSet(hom.src, s.carrier, lambda a, x: s.act(hom(a), x), name or s.name)


def is_equivariant(s, t, fn):
    return all(fn[s.act(g, x)] == t.act(g, fn[x]) for g in s.group.elements for x in s.carrier)


def equivariant_maps(s, t):
    """All equivariant maps s -> t with s free, as dicts."""
    if not s.is_free():
        raise NotFree(f"{s.name} is not free")
    reps = s.orbit_reps()
    out = []
    for images in product(t.carrier, repeat=len(reps)):
        fn = {}
        ok = True
        for r, y in zip(reps, images):
            for g in s.group.elements:
                x, v = s.act(g, r), t.act(g, y)
                if fn.get(x, v) != v:
                    ok = False
                fn[x] = v
        if ok and is_equivariant(s, t, fn):
            out.append(fn)
    return out


class Induced(GSet):
    """H x^G Z: orbits of H x Z under g.(h, z) = (h hom(g)^-1, g z), with H acting on the left."""

    def __init__(self, hom, z, name=None):
        self.hom, self.base_space = hom, z
        g, h = hom.src, hom.tgt
        self._canon = {}
        for hh in h.elements:
            for zz in z.carrier:
                orbit = {(h.mul(hh, h.inv(hom(k))), z.act(k, zz)) for k in g.elements}
                r = min(orbit)
                for o in orbit:
                    self._canon[o] = r
        carrier = sorted(set(self._canon.values()))
        super().__init__(h, carrier, lambda a, p: self._canon[(h.mul(a, p[0]), p[1])],
                         name or f"{h.name}x^{g.name}({z.name})")

    def cls(self, hh, zz):
        return self._canon[(hh, zz)]

    def unit(self, zz):
        return self._canon[(self.group.e, zz)]


# ------------------------------------------------------------ finite sets

class FinMap:
    """A function between finite sets given by its graph; extensional equality."""

    __slots__ = ("src", "tgt", "images", "_index", "_hash")

    def __init__(self, src, tgt, fn):
        self.src, self.tgt = tuple(src), tuple(tgt)
        self.images = tuple(fn[x] if isinstance(fn, dict) else fn(x) for x in self.src)
        self._index = None
        self._hash = hash((self.src, self.tgt, self.images))

    def __call__(self, x):
        if self._index is None:
            self._index = {a: i for i, a in enumerate(self.src)}
        return self.images[self._index[x]]

    def __eq__(self, other):
        return (isinstance(other, FinMap) and self.src == other.src and self.tgt == other.tgt
                and self.images == other.images)

    def __hash__(self):
        return self._hash

    def is_identity(self):
        return self.src == self.tgt and self.src == self.images

    def key(self):
        return canon.key([list(self.src), list(self.images)])

    def __repr__(self):
        return f"FinMap({dict(zip(self.src, self.images))})"


class FinSets:
    """The category of finite sets (objects are sorted tuples); only composition is offered."""

    name = "FinSet"

    def src(self, m):
        return m.src

    def tgt(self, m):
        return m.tgt

    def identity(self, s):
        return FinMap(s, s, lambda x: x)

    def compose(self, g, f):
        if f.tgt != g.src:
            raise MalformedTable("maps of finite sets are not composable")
        return FinMap(f.src, g.tgt, lambda x: g(f(x)))

    def hom(self, a, b):
        raise NotImplementedError("FinSet is not enumerated")

    def inverse(self, m):
        if len(set(m.images)) != len(m.images) or set(m.images) != set(m.tgt):
            return None
        back = {y: x for x, y in zip(m.src, m.images)}
        return FinMap(m.tgt, m.src, back)

    def is_iso(self, m):
        return self.inverse(m) is not None


FINSETS = FinSets()
