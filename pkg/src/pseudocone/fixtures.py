"""Named pseudofunctor instances and a seeded generator of small strict/twisted ones."""
import random

from .fincat import (FunctorData, arrow, automorphisms, bz2, chaos2, compose_functors, cyclic_group_category,
                     disc2, discrete, functors_between, identity_functor, indiscrete, one, poset, pow2,
                     pow2_label, product_category, subset_of)
from .pseudocone import MonoidalData
from .twocat import constant, strict_pseudofunctor, twist


def thin_functor(c, d, objmap, name="F"):
    """Functor between thin categories determined by its object map."""
    mor = {}
    for m in c.morphisms:
        homs = d.hom(objmap[c.src(m)], objmap[c.tgt(m)])
        mor[m] = homs[0]
    return FunctorData(c, d, objmap, mor, name)


def swap_functor(k):
    objs = list(k.objects)
    return thin_functor(k, k, {objs[0]: objs[1], objs[1]: objs[0]}, "swap")


def group_action(n, k, generator, name="F"):
    """Strict pseudofunctor over BZn: F(s^j) = generator^j."""
    base = cyclic_group_category(n)
    powers = [identity_functor(k)]
    for _ in range(1, n):
        powers.append(compose_functors(generator, powers[-1]))
    ids = ["id_*"] + (["s"] if n == 2 else [f"s{j}" for j in range(1, n)])
    return strict_pseudofunctor(base, {"*": k}, {m: powers[j] for j, m in enumerate(ids)}, name)


def swap_strict():
    k = disc2()
    return group_action(2, k, swap_functor(k), "SwapStrict")


def chaos2_bz2():
    k = chaos2()
    return group_action(2, k, swap_functor(k), "Chaos2/BZ2")


def cnst_one(base=None):
    return constant(base or arrow(), one(), "cnst(One)")


def pow2_union0():
    """Monotone map a -> a u {0} on Pow2; preserves meets and the top element."""
    k = pow2()
    return thin_functor(k, k, {a: pow2_label(subset_of(a) | {"0"}) for a in k.objects}, "u0")


def pow2_over_arrow():
    k = pow2()
    base = arrow()
    e = pow2_union0()
    idk = identity_functor(k)
    return strict_pseudofunctor(base, {"X": k, "Y": k}, {"id_X": idk, "id_Y": idk, "u": e}, "Pow2/Arrow")


def pow2_over_bz2():
    k = pow2()
    return group_action(2, k, thin_functor(k, k, {a: pow2_label({"1" if v == "0" else "0" for v in subset_of(a)})
                                                   for a in k.objects}, "swap01"), "Pow2/BZ2")


def meet_monoidal(p):
    """Intersection on Pow2 fibres, unit the top element; every structure map is the unique arrow."""
    def meet(x, a, b):
        return pow2_label(subset_of(a) & subset_of(b))

    def arrow_between(x, a, b):
        return p.fibre(x).hom(a, b)[0]

    def tensor_mor(x, u, v):
        k = p.fibre(x)
        return arrow_between(x, meet(x, k.src(u), k.src(v)), meet(x, k.tgt(u), k.tgt(v)))

    def theta(f, a, b):
        x = p.base.src(f)
        ff = p.fmap(f)
        return arrow_between(x, ff.obj(meet(x, a, b)), meet(x, ff.obj(a), ff.obj(b)))

    def sigma(f):
        x, y = p.base.src(f), p.base.tgt(f)
        return arrow_between(x, p.fmap(f).obj("{0,1}"), "{0,1}")

    return MonoidalData(
        tensor=meet, tensor_mor=tensor_mor, unit=lambda x: "{0,1}", theta=theta, sigma=sigma,
        associator=lambda x, a, b, c: arrow_between(x, meet(x, meet(x, a, b), c), meet(x, a, meet(x, b, c))),
        left_unitor=lambda x, a: arrow_between(x, meet(x, "{0,1}", a), a),
        right_unitor=lambda x, a: arrow_between(x, meet(x, a, "{0,1}"), a),
        braiding=lambda x, a, b: arrow_between(x, meet(x, a, b), meet(x, b, a)),
        symmetric=True)


# ---------------------------------------------------------------- generation

def _fibre_pool():
    bz3 = cyclic_group_category(3)
    chain3 = poset(["0", "1", "2"], lambda a, b: a <= b, "Chain3")
    return [one(), disc2(), chaos2(), arrow(), bz2(), bz3, discrete(["a", "b", "c"]),
            indiscrete(["a", "b", "c"]), product_category(chaos2(), bz2(), "Chaos2xBZ2"), chain3]


def _base_pool(rng):
    three = ["p", "q", "r"]
    bases = [one(), arrow(), disc2(), chaos2(), bz2(), pow2(),
             poset(three, lambda a, b: a == b or (a, b) in {("p", "q"), ("p", "r")}, "Vee"),
             poset(three, lambda a, b: a <= b, "Chain3b"),
             poset(["w", "x", "y", "z"], lambda a, b: a == b or a == "w" or b == "z", "Diamond")]
    return bases


# fibres with non-identity natural automorphisms, so a twist can change the compositor
_CENTRED = ("BZ2", "BZ3", "Chaos2xBZ2")
_CHAINED = ("Chaos2", "Chain3b", "Diamond", "Pow2")


def random_pseudofunctor(rng, twisted=None):
    """A strict pseudofunctor over a small base, optionally twisted into a non-strict one."""
    if twisted is None:
        twisted = rng.random() < 0.5
    bases = _base_pool(rng)
    if twisted:
        # bases with composable non-identity pairs, where a coboundary can be non-trivial
        bases = [b for b in bases if b.name in _CHAINED]
    base = rng.choice(bases)
    pool = _fibre_pool()
    if twisted:
        pool = [k for k in pool if k.name in _CENTRED and (len(base.objects) < 4 or k.name == "BZ2")]
    elif len(base.objects) > 3:
        # keep the brute-force oracles fast on the larger bases
        pool = [k for k in pool if len(k.objects) < 3 and len(k.morphisms) <= 4 and k.name != "BZ3"]
    k = rng.choice(pool)
    if base.name == "BZ2":
        auts = [a for a in automorphisms(k) if compose_functors(a, a) == identity_functor(k)]
        p = group_action(2, k, rng.choice(auts), f"gen[{base.name},{k.name}]")
    elif base.name == "Chaos2":
        auts = automorphisms(k)
        sig = {x: rng.choice(auts) for x in base.objects}
        inv = {x: next(b for b in auts if compose_functors(b, sig[x]) == identity_functor(k)) for x in base.objects}
        fmap = {}
        for f in base.morphisms:
            x, y = base.src(f), base.tgt(f)
            fmap[f] = compose_functors(inv[x], sig[y]) if x != y else identity_functor(k)
        p = strict_pseudofunctor(base, {x: k for x in base.objects}, fmap, f"gen[{base.name},{k.name}]")
    else:
        # thin bases: a down-closed cut L, with E idempotent on arrows leaving L
        idem = [e for e in functors_between(k, k) if compose_functors(e, e) == e]
        e = rng.choice(idem)
        seeds = {x for x in base.objects if rng.random() < 0.5}
        cut = {x for x in base.objects if any(base.hom(x, y) for y in seeds)}
        fmap = {}
        for f in base.morphisms:
            x, y = base.src(f), base.tgt(f)
            fmap[f] = e if (x in cut and y not in cut) else identity_functor(k)
        p = strict_pseudofunctor(base, {x: k for x in base.objects}, fmap, f"gen[{base.name},{k.name}]")
    if twisted:
        p, _ = twist(p, rng=rng)
    return p


def generated_pseudofunctors(count=50, seed=0):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        out.append(random_pseudofunctor(rng, twisted=(i % 2 == 1)))
    return out


def thin_pseudonat(src, tgt, components, name="alpha"):
    """Pseudonatural between pseudofunctors with thin fibres: every witness is the unique arrow."""
    from .twocat import PseudoNat
    c = src.base

    def witness(f, a):
        x = c.src(f)
        ex = tgt.fibre(x)
        s = components[x].obj(src.fmap(f).obj(a))
        t = tgt.fmap(f).obj(components[c.tgt(f)].obj(a))
        return ex.hom(s, t)[0]

    return PseudoNat(src, tgt, lambda x: components[x], witness, name)
