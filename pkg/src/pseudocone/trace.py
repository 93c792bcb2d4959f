"""Equivariant stalks and traces for pre-equivariant pseudofunctors with matrix fibres."""
import random
from fractions import Fraction

from .equivariant import (EquivarianceModel, FamilyPseudofunctor, Pullback, descend, equivariance_theta,
                          random_naive_data)
from .errors import NotFixed, NotInjective, ShapeMismatch, UnknownPoint
from .gsets import FinMap, GSet, cyclic, is_equivariant, regular, trivial_gset
from .matrix import MatQ, Matrix, direct_sum
from .pseudocone import PCObject, validate_family
from .report import Report


def kron(a, b):
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out = []
    for i in range(rows):
        for j in range(cols):
            out.append(a[i // b.rows, j // b.cols] * b[i % b.rows, j % b.cols])
    return Matrix(rows, cols, out)


def duality_data(d):
    """Unit 1 -> d (x) d and counit d (x) d -> 1 of the standard self-duality."""
    vec = [Fraction(int(i == j)) for i in range(d) for j in range(d)]
    return Matrix(d * d, 1, vec), Matrix(1, d * d, vec)


def check_dualizable(k):
    """Both triangle identities for every object of MatQ_N under the Kronecker product."""
    rep = Report(f"dualizable objects of {k.name}")
    for d in k.objects:
        unit, counit = duality_data(d)
        ident = Matrix.identity(d)
        left = kron(counit, ident) @ kron(ident, unit)
        right = kron(ident, counit) @ kron(unit, ident)
        if left != ident:
            rep.add("triangle/left", object=d)
        if right != ident:
            rep.add("triangle/right", object=d)
    return rep


def _orbit_index(resl, name, elem):
    return resl.quo[name].index(resl.rep(name, elem))


def stalk(model, a, x):
    """The value of the regular component of a at the class of (e, x)."""
    space = model.space
    if x not in space.carrier:
        raise UnknownPoint(f"{x!r} is not a point of {space.name}")
    resl = model.resl_x
    n = resl.regular_name()
    return a.family[n][_orbit_index(resl, n, (model.group.e, x))]


def theta_at(model, a, g, x, theta=None):
    """The endomorphism of the stalk at x given by Theta at the class of (e, (g, x))."""
    space = model.space
    if x not in space.carrier:
        raise UnknownPoint(f"{x!r} is not a point of {space.name}")
    if g not in model.group.elements:
        raise UnknownPoint(f"{g!r} is not an element of {model.group.name}")
    if space.act(g, x) != x:
        raise NotFixed(f"{g} does not fix {x!r}")
    theta = theta or equivariance_theta(model, a)
    resl, fbar = model.resl_gx, model.fbar
    n = model.resl_x.regular_name()
    # restrict to the point and identify both ends with the stalk through the compositors
    point = FinMap(("*",), resl.quo[n], lambda _: resl.rep(n, (model.group.e, (g, x))))
    q_act = model.action_pullback.pseudonat.component(n).u
    q_pr = model.projection_pullback.pseudonat.component(n).u
    one = fbar.fibre(point.src)
    value = a.family[n]
    out = one.compose(fbar.phi(point, q_pr, value),
                      one.compose(fbar.fmap(point).mor(theta.components[n]), fbar.phi_inv(point, q_act, value)))
    return out[0]


def equivariant_trace(model, a, g, x, theta=None):
    return theta_at(model, a, g, x, theta).trace()


def trace_table(model, a):
    """trace_g(a, x) for every fixed pair, keyed by (g, x)."""
    theta = equivariance_theta(model, a)
    return {(g, x): equivariant_trace(model, a, g, x, theta)
            for g in model.group.elements for x in model.space.carrier if model.space.act(g, x) == x}


def direct_sum_objects(a, b):
    family = {n: tuple(d1 + d2 for d1, d2 in zip(a.family[n], b.family[n])) for n in a.family}
    trans = {f: tuple(direct_sum(m1, m2) for m1, m2 in zip(a.transitions[f], b.transitions[f]))
             for f in a.transitions}
    return PCObject(family, trans)


def conjugate(p, a, components):
    """The object isomorphic to a through the componentwise isos P: tau'_f = P_X tau_f F(f)(P_Y)^-1."""
    resl = p.resl
    trans = {}
    for f in resl.morphisms:
        x, y = resl.src(f), resl.tgt(f)
        fx = p.fibre(x)
        back = p.fmap(f).mor(p.fibre(y).inverse(components[y]))
        trans[f] = fx.compose(components[x], fx.compose(a.transitions[f], back))
    family = {n: tuple(m.rows for m in components[n]) for n in resl.objects}
    return PCObject(family, trans)


def random_isomorphism(p, a, rng, spread=2):
    comps = {}
    for n, dims in a.family.items():
        row = []
        for d in dims:
            while True:
                m = Matrix(d, d, [Fraction(rng.randint(-spread, spread)) for _ in range(d * d)])
                if m.inverse() is not None:
                    row.append(m)
                    break
        comps[n] = tuple(row)
    return comps


def pushforward_along_injection(model_x, model_y, inj, a):
    """i_* a: a on the image of i, the zero object elsewhere.  Transitions carry
    a's transitions across the orbit bijection and re-balance the twist."""
    sx, sy = model_x.space, model_y.space
    fn = {x: inj(x) if callable(inj) else inj[x] for x in sx.carrier}
    if len(set(fn.values())) != len(fn):
        raise NotInjective("the map of points is not injective")
    if not is_equivariant(sx, sy, fn):
        raise ShapeMismatch("the map of points is not equivariant")
    back = {y: x for x, y in fn.items()}
    rx, ry = model_x.resl_x, model_y.resl_x
    fbar = model_y.fbar
    if fbar is not model_x.fbar:
        raise ShapeMismatch("both models must share the base pseudofunctor")

    def preimage(n, r):
        gamma, y = r
        if y not in back:
            return None
        return rx.rep(n, (gamma, back[y]))

    family = {}
    for n in ry.order:
        dims = []
        for r in ry.quo[n]:
            s = preimage(n, r)
            dims.append(0 if s is None else a.family[n][rx.quo[n].index(s)])
        family[n] = tuple(dims)
    trans = {}
    for f in ry.morphisms:
        if not rx.has_morphism(f):
            raise ShapeMismatch(f"{f} has no counterpart over the source space")
        n = ry.src(f)
        u_y, u_x = ry.quotient.mor(f), rx.quotient.mor(f)
        comps = []
        for r in ry.quo[n]:
            s = preimage(n, r)
            if s is None:
                comps.append(Matrix(0, 0, []))
                continue
            tau = a.transitions[f][rx.quo[n].index(s)]
            d = tau.rows
            comps.append(tau @ fbar.twist_component(u_x, s, d) @ fbar.twist_component(u_y, r, d, inverse=True))
        trans[f] = tuple(comps)
    return PCObject(family, trans)


def pullback_object(model_x, model_y, h, a):
    """h^* a along an equivariant map of points h: X -> Y."""
    fn = {x: h(x) if callable(h) else h[x] for x in model_x.space.carrier}
    if not is_equivariant(model_x.space, model_y.space, fn):
        raise ShapeMismatch("the map of points is not equivariant")
    pull = Pullback(model_x.fbar, model_x.resl_x, model_y.resl_x, lambda x: fn[x], "h*")
    return pull.obj(a)


def check_pushforward(model_x, model_y, inj, a):
    """Stalks and traces of i_* a at image points match those of a; zero elsewhere."""
    rep = Report("pushforward traces")
    b = pushforward_along_injection(model_x, model_y, inj, a)
    rep.extend(validate_family(model_y.p_x, b), "i_*A")
    if not rep.ok:
        return rep
    fn = {x: inj(x) if callable(inj) else inj[x] for x in model_x.space.carrier}
    image = set(fn.values())
    for y in model_y.space.carrier:
        if y not in image and stalk(model_y, b, y) != 0:
            rep.add("stalk/zero", point=y)
    ta, tb = equivariance_theta(model_x, a), equivariance_theta(model_y, b)
    for x, y in fn.items():
        if stalk(model_y, b, y) != stalk(model_x, a, x):
            rep.add("stalk/image", point=x)
        for g in model_x.group.elements:
            if model_x.space.act(g, x) == x:
                if equivariant_trace(model_y, b, g, y, tb) != equivariant_trace(model_x, a, g, x, ta):
                    rep.add("trace/image", element=g, point=x)
    return rep


def check_pullback(model_x, model_y, h, a):
    """trace_g(h^* a, x) = trace_g(a, h x) at every fixed pair."""
    rep = Report("pullback traces")
    b = pullback_object(model_x, model_y, h, a)
    rep.extend(validate_family(model_x.p_x, b), "h*A")
    if not rep.ok:
        return rep
    fn = {x: h(x) if callable(h) else h[x] for x in model_x.space.carrier}
    ta, tb = equivariance_theta(model_y, a), equivariance_theta(model_x, b)
    for x in model_x.space.carrier:
        if stalk(model_x, b, x) != stalk(model_y, a, fn[x]):
            rep.add("stalk", point=x)
        for g in model_x.group.elements:
            if model_x.space.act(g, x) == x:
                if equivariant_trace(model_x, b, g, x, tb) != equivariant_trace(model_y, a, g, fn[x], ta):
                    rep.add("trace", element=g, point=x)
    return rep


def check_additivity(model, a, b):
    rep = Report("trace additivity")
    s = direct_sum_objects(a, b)
    rep.extend(validate_family(model.p_x, s), "A+B")
    if not rep.ok:
        return rep
    ta, tb, ts = trace_table(model, a), trace_table(model, b), trace_table(model, s)
    for key in ts:
        if ts[key] != ta[key] + tb[key]:
            rep.add("additivity", element=key[0], point=key[1])
    return rep


def random_space(group, rng):
    """A small G-set: a union of a regular orbit and fixed points, or fixed points only."""
    n = group.order()
    fixed = [f"p{i}" for i in range(rng.randint(0 if n > 1 else 1, 2))]
    if n > 1 and (not fixed or rng.random() < 0.5):
        carrier = [f"r{g}" for g in group.elements] + fixed
        return GSet(group, carrier, lambda g, x: f"r{group.mul(g, x[1:])}" if x[0] == "r" else x, "X")
    return trivial_gset(group, fixed, "X")


def random_matrix_instance(rng, twisted=None, max_dim=2):
    """(model, A, B): two equivariant matrix families over a random small G-set."""
    if twisted is None:
        twisted = rng.random() < 0.5
    group = cyclic(rng.choice([1, 2, 3, 4]))
    space = random_space(group, rng)
    k = MatQ(max_dim * 2)
    fbar = FamilyPseudofunctor(k, twisted=twisted, seed=rng.randrange(1 << 16))
    model = EquivarianceModel(group, space, fbar)
    a = descend(model.p_x, random_naive_data(k, space, rng, max_dim))
    b = descend(model.p_x, random_naive_data(k, space, rng, max_dim))
    return model, a, b


def random_additivity_trials(count=100, seed=0):
    """Run additivity on `count` seeded random instances; returns (trials, failing reports)."""
    rng = random.Random(seed)
    failures = []
    for _ in range(count):
        model, a, b = random_matrix_instance(rng)
        rep = check_additivity(model, a, b)
        if not rep.ok:
            failures.append(rep)
    return count, failures


def sign_instance():
    """Z/2 acting trivially on one point with the generator acting by -1 on a line."""
    from .equivariant import NaiveData
    group = cyclic(2)
    space = trivial_gset(group, ["p"])
    k = MatQ(1)
    model = EquivarianceModel(group, space, FamilyPseudofunctor(k))
    data = NaiveData({"p": 1}, {("0", "p"): Matrix.identity(1), ("1", "p"): Matrix.scalar(1, -1)})
    return model, descend(model.p_x, data)


def regular_model(n, k, twisted=False):
    group = cyclic(n)
    return EquivarianceModel(group, regular(group, "X"), FamilyPseudofunctor(k, twisted=twisted))
