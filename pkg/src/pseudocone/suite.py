"""The fixture property suite: one check per acceptance property, shared by the
test-suite and the `selftest` command.  Every check returns a Report whose
`stats` dict records instance counts and enumeration sizes."""
import random
import threading

from . import fixtures as fx
from .equivariant import (ChangeOfGroups, EquivarianceModel, FamilyPseudofunctor, NaiveData, Tower,
                          check_chofg_associativity, check_compositor, check_git_cocycle, check_theta,
                          check_theta_naturality, deequivariantification, descend, equivariance_theta,
                          forgetful_pair, random_naive_data)
from .errors import FibreLimitMissing, NoLimit, NoTerminalObject, NotPreserved
from .fincat import (FunctorData, NatTransData, arrow, bz2, check_adjunction, check_equivalence, check_functor,
                     compose_functors, discrete, identity_functor, one)
from .functors import change_of_fibre, lift_adjunction, pc_two_functor_laws
from .grothendieck import compare_pc_csect
from .gsets import cyclic, cyclic_inclusion, regular, trivial_gset
from .matrix import MatQ, Matrix
from .pseudocone import (PCDiagram, PCMorphism, PCObject, TestCone, check_collapse, check_pc_limit,
                         collapse_terminal, enumerate_pc, find_terminal, identity_pc, pc_hom, pc_limit, validate_family,
                         verify_pseudolimit)
from .report import Report
from .trace import check_pullback, check_pushforward, random_additivity_trials, trace_table
from .twocat import check_pseudofunctor, is_strict, twist


class SuiteReport(Report):
    def __init__(self, subject):
        super().__init__(subject)
        self.stats = {}

    def to_dict(self):
        out = super().to_dict()
        out["stats"] = self.stats
        return out


def named_instances():
    return [fx.swap_strict(), fx.chaos2_bz2(), fx.cnst_one(), fx.pow2_over_arrow(), fx.pow2_over_bz2()]


_GENERATED = {}
_LOCK = threading.Lock()


def generated(count=50, seed=0):
    # one shared list per (count, seed), so checks running in parallel reuse the same PC caches
    key = (count, seed)
    with _LOCK:
        if key not in _GENERATED:
            _GENERATED[key] = fx.generated_pseudofunctors(count, seed)
        return _GENERATED[key]


_PCS = {}


def pc_of(p, kind="pseudo"):
    key = (id(p), kind)
    if key not in _PCS:
        _PCS[key] = (p, enumerate_pc(p, kind))
    return _PCS[key][1]


# ------------------------------------------------------------ pseudocones and cartesian sections

def pc_equals_sections(count=50, seed=0):
    rep = SuiteReport("PC(F) equals Cartesian sections")
    ps = generated(count, seed)
    twisted = 0
    for i, p in enumerate(ps):
        rep.extend(check_pseudofunctor(p), f"instance {i}/pseudofunctor")
        rep.extend(compare_pc_csect(p, pc_of(p), pc_of(p, "lax")), f"instance {i}")
        twisted += not is_strict(p)
    rep.stats = {"instances": len(ps), "non_strict": twisted,
                 "max_base_objects": max(len(p.base.objects) for p in ps),
                 "max_fibre_objects": max(len(p.fibre(x).objects) for p in ps for x in p.base.objects)}
    return rep


# ------------------------------------------------------------ pseudolimits

def cone_from_object(p, o):
    shape = one()
    legs = {x: FunctorData(shape, p.fibre(x), {"*": o.family[x]},
                           {"id_*": p.fibre(x).identity(o.family[x])}, f"G_{x}") for x in p.base.objects}
    return TestCone(shape, legs, {f: {"*": o.transitions[f]} for f in p.base.morphisms})


def cone_from_morphism(p, m):
    shape = arrow()
    legs = {}
    for x in p.base.objects:
        k = p.fibre(x)
        a, b = m.src.family[x], m.tgt.family[x]
        legs[x] = FunctorData(shape, k, {"X": a, "Y": b},
                              {"id_X": k.identity(a), "id_Y": k.identity(b), "u": m.components[x]}, f"G_{x}")
    wit = {f: {"X": m.src.transitions[f], "Y": m.tgt.transitions[f]} for f in p.base.morphisms}
    return TestCone(shape, legs, wit)


def pseudolimit_property(count=20, seed=0):
    """Every cone from One and from Arrow factors uniquely; the cones are all
    pairs of compatible leg families, listed from the enumerated PC(F)."""
    rep = SuiteReport("pseudolimit universal property")
    ps = named_instances() + generated(count, seed)[:count]
    cones = 0
    for i, p in enumerate(ps):
        pc = pc_of(p)
        for o in pc.pc_objects.values():
            rep.extend(verify_pseudolimit(p, cone_from_object(p, o), pc), f"instance {i}/One")
            cones += 1
        for m in pc.pc_morphisms.values():
            rep.extend(verify_pseudolimit(p, cone_from_morphism(p, m), pc), f"instance {i}/Arrow")
            cones += 1
    rep.stats = {"instances": len(ps), "cones": cones}
    return rep


# ------------------------------------------------------------ cocycle derivations

def cocycle_derivations(samples=20, seed=0):
    """tau_id = id on every enumerated object, and every single-transition change
    on sampled objects is rejected by validate_family."""
    rep = SuiteReport("cocycle derivations")
    ps = named_instances() + generated(seed=seed)
    total = 0
    pool = []
    for i, p in enumerate(ps):
        pc = pc_of(p)
        c = p.base
        for o in pc.pc_objects.values():
            total += 1
            for x in c.objects:
                if o.transitions[c.identity(x)] != p.fibre(x).identity(o.family[x]):
                    rep.add("tau_id", instance=i, object=x)
            pool.append((i, p, o))
    rng = random.Random(seed)
    picked = rng.sample(pool, min(samples, len(pool)))
    perturbations = survived = 0
    for i, p, o in picked:
        c = p.base
        for f in c.morphisms:
            fx = p.fibre(c.src(f))
            current = o.transitions[f]
            for other in fx.hom(fx.src(current), fx.tgt(current)):
                if other == current:
                    continue
                perturbations += 1
                trans = dict(o.transitions)
                trans[f] = other
                if validate_family(p, PCObject(o.family, trans)).ok:
                    survived += 1
                    rep.add("perturbation-accepted", instance=i, morphism=f)
    rep.stats = {"objects": total, "sampled": len(picked), "perturbations": perturbations, "accepted": survived}
    return rep


# ------------------------------------------------------------ limits in PC

def _diagrams(p, pc):
    """The empty diagram and the discrete diagram on each ordered pair of the first objects."""
    out = [PCDiagram(discrete([], "Empty"), {}, {})]
    objs = list(pc.pc_objects.values())[:3]
    for a in objs:
        for b in objs:
            out.append(PCDiagram(discrete(["l", "r"], "Pair"), {"l": a, "r": b},
                                 {"id_l": identity_pc(p, a), "id_r": identity_pc(p, b)}))
    return out


def limits_agree(minimum=20, seed=0):
    rep = SuiteReport("componentwise (co)limits")
    ps = named_instances() + generated(50, seed)
    used, checked, skipped = set(), 0, 0
    for i, p in enumerate(ps):
        pc = pc_of(p)
        for orientation in ("limit", "colimit"):
            for d in _diagrams(p, pc):
                try:
                    apex, legs = pc_limit(p, d, orientation)
                except (FibreLimitMissing, NotPreserved, NoLimit):
                    skipped += 1
                    continue
                rep.extend(check_pc_limit(p, d, apex, legs, orientation, pc), f"instance {i}/{orientation}")
                used.add(i)
                checked += 1
    if len(used) < minimum:
        rep.add("too-few-instances", found=len(used), needed=minimum)
    rep.stats = {"instances": len(used), "diagrams": checked, "skipped": skipped}
    return rep


# ------------------------------------------------------------ terminal collapse

def terminal_collapse(count=50, seed=0):
    rep = SuiteReport("terminal collapse")
    n = 0
    for i, p in enumerate(named_instances() + generated(count, seed)):
        try:
            find_terminal(p.base)
        except NoTerminalObject:
            continue
        rep.extend(check_collapse(collapse_terminal(p), pc_of(p)), f"instance {i}")
        n += 1
    rep.stats = {"instances": n}
    return rep


# ------------------------------------------------------------ functor layer

def functor_layer(count=50, seed=0):
    rep = SuiteReport("functor layer")
    p = fx.chaos2_bz2()
    k = p.fibre("*")
    sw = fx.swap_functor(k)
    swap = fx.thin_pseudonat(p, p, {"*": sw}, "swap")
    pc = pc_of(p)
    rep.extend(pc_two_functor_laws([swap, swap], pcs={p: pc}), "chaos2-bz2")
    units = {"*": NatTransData(identity_functor(k), compose_functors(sw, sw), {o: k.identity(o) for o in k.objects})}
    rep.extend(check_adjunction(lift_adjunction(swap, swap, units, units, pc, pc)), "chaos2-bz2/adjunction")
    lifted = change_of_fibre(swap, pc, pc)
    rep.extend(check_functor(lifted), "chaos2-bz2/swap")
    rep.extend(check_equivalence(lifted), "chaos2-bz2/swap")
    # twisting a strict instance is a componentwise equivalence (identity components)
    lifts = 0
    rng = random.Random(seed)
    for i, q in enumerate(generated(count, seed)):
        if not is_strict(q) or len(pc_of(q).objects) == 0:
            continue
        t, tau = twist(q, rng=rng)
        pc_q, pc_t = pc_of(q), enumerate_pc(t)
        rep.extend(pc_two_functor_laws([tau], pcs={q: pc_q, t: pc_t}), f"instance {i}")
        eq = change_of_fibre(tau, pc_q, pc_t)
        rep.extend(check_functor(eq), f"instance {i}/twist")
        rep.extend(check_equivalence(eq), f"instance {i}/twist")
        lifts += 1
    rep.stats = {"twist_lifts": lifts}
    return rep


# ------------------------------------------------------------ equivariance

def _morphisms_for(model, a, k):
    """PC endomorphisms of a descended object: all of them for finite fibres, scalars for matrices."""
    if isinstance(k, MatQ):
        return [PCMorphism(a, a, {n: tuple(Matrix.scalar(d, lam) for d in dims) for n, dims in a.family.items()})
                for lam in (2, -1)]
    return pc_hom(model.p_x, a, a)


def equivariance(seed=0):
    rep = SuiteReport("equivariance and GIT")
    rng = random.Random(seed)
    n = 0
    for k in (bz2(), MatQ(2)):
        for twisted in (False, True):
            fbar = FamilyPseudofunctor(k, twisted=twisted, seed=seed)
            for order in (2, 3, 4):
                g = cyclic(order)
                for space in (regular(g, "X"), trivial_gset(g, ["a", "b"], "2pt")):
                    model = EquivarianceModel(g, space, fbar)
                    a = descend(model.p_x, random_naive_data(k, space, rng))
                    label = f"{k.name}/{'twisted' if twisted else 'strict'}/{g.name}/{space.name}"
                    rep.extend(validate_family(model.p_x, a), f"{label}/A")
                    theta = equivariance_theta(model, a)
                    rep.extend(check_theta(model, a, theta), label)
                    rep.extend(check_git_cocycle(model, a, theta), label)
                    for m in _morphisms_for(model, a, k)[:4]:
                        rep.extend(check_theta_naturality(model, m), label)
                    n += 1
    rep.stats = {"instances": n}
    return rep


# ------------------------------------------------------------ change of groups

def change_of_groups(seed=0):
    rep = SuiteReport("change of groups")
    rng = random.Random(seed)
    for k in (MatQ(2), bz2()):
        for twisted in (False, True):
            fbar = FamilyPseudofunctor(k, twisted=twisted, seed=seed)
            for chain in ((1, 1, 2, 4), (1, 2, 4, 4)):
                homs = [cyclic_inclusion(a, b) for a, b in zip(chain, chain[1:])]
                space = regular(cyclic(4), "X")
                tower = Tower(homs, space, fbar)
                a = descend(tower.preeq[3], random_naive_data(k, space, rng))
                label = f"{k.name}/{'twisted' if twisted else 'strict'}/{'>'.join(map(str, chain))}"
                for i, j, l in ((0, 1, 2), (1, 2, 3), (0, 1, 3), (0, 2, 3)):
                    x = a if l == 3 else ChangeOfGroups(tower, l, 3).obj(a)
                    rep.extend(check_compositor(tower, i, j, l, x), f"{label}/{i}{j}{l}")
                rep.extend(check_chofg_associativity(tower, a), label)
            tower = Tower([cyclic_inclusion(1, 2)], regular(cyclic(2), "X"), fbar)
            a = descend(tower.preeq[1], random_naive_data(k, tower.top_space, rng))
            collapsed, forgotten, iso = deequivariantification(tower, a)
            power = fbar.fibre(tuple(tower.spaces[0].carrier))
            if power.src(iso) != collapsed or power.tgt(iso) != forgotten or not power.is_iso(iso):
                rep.add("de-equivariantification", fibre=k.name, twisted=twisted)
            if forgetful_pair(tower.preeq[1]).forget(a) != forgotten:
                rep.add("forget", fibre=k.name, twisted=twisted)
    return rep


# ------------------------------------------------------------ traces

def traces(trials=100, seed=0):
    rep = SuiteReport("equivariant traces")
    count, failures = random_additivity_trials(trials, seed)
    for f in failures:
        rep.extend(f, "additivity")
    rng = random.Random(seed)
    k = MatQ(4)
    strict = FamilyPseudofunctor(k)
    for order in (1, 2, 3):
        g = cyclic(order)
        space = trivial_gset(g, ["p", "q"])
        model = EquivarianceModel(g, space, strict)
        dims = {"p": 3, "q": 1}
        data = NaiveData(dims, {(h, x): Matrix.identity(d) for h in g.elements for x, d in dims.items()})
        a = descend(model.p_x, data)
        for (h, x), t in trace_table(model, a).items():
            if t != dims[x]:
                rep.add("trace=dimension", element=h, point=x)
    g = cyclic(2)
    for twisted in (False, True):
        fbar = FamilyPseudofunctor(k, twisted=twisted, seed=seed)
        one_pt = EquivarianceModel(g, trivial_gset(g, ["p"]), fbar)
        two_pt = EquivarianceModel(g, trivial_gset(g, ["p", "q"]), fbar)
        a = descend(one_pt.p_x, random_naive_data(k, one_pt.space, rng, 3))
        rep.extend(check_pushforward(one_pt, two_pt, {"p": "q"}, a), "pushforward")
        reg = EquivarianceModel(g, regular(g, "X"), fbar)
        a = descend(reg.p_x, random_naive_data(k, reg.space, rng, 2))
        rep.extend(check_pushforward(reg, reg, {"0": "0", "1": "1"}, a), "pushforward/identity")
    fbar = strict
    x_pt = EquivarianceModel(g, trivial_gset(g, ["p"]), fbar)
    y_two = EquivarianceModel(g, trivial_gset(g, ["p", "q"]), fbar)
    y_reg = EquivarianceModel(g, regular(g, "X"), fbar)
    for h in ({"p": "p"}, {"p": "q"}):
        a = descend(y_two.p_x, random_naive_data(k, y_two.space, rng, 3))
        rep.extend(check_pullback(x_pt, y_two, h, a), "pullback/constant")
    a = descend(y_reg.p_x, random_naive_data(k, y_reg.space, rng, 2))
    rep.extend(check_pullback(y_reg, y_reg, {"0": "1", "1": "0"}, a), "pullback/translation")
    rep.stats = {"additivity_trials": count}
    return rep


SUITE = {
    "pc-equals-sections": pc_equals_sections,
    "pseudolimit": pseudolimit_property,
    "cocycle-derivations": cocycle_derivations,
    "limits": limits_agree,
    "terminal-collapse": terminal_collapse,
    "functor-layer": functor_layer,
    "equivariance": equivariance,
    "change-of-groups": change_of_groups,
    "traces": traces,
}
