"""The elements fibration El(F) -> C, Cartesian arrows detected by their
universal property, sections, and the literal comparison with PC(F)/LC(F)."""
from itertools import product

from . import canon
from .fincat import FinCat, FunctorData
from .pseudocone import enumerate_pc
from .report import Report


class ElCategory:
    def __init__(self, p, total, projection, obj_info, mor_info):
        self.p, self.total, self.projection = p, total, projection
        self.obj_info = obj_info  # id -> (X, A)
        self.mor_info = mor_info  # id -> (f0, f1)
        self._cart = {}

    def over(self, x):
        return [o for o in self.total.objects if self.obj_info[o][0] == x]

    def lifts(self, src, tgt, f0):
        return [m for m in self.total.hom(src, tgt) if self.mor_info[m][0] == f0]

    def is_cartesian(self, m):
        if m not in self._cart:
            self._cart[m] = _cartesian(self, m)
        return self._cart[m]


def _obj_id(x, a):
    return canon.key([x, a])


def _mor_id(src, tgt, f0, f1):
    return canon.key({"src": src, "tgt": tgt, "f0": f0, "f1": f1})


def build_elements(p):
    c = p.base
    obj_info = {}
    for x in c.objects:
        for a in p.fibre(x).objects:
            obj_info[_obj_id(x, a)] = (x, a)
    mor_info, ends = {}, []
    for f0 in c.morphisms:
        x, y = c.src(f0), c.tgt(f0)
        fx, ff = p.fibre(x), p.fmap(f0)
        for a in fx.objects:
            for b in p.fibre(y).objects:
                s, t = _obj_id(x, a), _obj_id(y, b)
                for f1 in fx.hom(ff.obj(b), a):
                    mid = _mor_id(s, t, f0, f1)
                    mor_info[mid] = (f0, f1)
                    ends.append((mid, s, t))
    tgt_of = {m: t for m, _, t in ends}
    by_src = {}
    for m, s, _ in ends:
        by_src.setdefault(s, []).append(m)
    table = {}
    src_of = {m: s for m, s, _ in ends}
    for f, (f0, f1) in mor_info.items():
        x = c.src(f0)
        fx = p.fibre(x)
        for g in by_src.get(tgt_of[f], []):
            g0, g1 = mor_info[g]
            h0 = c.compose(g0, f0)
            c_obj = obj_info[tgt_of[g]][1]
            h1 = fx.compose(f1, fx.compose(p.fmap(f0).mor(g1), p.phi_inv(f0, g0, c_obj)))
            table[(g, f)] = _mor_id(src_of[f], tgt_of[g], h0, h1)
    ident = {}
    for o, (x, a) in obj_info.items():
        ident[o] = _mor_id(o, o, c.identity(x), p.fibre(x).identity(a))
    total = FinCat(list(obj_info), ends, ident, table, f"El({getattr(p, 'name', 'F')})")
    proj = FunctorData(total, c, {o: x for o, (x, _) in obj_info.items()},
                       {m: f0 for m, (f0, _) in mor_info.items()}, "p")
    return ElCategory(p, total, proj, obj_info, mor_info)


def _cartesian(e, m):
    """Brute-force universal property: every k over f0 o g factors uniquely through m over g."""
    el, c = e.total, e.p.base
    src, tgt = el.src(m), el.tgt(m)
    f0 = e.mor_info[m][0]
    x = e.obj_info[src][0]
    for z_obj in el.objects:
        z = e.obj_info[z_obj][0]
        for k in el.hom(z_obj, tgt):
            k0 = e.mor_info[k][0]
            for g in c.hom(z, x):
                if c.compose(f0, g) != k0:
                    continue
                hits = [l for l in e.lifts(z_obj, src, g) if el.compose(m, l) == k]
                if len(hits) != 1:
                    return False
    return True


def _section_key(family, trans):
    return canon.key({"section": {"A": family, "T": trans}})


def sections(e, kind="all"):
    """Sections of El(F) -> C as a FinCat; morphisms are based natural transformations."""
    c, el = e.p.base, e.total
    xs = list(c.objects)
    mors = list(c.morphisms)
    found = []
    for objs in product(*[e.over(x) for x in xs]):
        s_obj = dict(zip(xs, objs))
        s_mor = {}

        def go(i):
            if i == len(mors):
                found.append((dict(s_obj), dict(s_mor)))
                return
            f = mors[i]
            for m in e.lifts(s_obj[c.src(f)], s_obj[c.tgt(f)], f):
                if f == c.identity(c.src(f)) and m != el.identity(s_obj[c.src(f)]):
                    continue
                if kind == "cartesian" and not e.is_cartesian(m):
                    continue
                s_mor[f] = m
                if _functorial_so_far(c, el, s_mor):
                    go(i + 1)
            s_mor.pop(f, None)

        go(0)
    objects = {}
    for s_obj, s_mor in found:
        fam = {x: e.obj_info[s_obj[x]][1] for x in xs}
        trans = {f: e.mor_info[s_mor[f]][1] for f in mors}
        objects[_section_key(fam, trans)] = (s_obj, s_mor, fam, trans)
    morphisms, comps = [], {}
    for k1, (o1, m1, _, _) in objects.items():
        for k2, (o2, m2, _, _) in objects.items():
            for choice in product(*[e.lifts(o1[x], o2[x], c.identity(x)) for x in xs]):
                theta = dict(zip(xs, choice))
                if all(el.compose(theta[c.tgt(f)], m1[f]) == el.compose(m2[f], theta[c.src(f)]) for f in mors):
                    comp = {x: e.mor_info[theta[x]][1] for x in xs}
                    mid = canon.key({"based": {"from": k1, "to": k2, "components": comp}})
                    morphisms.append((mid, k1, k2))
                    comps[mid] = theta
    table = {}
    by_src = {}
    for mid, s, t in morphisms:
        by_src.setdefault(s, []).append((mid, t))
    lookup = {}
    for mid, s, t in morphisms:
        lookup[(s, t, tuple(comps[mid][x] for x in xs))] = mid
    for f, s, t in morphisms:
        for g, t2 in by_src.get(t, []):
            composite = tuple(el.compose(comps[g][x], comps[f][x]) for x in xs)
            table[(g, f)] = lookup[(s, t2, composite)]
    ident = {k: lookup[(k, k, tuple(el.identity(o[x]) for x in xs))] for k, (o, _, _, _) in objects.items()}
    cat = FinCat(list(objects), morphisms, ident, table, f"{'CSect' if kind == 'cartesian' else 'Sect'}")
    cat.section_data = objects
    cat.based_components = {mid: {x: e.mor_info[comps[mid][x]][1] for x in xs} for mid in comps}
    return cat


def _functorial_so_far(c, el, s_mor):
    for f, mf in s_mor.items():
        for g, mg in s_mor.items():
            if c.tgt(f) != c.src(g):
                continue
            gf = c.compose(g, f)
            if gf in s_mor and s_mor[gf] != el.compose(mg, mf):
                return False
    return True


def rename_sections_op(sect):
    """Sect^op under s -> (A, T_A): objects and morphisms re-keyed exactly as PC encodes them."""
    obj = {}
    for k, (_, _, fam, trans) in sect.section_data.items():
        obj[k] = canon.key({"A": fam, "T": trans})
    mor = {}
    for m in sect.morphisms:
        # a based transformation s_B => s_A is a PC morphism A -> B
        s, t = sect.src(m), sect.tgt(m)
        mor[m] = canon.key({"src": obj[t], "tgt": obj[s], "P": sect.based_components[m]})
    table = {(mor[f], mor[g]): mor[r] for (g, f), r in sect.table.items()}
    ident = {obj[k]: mor[i] for k, i in sect.identities.items()}
    return set(obj.values()), set(mor.values()), table, ident


def compare_pc_csect(p, pc=None, lc=None):
    rep = Report("PC = CSect^op and LC = Sect^op")
    e = build_elements(p)
    pc = pc or enumerate_pc(p, "pseudo")
    lc = lc or enumerate_pc(p, "lax")
    for label, cones, kind in (("pseudo", pc, "cartesian"), ("lax", lc, "all")):
        objs, mors, table, ident = rename_sections_op(sections(e, kind))
        if objs != set(cones.objects):
            diff = sorted(objs ^ set(cones.objects))
            rep.add(f"{label}/objects", first_mismatch=diff[0])
            continue
        if mors != set(cones.morphisms):
            diff = sorted(mors ^ set(cones.morphisms))
            rep.add(f"{label}/morphisms", first_mismatch=diff[0])
            continue
        if table != cones.table:
            bad = next(k for k in sorted(set(table) | set(cones.table)) if table.get(k) != cones.table.get(k))
            rep.add(f"{label}/composition", first_mismatch=list(bad))
        if ident != cones.identities:
            rep.add(f"{label}/identities")
    return rep
