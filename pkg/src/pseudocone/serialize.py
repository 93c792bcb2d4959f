"""Instance documents: JSON <-> categories, pseudofunctors, group actions and
equivariant families.  Shape is validated with a JSON schema; cross-references
(morphism ids, objects, group elements) are resolved by hand."""
import json
from fractions import Fraction

import jsonschema

from . import fixtures as fx
from .errors import SchemaError, UnknownFixture
from .equivariant import EquivarianceModel, FamilyPseudofunctor, NaiveData, Tower, descend
from .fincat import FinCat, FunctorData, NatTransData, bz2
from .gsets import FinGroup, GSet, cyclic, cyclic_inclusion, diagonal_power, regular, trivial_gset
from .matrix import MatQ, Matrix
from .twocat import PseudofunctorData, composable_pairs

_ID = {"type": "string"}
_CATEGORY = {
    "type": "object",
    "required": ["objects", "morphisms", "compose", "identities"],
    "properties": {
        "objects": {"type": "array", "items": _ID},
        "morphisms": {"type": "array", "items": {
            "type": "object", "required": ["id", "src", "tgt"],
            "properties": {"id": _ID, "src": _ID, "tgt": _ID}, "additionalProperties": False}},
        "compose": {"type": "array", "items": {"type": "array", "items": _ID, "minItems": 3, "maxItems": 3}},
        "identities": {"type": "object", "additionalProperties": _ID},
        "name": _ID,
    },
}
_TABLE = {"type": "object", "additionalProperties": _ID}
_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "string", "pattern": r"^-?\d+/\d+$"}}}
SCHEMA = {
    "type": "object",
    "properties": {
        "name": _ID,
        "category": _CATEGORY,
        "pseudofunctor": {
            "type": "object",
            "required": ["base", "fibres", "fibre_functors", "compositors"],
            "properties": {
                "name": _ID,
                "base": _CATEGORY,
                "fibres": {"type": "object", "additionalProperties": _CATEGORY},
                "fibre_functors": {"type": "object", "additionalProperties": {
                    "type": "object", "required": ["objects", "morphisms"],
                    "properties": {"objects": _TABLE, "morphisms": _TABLE}}},
                "compositors": {"type": "array", "items": {
                    "type": "object", "required": ["first", "then", "components"],
                    "properties": {"first": _ID, "then": _ID, "components": _TABLE}}},
            },
        },
        "monoidal": {"enum": ["meet"]},
        "group": {
            "type": "object", "required": ["elements", "identity", "table"],
            "properties": {"name": _ID, "elements": {"type": "array", "items": _ID}, "identity": _ID,
                           "table": {"type": "array", "items": {"type": "array", "items": _ID,
                                                                "minItems": 3, "maxItems": 3}}},
        },
        "gset": {
            "type": "object", "required": ["carrier", "action"],
            "properties": {"name": _ID, "carrier": {"type": "array", "items": _ID},
                           "action": {"type": "array", "items": {"type": "array", "items": _ID,
                                                                 "minItems": 3, "maxItems": 3}}},
        },
        "resolution_generators": {"type": "array", "items": {
            "type": "object", "required": ["name", "kind"],
            "properties": {"name": _ID, "kind": {"enum": ["regular", "diagonal"]},
                           "power": {"type": "integer", "minimum": 1, "maximum": 3}}}},
        "fibre": {"oneOf": [{"const": "BZ2"}, {
            "type": "object", "required": ["matq"], "properties": {"matq": {"type": "integer", "minimum": 0}}}]},
        "twisted": {"type": "boolean"},
        "twist_seed": {"type": "integer"},
        "naive": {
            "type": "object", "required": ["values", "actions"],
            "properties": {"values": {"type": "object"},
                           "actions": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3}}},
        },
        "tower": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2},
        "equivalence": {
            "type": "object", "required": ["kind"],
            "properties": {"kind": {"enum": ["induction", "quotient"]}, "ambient": {"type": "integer", "minimum": 1},
                           "normal": {"type": "array", "items": _ID}},
            "additionalProperties": False,
        },
        "checks": {"type": "array", "items": _ID},
    },
    "additionalProperties": False,
}


def dumps(doc):
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not JSON: {e}") from None
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {e.message}") from None
    return doc


# ------------------------------------------------------------ categories

def category_to_doc(c):
    doc = c.to_tables()
    doc["name"] = c.name
    return doc


def category_from_doc(doc, where="category"):
    objs = list(doc["objects"])
    if len(set(objs)) != len(objs):
        raise SchemaError(f"{where}: repeated object")
    known = set(objs)
    ids = set()
    for m in doc["morphisms"]:
        if m["id"] in ids:
            raise SchemaError(f"{where}: repeated morphism id {m['id']}")
        ids.add(m["id"])
        for end in ("src", "tgt"):
            if m[end] not in known:
                raise SchemaError(f"{where}: morphism {m['id']} has unknown {end} {m[end]}")
    for g, f, r in doc["compose"]:
        for x in (g, f, r):
            if x not in ids:
                raise SchemaError(f"{where}: compose mentions unknown morphism {x}")
    if set(doc["identities"]) != known:
        raise SchemaError(f"{where}: identities must list every object")
    for a, m in doc["identities"].items():
        if m not in ids:
            raise SchemaError(f"{where}: identity of {a} is unknown morphism {m}")
    table = {(g, f): r for g, f, r in doc["compose"]}
    return FinCat(objs, [(m["id"], m["src"], m["tgt"]) for m in doc["morphisms"]], doc["identities"], table,
                  doc.get("name", "C"))


def _functor_from_doc(doc, src, tgt, where):
    for a in src.objects:
        if a not in doc["objects"] or not tgt.has_object(doc["objects"][a]):
            raise SchemaError(f"{where}: object {a} has no image in the target")
    for m in src.morphisms:
        if m not in doc["morphisms"] or not tgt.has_morphism(doc["morphisms"][m]):
            raise SchemaError(f"{where}: morphism {m} has no image in the target")
    return FunctorData(src, tgt, doc["objects"], doc["morphisms"], where)


def pseudofunctor_to_doc(p):
    c = p.base
    return {
        "name": p.name,
        "base": category_to_doc(c),
        "fibres": {x: category_to_doc(p.fibre(x)) for x in c.objects},
        "fibre_functors": {f: {"objects": {a: p.fmap(f).obj(a) for a in p.fibre(c.tgt(f)).objects},
                               "morphisms": {m: p.fmap(f).mor(m) for m in p.fibre(c.tgt(f)).morphisms}}
                           for f in c.morphisms},
        "compositors": [{"first": f, "then": g,
                         "components": {a: p.phi(f, g, a) for a in p.fibre(c.tgt(g)).objects}}
                        for f, g in sorted(composable_pairs(c))],
    }


def pseudofunctor_from_doc(doc):
    base = category_from_doc(doc["base"], "base")
    fibres = {}
    for x in base.objects:
        if x not in doc["fibres"]:
            raise SchemaError(f"no fibre over {x}")
        fibres[x] = category_from_doc(doc["fibres"][x], f"fibre {x}")
    functors = {}
    for f in base.morphisms:
        if f not in doc["fibre_functors"]:
            raise SchemaError(f"no fibre functor for {f}")
        functors[f] = _functor_from_doc(doc["fibre_functors"][f], fibres[base.tgt(f)], fibres[base.src(f)],
                                        f"F({f})")
    comps = {}
    for entry in doc["compositors"]:
        f, g = entry["first"], entry["then"]
        if not base.has_morphism(f) or not base.has_morphism(g) or base.tgt(f) != base.src(g):
            raise SchemaError(f"compositor for a non-composable pair ({f}, {g})")
        cx = fibres[base.src(f)]
        for a, m in entry["components"].items():
            if not cx.has_morphism(m):
                raise SchemaError(f"compositor ({f}, {g}) at {a} is unknown morphism {m}")
        ff, fg = functors[f], functors[g]
        src = FunctorData(fg.src, cx, {a: ff.obj(fg.obj(a)) for a in fg.src.objects},
                          {m: ff.mor(fg.mor(m)) for m in fg.src.morphisms})
        comps[(f, g)] = NatTransData(src, functors[base.compose(g, f)], entry["components"], f"phi_{f},{g}")
    for pair in composable_pairs(base):
        if pair not in comps:
            raise SchemaError(f"no compositor for {pair}")
    return PseudofunctorData(base, fibres, functors, comps, doc.get("name", "F"))


# ------------------------------------------------------------ groups, actions, families

def group_to_doc(g):
    return {"name": g.name, "elements": list(g.elements), "identity": g.e,
            "table": [[a, b, g.mul(a, b)] for a in g.elements for b in g.elements]}


def group_from_doc(doc):
    els = list(doc["elements"])
    table = {}
    for a, b, c in doc["table"]:
        if a not in els or b not in els or c not in els:
            raise SchemaError(f"group table mentions an unknown element in {[a, b, c]}")
        table[(a, b)] = c
    if len(table) != len(els) ** 2:
        raise SchemaError("group table is incomplete")
    if doc["identity"] not in els:
        raise SchemaError("group identity is not an element")
    return FinGroup(els, table, doc["identity"], doc.get("name", "G"))


def gset_to_doc(s):
    return {"name": s.name, "carrier": list(s.carrier),
            "action": [[g, x, s.act(g, x)] for g in s.group.elements for x in s.carrier]}


def gset_from_doc(doc, group):
    carrier = list(doc["carrier"])
    act = {}
    for g, x, y in doc["action"]:
        if g not in group.elements or x not in carrier or y not in carrier:
            raise SchemaError(f"action mentions an unknown element in {[g, x, y]}")
        act[(g, x)] = y
    if len(act) != len(carrier) * len(group.elements):
        raise SchemaError("action table is incomplete")
    return GSet(group, carrier, lambda g, x: act[(g, x)], doc.get("name", "X"))


def matrix_to_doc(m):
    return [[f"{x.numerator}/{x.denominator}" for x in m.row(i)] for i in range(m.rows)]


def matrix_from_doc(rows, dim):
    try:
        entries = [Fraction(x) for r in rows for x in r]
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"bad rational in {rows}") from None
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise SchemaError(f"expected a {dim}x{dim} matrix")
    return Matrix(dim, dim, entries)


def fibre_from_doc(spec):
    if spec == "BZ2":
        return bz2()
    return MatQ(spec["matq"])


def fibre_to_doc(k):
    return {"matq": k.n} if isinstance(k, MatQ) else k.name


def naive_to_doc(k, space, data):
    enc = matrix_to_doc if isinstance(k, MatQ) else (lambda m: m)
    return {"values": {x: data.values[x] for x in space.carrier},
            "actions": [[g, x, enc(data.rho[(g, x)])] for g in space.group.elements for x in space.carrier]}


def naive_from_doc(doc, k, space):
    values = {}
    for x in space.carrier:
        if x not in doc["values"]:
            raise SchemaError(f"no value at {x}")
        v = doc["values"][x]
        if not k.has_object(v):
            raise SchemaError(f"value at {x} is not an object of {k.name}")
        values[x] = v
    rho = {}
    for g, x, m in doc["actions"]:
        if g not in space.group.elements or x not in space.carrier:
            raise SchemaError(f"action entry mentions an unknown element in {[g, x]}")
        if isinstance(k, MatQ):
            rho[(g, x)] = matrix_from_doc(m, values[x])
        else:
            if not isinstance(m, str) or not k.has_morphism(m):
                raise SchemaError(f"action of {g} at {x} is not a morphism of {k.name}")
            rho[(g, x)] = m
    if len(rho) != len(space.carrier) * len(space.group.elements):
        raise SchemaError("action table is incomplete")
    return NaiveData(values, rho)


def generators_from_doc(items, group):
    out = []
    for it in items:
        if it["kind"] == "regular":
            out.append((it["name"], regular(group, it["name"])))
        else:
            out.append((it["name"], diagonal_power(group, it.get("power", 2), it["name"])))
    return out


# ------------------------------------------------------------ instances

class Instance:
    """A parsed document with its built structures."""

    def __init__(self, doc):
        self.doc = doc
        self.name = doc.get("name", "instance")
        self.category = category_from_doc(doc["category"]) if "category" in doc else None
        self.pseudofunctor = pseudofunctor_from_doc(doc["pseudofunctor"]) if "pseudofunctor" in doc else None
        self.monoidal = doc.get("monoidal")
        if self.monoidal and self.pseudofunctor is None:
            raise SchemaError("monoidal data needs a pseudofunctor")
        self.group = group_from_doc(doc["group"]) if "group" in doc else None
        self.gset = None
        if "gset" in doc:
            if self.group is None:
                raise SchemaError("gset needs a group")
            self.gset = gset_from_doc(doc["gset"], self.group)
        self.fibre = fibre_from_doc(doc["fibre"]) if "fibre" in doc else None
        self.twisted = doc.get("twisted", False)
        self.twist_seed = doc.get("twist_seed", 0)
        self.generator_docs = doc.get("resolution_generators")
        self.generators = None
        if self.generator_docs is not None:
            if self.group is None:
                raise SchemaError("resolution generators need a group")
            self.generators = generators_from_doc(self.generator_docs, self.group)
        self.naive = None
        if "naive" in doc:
            if self.gset is None or self.fibre is None:
                raise SchemaError("naive data needs a gset and a fibre")
            self.naive = naive_from_doc(doc["naive"], self.fibre, self.gset)
        self.tower = doc.get("tower")
        if self.tower is not None:
            if self.gset is None or self.fibre is None:
                raise SchemaError("a tower needs a gset and a fibre")
            if self.group.order() != self.tower[-1]:
                raise SchemaError("the gset must live over the top group of the tower")
            for a, b in zip(self.tower, self.tower[1:]):
                if b % a:
                    raise SchemaError(f"Z/{a} does not embed in Z/{b}")
        self.equivalence = doc.get("equivalence")
        if self.equivalence is not None:
            if self.gset is None or self.fibre is None:
                raise SchemaError("an equivalence needs a gset and a fibre")
            kind = self.equivalence["kind"]
            if kind == "induction" and not isinstance(self.equivalence.get("ambient"), int):
                raise SchemaError("an induction equivalence needs an integer 'ambient' order")
            if kind == "quotient":
                normal = self.equivalence.get("normal")
                if not isinstance(normal, list) or any(h not in self.group.elements for h in normal):
                    raise SchemaError("a quotient equivalence needs 'normal', a list of group elements")
        self.checks = list(doc.get("checks", []))

    def fbar(self):
        return FamilyPseudofunctor(self.fibre, twisted=self.twisted, seed=self.twist_seed)

    def model(self):
        """The equivariance model over the instance's G-set."""
        if self.gset is None or self.fibre is None:
            raise SchemaError("an equivariant instance needs a group, a gset and a fibre")
        return EquivarianceModel(self.group, self.gset, self.fbar(), self.generators)

    def tower_data(self):
        """(tower, A) with A the descended naive data at the top level."""
        if self.tower is None or self.naive is None:
            raise SchemaError("no tower with naive data in this instance")
        homs = [cyclic_inclusion(a, b) for a, b in zip(self.tower, self.tower[1:])]
        tower = Tower(homs, self.gset, self.fbar())
        return tower, descend(tower.preeq[tower.n], self.naive)

    def to_doc(self):
        doc = {"name": self.name}
        if self.category is not None:
            doc["category"] = category_to_doc(self.category)
        if self.pseudofunctor is not None:
            doc["pseudofunctor"] = pseudofunctor_to_doc(self.pseudofunctor)
        if self.monoidal:
            doc["monoidal"] = self.monoidal
        if self.group is not None:
            doc["group"] = group_to_doc(self.group)
        if self.gset is not None:
            doc["gset"] = gset_to_doc(self.gset)
        if self.fibre is not None:
            doc["fibre"] = fibre_to_doc(self.fibre)
            doc["twisted"] = self.twisted
            doc["twist_seed"] = self.twist_seed
        if self.generator_docs is not None:
            doc["resolution_generators"] = [dict(g) for g in self.generator_docs]
        if self.naive is not None:
            doc["naive"] = naive_to_doc(self.fibre, self.gset, self.naive)
        if self.tower is not None:
            doc["tower"] = list(self.tower)
        if self.equivalence is not None:
            doc["equivalence"] = dict(self.equivalence)
        if self.checks:
            doc["checks"] = list(self.checks)
        return doc


def parse(text):
    return Instance(loads(text))


def render(instance):
    return dumps(instance.to_doc())


# ------------------------------------------------------------ fixture library

def _pseudofunctor_fixture(name, p, monoidal=None):
    doc = {"name": name, "pseudofunctor": pseudofunctor_to_doc(p)}
    if monoidal:
        doc["monoidal"] = monoidal
    return doc


def _equivariant_fixture(name, group, space, k, data, twisted=False, **extra):
    doc = {"name": name, "group": group_to_doc(group), "gset": gset_to_doc(space), "fibre": fibre_to_doc(k),
           "twisted": twisted, "twist_seed": 0, "resolution_generators": [{"name": "G", "kind": "regular"}],
           "naive": naive_to_doc(k, space, data)}
    doc.update(extra)
    return doc


def _z2_regular():
    g = cyclic(2)
    space = regular(g, "X")
    swap = Matrix.from_rows([[0, 1], [1, 0]])
    data = NaiveData({"0": 2, "1": 2}, {("0", "0"): Matrix.identity(2), ("0", "1"): Matrix.identity(2),
                                        ("1", "0"): swap, ("1", "1"): swap})
    return _equivariant_fixture("z2-regular-equivariant", g, space, MatQ(2), data, True)


def _z2_sign():
    g = cyclic(2)
    space = trivial_gset(g, ["p", "q"], "2pt")
    data = NaiveData({"p": 1, "q": 2}, {("0", "p"): Matrix.identity(1), ("1", "p"): Matrix.scalar(1, -1),
                                        ("0", "q"): Matrix.identity(2),
                                        ("1", "q"): Matrix.from_rows([[0, 1], [1, 0]])})
    return _equivariant_fixture("z2-sign-trace", g, space, MatQ(4), data)


def _chain():
    g = cyclic(4)
    space = regular(g, "X")
    quarter = Matrix.from_rows([[0, -1], [1, 0]])
    power = {"0": Matrix.identity(2)}
    for a in ("1", "2", "3"):
        power[a] = quarter @ power[str(int(a) - 1)]
    data = NaiveData({x: 2 for x in space.carrier}, {(a, x): power[a] for a in g.elements for x in space.carrier})
    return _equivariant_fixture("tower-1-2-4-4", g, space, MatQ(2), data, True, tower=[1, 2, 4, 4])


def _bz2_trivial(group, space):
    return NaiveData({x: "*" for x in space.carrier}, {(a, x): "id_*" for a in group.elements for x in space.carrier})


def _induction():
    g = cyclic(2)
    space = trivial_gset(g, ["p"], "pt")
    return _equivariant_fixture("induction-z2-z4", g, space, bz2(), _bz2_trivial(g, space),
                                equivalence={"kind": "induction", "ambient": 4})


def _quotient():
    g = cyclic(4)
    space = regular(g, "X")
    return _equivariant_fixture("quotient-z4-z2", g, space, bz2(), _bz2_trivial(g, space),
                                equivalence={"kind": "quotient", "normal": ["0", "2"]})


FIXTURES = {
    "swap-strict": lambda: _pseudofunctor_fixture("swap-strict", fx.swap_strict()),
    "chaos2-bz2": lambda: _pseudofunctor_fixture("chaos2-bz2", fx.chaos2_bz2()),
    "cnst-one": lambda: _pseudofunctor_fixture("cnst-one", fx.cnst_one()),
    "pow2-arrow": lambda: _pseudofunctor_fixture("pow2-arrow", fx.pow2_over_arrow(), "meet"),
    "pow2-bz2": lambda: _pseudofunctor_fixture("pow2-bz2", fx.pow2_over_bz2(), "meet"),
    "z2-regular-equivariant": _z2_regular,
    "z2-sign-trace": _z2_sign,
    "tower-1-2-4-4": _chain,
    "induction-z2-z4": _induction,
    "quotient-z4-z2": _quotient,
}


def emit_fixture(name):
    """Canonical text of a named fixture."""
    if name not in FIXTURES:
        raise UnknownFixture(f"no fixture named {name!r}; known: {', '.join(sorted(FIXTURES))}")
    return render(Instance(FIXTURES[name]()))
