"""Command-line runner: load an instance document, run the requested checks and
print a report.  Exit 0 when every check passes, 1 on a failed check, 2 on a
malformed document, 3 when an enumeration cap is hit."""
import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations

from . import serialize, suite
from .equivariant import (ChangeOfGroups, check_chofg_associativity, check_compositor, check_equivalences,
                          check_forgetful_pair, check_git_cocycle, check_naive, check_theta, check_theta_naturality,
                          deequivariantification, descend, equivariance_theta, forgetful_pair)
from .errors import (EnumerationCapExceeded, FibreLimitMissing, NoLimit, NotPreserved, PseudoconeError, SchemaError,
                     UnknownFixture)
from .fincat import NatTransData, check_category, check_equivalence, check_functor, identity_functor
from .fixtures import meet_monoidal
from .functors import TranslationData, change_of_fibre, pc_two_functor_laws, translate_along
from .grothendieck import compare_pc_csect
from .gsets import check_group, check_gset, cyclic_inclusion
from .matrix import MatQ, Matrix
from .pseudocone import (PCMorphism, check_monoidal_data, check_pc_limit, check_pc_monoidal, enumerate_pc,
                         pc_hom, pc_limit, pc_tensor)
from .report import Report
from .trace import check_additivity, check_dualizable, trace_table
from .twocat import check_pseudofunctor, natural_automorphisms, twist

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_CAP = 0, 1, 2, 3
MAX_VIOLATIONS = 25
EQUIVALENCE_CAPS = {"base_objects": 10, "base_morphisms": 200, "fibre_objects": 64, "fibre_morphisms": 4096}


class Check:
    """One named check: a thunk returning a Report, plus stats it fills in."""

    def __init__(self, name, fn):
        self.name, self.fn = name, fn


class Context:
    def __init__(self, instance, seed, max_enumeration):
        self.instance, self.seed, self.max_enumeration = instance, seed, max_enumeration
        self._pc = {}

    def pc(self, p, kind="pseudo", caps=None):
        key = (id(p), kind)
        if key not in self._pc:
            self._pc[key] = enumerate_pc(p, kind, caps, self.max_enumeration)
        return self._pc[key]

    def need(self, attr, what):
        value = getattr(self.instance, attr)
        if value is None:
            raise SchemaError(f"this command needs {what} in the instance")
        return value


def _rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# ------------------------------------------------------------ structure checks

def _structure_checks(ctx):
    inst = ctx.instance
    out = []
    if inst.category is not None:
        out.append(Check("structure/category", lambda: check_category(inst.category)))
    if inst.pseudofunctor is not None:
        out.append(Check("structure/pseudofunctor", lambda: check_pseudofunctor(inst.pseudofunctor)))
    if inst.group is not None:
        out.append(Check("structure/group", lambda: _listed("group", check_group(inst.group))))
    if inst.gset is not None:
        out.append(Check("structure/gset", lambda: _listed("gset", check_gset(inst.gset))))
    if inst.naive is not None:
        out.append(Check("structure/naive", lambda: check_naive(inst.fibre, inst.gset, inst.naive)))
    return out


def _listed(subject, problems):
    rep = Report(subject)
    for p in problems:
        rep.add(p[0], at=list(p[1:]))
    return rep


# ------------------------------------------------------------ pc

def pc_build(ctx):
    p = ctx.need("pseudofunctor", "a pseudofunctor")

    def run():
        rep = Report("pc build")
        pc = ctx.pc(p)
        lc = ctx.pc(p, "lax")
        rep.extend(compare_pc_csect(p, pc, lc), "sections")
        rep.stats = {"object_count": len(pc.objects), "morphism_count": len(pc.morphisms),
                     "lax_object_count": len(lc.objects), "lax_morphism_count": len(lc.morphisms)}
        return rep
    return [Check("pc/build", run)]


def pc_limit_checks(ctx):
    p = ctx.need("pseudofunctor", "a pseudofunctor")

    def run(orientation):
        """Diagrams whose componentwise (co)limit does not exist in some fibre are
        counted, not failed; every computed one must match the brute-force oracle."""
        rep = Report(f"pc {orientation}")
        pc = ctx.pc(p)
        diagrams = suite._diagrams(p, pc)
        computed, missing = 0, {}
        for i, d in enumerate(diagrams):
            try:
                apex, legs = pc_limit(p, d, orientation)
            except (FibreLimitMissing, NoLimit, NotPreserved) as e:
                missing[type(e).__name__] = missing.get(type(e).__name__, 0) + 1
                continue
            rep.extend(check_pc_limit(p, d, apex, legs, orientation, pc), f"diagram {i}")
            computed += 1
        rep.stats = {"diagrams": len(diagrams), "computed": computed, "not_computed": missing}
        return rep
    return [Check("pc/limit", lambda: run("limit")), Check("pc/colimit", lambda: run("colimit"))]


def pc_tensor_check(ctx):
    p = ctx.need("pseudofunctor", "a pseudofunctor")
    if ctx.instance.monoidal != "meet":
        raise SchemaError("pc tensor needs \"monoidal\": \"meet\" in the instance")

    def run():
        rep = Report("pc tensor")
        m = meet_monoidal(p)
        rep.extend(check_monoidal_data(p, m), "data")
        if not rep.ok:
            return rep
        pc = ctx.pc(p)
        objs = list(pc.pc_objects.values())
        rep.extend(check_pc_monoidal(p, m, objs), "laws")
        closed = sum(1 for a in objs for b in objs if pc_tensor(p, m, a, b).key() in pc.pc_objects)
        if closed != len(objs) ** 2:
            rep.add("tensor/closure", missing=len(objs) ** 2 - closed)
        rep.stats = {"objects": len(objs), "tensor_pairs": closed}
        return rep
    return [Check("pc/tensor", run)]


# ------------------------------------------------------------ functor

def functor_lift(ctx):
    p = ctx.need("pseudofunctor", "a pseudofunctor")

    def run():
        rep = Report("functor lift")
        q, tau = twist(p, ctx.seed)
        pc_p, pc_q = ctx.pc(p), ctx.pc(q)
        rep.extend(pc_two_functor_laws([tau], pcs={p: pc_p, q: pc_q}), "two-functor")
        lifted = change_of_fibre(tau, pc_p, pc_q)
        rep.extend(check_functor(lifted), "functor")
        rep.extend(check_equivalence(lifted), "equivalence")
        rep.stats = {"source_objects": len(pc_p.objects), "target_objects": len(pc_q.objects)}
        return rep
    return [Check("functor/lift", run)]


def functor_translate(ctx):
    p = ctx.need("pseudofunctor", "a pseudofunctor")

    def run():
        """Translate along every natural automorphism of the identity of the base;
        the change-of-fibre route and the direct compositor formula must agree."""
        rep = Report("functor translate")
        c = p.base
        ident = identity_functor(c)
        autos = natural_automorphisms(ident)
        for i, comps in enumerate(autos):
            alpha = NatTransData(ident, ident, comps, f"a{i}")
            t = translate_along(TranslationData(ident, ident, ident, alpha, p))
            rep.extend(check_functor(t.functor), f"alpha {i}")
            if t.functor.obj_map != t.direct.obj_map or t.functor.mor_map != t.direct.mor_map:
                rep.add("routes-differ", alpha=i)
        rep.stats = {"translations": len(autos)}
        return rep
    return [Check("functor/translate", run)]


# ------------------------------------------------------------ equivariant

def _descended(ctx):
    inst = ctx.instance
    ctx.need("naive", "naive equivariant data")
    model = inst.model()
    return model, descend(model.p_x, inst.naive)


def _scalar_morphisms(model, a, k):
    if isinstance(k, MatQ):
        return [PCMorphism(a, a, {n: tuple(Matrix.scalar(d, lam) for d in dims) for n, dims in a.family.items()})
                for lam in (2, -1)]
    return pc_hom(model.p_x, a, a)


def equiv_theta(ctx):
    def run():
        rep = Report("equivariance")
        model, a = _descended(ctx)
        theta = equivariance_theta(model, a)
        rep.extend(check_theta(model, a, theta), "theta")
        morphisms = _scalar_morphisms(model, a, ctx.instance.fibre)[:4]
        for m in morphisms:
            rep.extend(check_theta_naturality(model, m), "naturality")
        space = model.space
        if all(space.act(g, x) == x for g in model.group.elements for x in space.carrier):
            pair = forgetful_pair(model.p_x)
            rep.extend(check_forgetful_pair(pair, [pair.forget(a)]), "forget")
        rep.stats = {"resolution_objects": len(model.resl_gx.objects),
                     "resolution_morphisms": len(model.resl_gx.morphisms), "naturality_morphisms": len(morphisms)}
        return rep
    return [Check("equiv/theta", run)]


def equiv_git(ctx):
    def run():
        model, a = _descended(ctx)
        rep = check_git_cocycle(model, a, equivariance_theta(model, a))
        rep.stats = {"triple_objects": len(model.resl_ggx.objects),
                     "triple_morphisms": len(model.resl_ggx.morphisms)}
        return rep
    return [Check("equiv/git", run)]


def equiv_chofg(ctx):
    inst = ctx.instance
    ctx.need("tower", "a tower")

    def run():
        rep = Report("change of groups")
        tower, a = inst.tower_data()
        top = tower.n
        level = {top: a}
        for i in range(top):
            level[i] = ChangeOfGroups(tower, i, top).obj(a)
        triples = list(combinations(range(top + 1), 3))
        for i, j, l in triples:
            rep.extend(check_compositor(tower, i, j, l, level[l]), f"{i}{j}{l}")
        quads = list(combinations(range(top + 1), 4))
        for q in quads:
            rep.extend(check_chofg_associativity(tower, level[q[3]], q), "".join(map(str, q)))
        if tower.groups[0].order() == 1 and top >= 1:
            collapsed, forgotten, iso = deequivariantification(tower, level[1])
            power = tower.fbar.fibre(tuple(tower.spaces[0].carrier))
            if power.src(iso) != collapsed or power.tgt(iso) != forgotten or not power.is_iso(iso):
                rep.add("de-equivariantification")
            if forgetful_pair(tower.preeq[1]).forget(level[1]) != forgotten:
                rep.add("de-equivariantification/forget")
        rep.stats = {"levels": top + 1, "compositors": len(triples), "associativity": len(quads)}
        return rep
    return [Check("equiv/chofg", run)]


def equiv_equivalences(ctx):
    inst = ctx.instance
    spec = ctx.need("equivalence", "an equivalence block")

    def run():
        caps = EQUIVALENCE_CAPS
        if spec["kind"] == "induction":
            inclusion = cyclic_inclusion(inst.group.order(), spec["ambient"])
            rep = check_equivalences("induction", inclusion=inclusion, space=inst.gset, k=inst.fibre, caps=caps)
        else:
            rep = check_equivalences("quotient", group=inst.group, normal=spec["normal"], space=inst.gset,
                                     k=inst.fibre, caps=caps)
        rep.stats = dict(rep.sizes)
        return rep
    return [Check(f"equiv/equivalence/{spec['kind']}", run)]


# ------------------------------------------------------------ trace

def trace_checks(ctx):
    k = ctx.instance.fibre

    def traces():
        rep = Report("traces")
        model, a = _descended(ctx)
        if not isinstance(k, MatQ):
            raise SchemaError("traces need a matrix fibre")
        rep.extend(check_dualizable(k), "dualizable")
        table = trace_table(model, a)
        rep.stats = {"traces": {f"{g}@{x}": _rational(t) for (g, x), t in sorted(table.items())}}
        return rep

    def additivity():
        model, a = _descended(ctx)
        if not isinstance(k, MatQ):
            raise SchemaError("traces need a matrix fibre")
        if 2 * max(ctx.instance.naive.values.values()) > k.n:
            rep = Report("trace additivity")
            rep.skipped = f"A + A does not fit in {k.name}"
            return rep
        return check_additivity(model, a, a)
    return [Check("trace", traces), Check("trace/additivity", additivity)]


# ------------------------------------------------------------ running

COMMANDS = {
    ("pc", "build"): pc_build,
    ("pc", "limit"): pc_limit_checks,
    ("pc", "tensor"): pc_tensor_check,
    ("functor", "lift"): functor_lift,
    ("functor", "translate"): functor_translate,
    ("equiv", "theta"): equiv_theta,
    ("equiv", "git"): equiv_git,
    ("equiv", "chofg"): equiv_chofg,
    ("equiv", "equivalences"): equiv_equivalences,
    ("trace",): trace_checks,
}


def _declared(ctx):
    out = _structure_checks(ctx)
    for name in ctx.instance.checks:
        key = tuple(name.split())
        if key not in COMMANDS:
            raise SchemaError(f"unknown check {name!r}")
        out.extend(COMMANDS[key](ctx))
    return out


def _workers():
    try:
        n = int(os.environ.get("PSEUDOCONE_THREADS", "0"))
    except ValueError:
        n = 0
    return max(1, n or min(4, os.cpu_count() or 1))


def _run_one(check, timing):
    start = time.perf_counter()
    try:
        rep = check.fn()
    except EnumerationCapExceeded:
        raise
    except SchemaError:
        raise
    except PseudoconeError as e:
        rep = Report(check.name)
        rep.add("error", kind=type(e).__name__, message=str(e))
    status = "skip" if getattr(rep, "skipped", None) else "pass" if rep.ok else "fail"
    entry = {"name": check.name, "status": status,
             "violation_count": len(rep.violations), "violations": rep.violations[:MAX_VIOLATIONS],
             "stats": getattr(rep, "stats", {}) or {}}
    if status == "skip":
        entry["reason"] = rep.skipped
    if timing:
        entry["seconds"] = round(time.perf_counter() - start, 3)
    return entry


def run_checks(checks, timing=False):
    """Run checks concurrently; the result list is sorted by check name."""
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        results = list(pool.map(lambda c: _run_one(c, timing), checks))
    return sorted(results, key=lambda r: r["name"])


def selftest_checks(seed):
    return [Check(f"selftest/{name}", (lambda fn: lambda: fn(seed=seed))(fn)) for name, fn in suite.SUITE.items()]


def _render(doc, fmt):
    if fmt == "json":
        return serialize.dumps(doc)
    lines = []
    for c in doc.get("checks", []):
        lines.append(f"{c['status'].upper():5} {c['name']}" + (f" ({c['reason']})" if "reason" in c else ""))
        for k, v in sorted(c["stats"].items()):
            lines.append(f"      {k}: {json.dumps(v, sort_keys=True)}")
        for v in c["violations"]:
            lines.append(f"      ! {json.dumps(v, sort_keys=True)}")
    lines.append("ok" if doc["ok"] else "FAILED")
    return "\n".join(lines) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(prog="pseudocone", description="Finite pseudocone and equivariance checks.")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized instances (default 0)")
    parser.add_argument("--max-enumeration", type=int, default=None, metavar="N",
                        help="abort with exit 3 once more than N candidates are examined")
    parser.add_argument("--format", choices=["json", "text"], default="json")
    parser.add_argument("--timing", action="store_true", help="include wall-clock seconds per check")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", help="validate every declared structure and run the listed checks").add_argument("file")
    for group, actions in (("pc", ["build", "limit", "tensor"]), ("functor", ["lift", "translate"]),
                           ("equiv", ["theta", "git", "chofg", "equivalences"])):
        g = sub.add_parser(group).add_subparsers(dest="action", required=True)
        for a in actions:
            g.add_parser(a).add_argument("file")
    sub.add_parser("trace", help="equivariant traces at every fixed point").add_argument("file")
    sub.add_parser("selftest", help="run the fixture property suite")
    emit = sub.add_parser("emit", help="print a canonical document").add_subparsers(dest="what", required=True)
    emit.add_parser("fixture").add_argument("name")
    return parser


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror}") from None
    try:
        return serialize.parse(text)
    except SchemaError:
        raise
    except PseudoconeError as e:
        raise SchemaError(f"{type(e).__name__}: {e}") from None


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.seed < 0 or args.seed >= 1 << 64:
        print("error: --seed must fit in 64 unsigned bits", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        if args.command == "emit":
            sys.stdout.write(serialize.emit_fixture(args.name))
            return EXIT_OK
        if args.command == "selftest":
            checks = selftest_checks(args.seed)
            subject = "selftest"
        else:
            ctx = Context(_load(args.file), args.seed, args.max_enumeration)
            if args.command == "check":
                checks = _declared(ctx)
            else:
                key = (args.command,) if args.command == "trace" else (args.command, args.action)
                checks = COMMANDS[key](ctx)
            subject = ctx.instance.name
        results = run_checks(checks, args.timing)
    except (SchemaError, UnknownFixture) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except EnumerationCapExceeded as e:
        print(f"error: enumeration cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    ok = all(r["status"] != "fail" for r in results)
    doc = {"instance": subject, "seed": args.seed, "checks": results, "ok": ok}
    sys.stdout.write(_render(doc, args.format))
    for r in results:
        if r["status"] == "fail":
            print(f"{r['name']}: {r['violation_count']} violation(s)", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
