import json

import pytest

from pseudocone.cli import main
from pseudocone.serialize import emit_fixture


@pytest.fixture
def fixture_file(tmp_path):
    def write(name, text=None):
        path = tmp_path / f"{name}.json"
        path.write_text(text if text is not None else emit_fixture(name))
        return str(path)
    return write


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


COMMANDS = [
    ("chaos2-bz2", ["pc", "build"]),
    ("swap-strict", ["pc", "limit"]),
    ("pow2-arrow", ["pc", "tensor"]),
    ("chaos2-bz2", ["functor", "lift"]),
    ("pow2-bz2", ["functor", "translate"]),
    ("z2-regular-equivariant", ["equiv", "theta"]),
    ("z2-regular-equivariant", ["equiv", "git"]),
    ("tower-1-2-4-4", ["equiv", "chofg"]),
    ("induction-z2-z4", ["equiv", "equivalences"]),
    ("quotient-z4-z2", ["equiv", "equivalences"]),
    ("z2-sign-trace", ["trace"]),
    ("z2-sign-trace", ["check"]),
    ("cnst-one", ["check"]),
]


@pytest.mark.parametrize("name,command", COMMANDS, ids=[f"{n}:{' '.join(c)}" for n, c in COMMANDS])
def test_commands_pass_on_fixtures(capsys, fixture_file, name, command):
    code, out = _run(capsys, command + [fixture_file(name)])
    doc = json.loads(out)
    assert code == 0, out
    assert doc["ok"] and doc["instance"] == name
    assert all(c["status"] in ("pass", "skip") for c in doc["checks"])


def test_pc_build_counts_objects(capsys, fixture_file):
    _, out = _run(capsys, ["pc", "build", fixture_file("chaos2-bz2")])
    stats = json.loads(out)["checks"][0]["stats"]
    assert stats["object_count"] == 2


def test_sign_traces(capsys, fixture_file):
    _, out = _run(capsys, ["trace", fixture_file("z2-sign-trace")])
    doc = json.loads(out)
    traces = next(c for c in doc["checks"] if "traces" in c["stats"])["stats"]["traces"]
    assert traces["1@p"] == "-1/1" and traces["1@q"] == "0/1"
    assert traces["0@p"] == "1/1" and traces["0@q"] == "2/1"


def test_output_is_deterministic_and_untimed(capsys, fixture_file):
    path = fixture_file("chaos2-bz2")
    _, first = _run(capsys, ["--seed", "5", "functor", "lift", path])
    _, second = _run(capsys, ["--seed", "5", "functor", "lift", path])
    assert first == second
    assert "seconds" not in first
    _, timed = _run(capsys, ["--timing", "pc", "build", path])
    assert "seconds" in json.loads(timed)["checks"][0]


def test_text_format(capsys, fixture_file):
    code, out = _run(capsys, ["--format", "text", "pc", "build", fixture_file("swap-strict")])
    assert code == 0
    assert out.startswith("PASS")


def test_broken_compositor_fails_check(capsys, fixture_file):
    doc = json.loads(emit_fixture("chaos2-bz2"))
    for c in doc["pseudofunctor"]["compositors"]:
        if (c["first"], c["then"]) == ("s", "s"):
            c["components"]["a"] = "b->a"
    code, out = _run(capsys, ["check", fixture_file("broken", json.dumps(doc))])
    assert code == 1
    laws = {v["law"] for c in json.loads(out)["checks"] for v in c["violations"]}
    assert "compositor/endpoints" in laws


@pytest.mark.parametrize("text", ["{", '{"name": "x", "category": {"objects": ["a"], "morphisms": []}, "extra": 1}'])
def test_malformed_input_exits_2(capsys, fixture_file, text):
    assert main(["check", fixture_file("bad", text)]) == 2


def test_missing_file_and_unknown_fixture_exit_2(tmp_path):
    assert main(["check", str(tmp_path / "absent.json")]) == 2
    assert main(["emit", "fixture", "nope"]) == 2


def test_unknown_listed_check_exits_2(fixture_file):
    doc = json.loads(emit_fixture("swap-strict"))
    doc["checks"] = ["no/such/check"]
    assert main(["check", fixture_file("listed", json.dumps(doc))]) == 2


def test_enumeration_cap_exits_3(fixture_file):
    assert main(["--max-enumeration", "1", "pc", "build", fixture_file("chaos2-bz2")]) == 3


def test_seed_range(fixture_file):
    assert main(["--seed", str(1 << 64), "pc", "build", fixture_file("chaos2-bz2")]) == 2


def test_emit_then_check(capsys, tmp_path):
    code, text = _run(capsys, ["emit", "fixture", "z2-regular-equivariant"])
    assert code == 0
    path = tmp_path / "emitted.json"
    path.write_text(text)
    assert main(["check", str(path)]) == 0
    assert main(["equiv", "git", str(path)]) == 0
