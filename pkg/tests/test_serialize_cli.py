import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from epsint.cli import Limits, main
from epsint.errors import LimitExceeded
from epsint.functions import value
from epsint.generate import PROFILES, generate
from epsint.geometry import Polyhedron, equals
from epsint.serialize import (
    SchemaError,
    dumps,
    function_from_json,
    function_to_json,
    instance_from_json,
    instance_to_json,
    load_document,
    polyhedron_from_json,
    polyhedron_to_json,
)
from conftest import instance_a, instances, polyhedral_functions

F = Fraction
ROOT = Path(__file__).resolve().parents[1]
INSTANCE_A = ROOT / "instances" / "instance_a.json"
FALSIFIED = ROOT / "instances" / "falsified_certificate.json"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_polyhedron_roundtrip_both_forms():
    P = Polyhedron.from_v([(0, 0), (1, F(1, 2))], [(1, 0)])
    assert equals(polyhedron_from_json(polyhedron_to_json(P), 2), P)
    assert equals(polyhedron_from_json(polyhedron_to_json(P, v_rep=True), 2), P)


@given(st.integers(1, 3).flatmap(lambda d: polyhedral_functions(d)))
def test_function_roundtrip(f):
    g = function_from_json(json.loads(dumps(function_to_json(f))), f.dim)
    assert equals(g.epigraph(), f.epigraph())


@given(instances(max_dim=2))
def test_instance_roundtrip(arg):
    inst, p = arg
    back = instance_from_json(json.loads(dumps(instance_to_json(inst))))
    assert back.atoms == inst.atoms and back.weights == inst.weights
    assert value(back.I_f, p) == value(inst.I_f, p)


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"atoms": []}, "$.dimension"),
        ({"dimension": 1, "atoms": [{"id": "a", "weight": "1.5", "function": {"pieces": [{"a": ["1"], "b": "0"}]}}]}, "$.atoms[0].weight"),
        ({"dimension": 1, "atoms": [{"id": "a", "weight": "1", "function": {"pieces": [{"a": ["1", "2"], "b": "0"}]}}]}, "$.atoms[0].function.pieces[0].a"),
        ({"dimension": 1, "atoms": [{"id": "a", "weight": "1/0", "function": {"pieces": [{"a": ["1"], "b": "0"}]}}]}, "$.atoms[0].weight"),
    ],
)
def test_schema_errors_carry_paths(doc, path):
    with pytest.raises(SchemaError) as exc:
        instance_from_json(doc)
    assert exc.value.path.startswith(path)


def test_bad_query_is_schema_error():
    doc = json.loads(INSTANCE_A.read_text())
    doc["queries"] = [{"kind": "sum_rule", "x": ["0"], "eps": ["-1"]}]
    with pytest.raises(SchemaError):
        load_document(json.dumps(doc))
    doc["queries"] = [{"kind": "teleport"}]
    with pytest.raises(SchemaError):
        load_document(json.dumps(doc))


def test_check_instance_a_passes(capsys):
    code, out = run(capsys, "check", str(INSTANCE_A))
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "pass" and len(doc["queries"]) == 11
    assert all(r["counterexample"] is None for q in doc["queries"] for r in q["reports"])


def test_check_text_format(capsys):
    code, out = run(capsys, "check", str(INSTANCE_A), "--format", "text")
    assert code == 0 and out.startswith("[PASS]")
    assert "note:" in out


def test_check_is_deterministic_and_jobs_invariant(capsys):
    _, a = run(capsys, "check", str(INSTANCE_A))
    _, b = run(capsys, "check", str(INSTANCE_A))
    _, c = run(capsys, "check", str(INSTANCE_A), "--jobs", "4")
    assert a == b == c


def test_timing_flag_adds_seconds(capsys):
    _, out = run(capsys, "check", str(INSTANCE_A), "--timing")
    assert all("seconds" in q for q in json.loads(out)["queries"])


def test_corrupted_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 1,\n  "atoms": [,]}')
    code, out = run(capsys, "check", str(bad))
    assert code == 2
    assert "line 2 column" in json.loads(out)["error"]


def test_missing_file_exit_2(capsys, tmp_path):
    code, _ = run(capsys, "check", str(tmp_path / "none.json"))
    assert code == 2


def test_limits_and_override(capsys, tmp_path):
    doc = json.loads(INSTANCE_A.read_text())
    atom = doc["atoms"][0]
    doc["atoms"] = [dict(atom, id=str(i)) for i in range(9)]
    doc["queries"] = [{"kind": "epigraph"}]
    p = tmp_path / "big.json"
    p.write_text(json.dumps(doc))
    code, out = run(capsys, "check", str(p))
    assert code == 2 and "LimitExceeded" in out
    code, _ = run(capsys, "check", str(p), "--override-limits")
    assert code == 0
    with pytest.raises(LimitExceeded):
        Limits(max_atoms=1).check(instance_a())


def test_schedule_flags(capsys, tmp_path):
    doc = json.loads(INSTANCE_A.read_text())
    doc["queries"] = [{"kind": "br_run", "x": ["0"], "xstar": ["-1/2"]}]
    p = tmp_path / "br.json"
    p.write_text(json.dumps(doc))
    code, out = run(capsys, "check", str(p), "--eps-schedule", "1/2,1/4,1/8", "--lambda-schedule", "1,1/2,1/2")
    assert code == 0
    steps = json.loads(out)["queries"][0]["reports"][0]["witnesses"]
    assert steps
    code, _ = run(capsys, "check", str(p), "--eps-schedule", "1/2,1/4", "--lambda-schedule", "1")
    assert code == 2


def test_verify_falsified_fixture(capsys):
    code, out = run(capsys, "verify", str(FALSIFIED))
    assert code == 1
    doc = json.loads(out)
    assert [c["status"] for c in doc["certificates"]] == ["pass", "fail"]
    assert "components do not sum to x*" in doc["certificates"][1]["defects"]


def test_generate_is_byte_deterministic(capsys):
    for profile in PROFILES:
        _, a = run(capsys, "generate", "--seed", "3", "--profile", profile)
        _, b = run(capsys, "generate", "--seed", "3", "--profile", profile)
        assert a == b


def test_generated_affine_instance_has_singleton_sum_rule():
    inst, queries = load_document(dumps(generate(1, "affine-only")))
    from epsint.calculus import lhs_eps_subdifferential
    q = queries[0]
    assert lhs_eps_subdifferential(inst, q["x"], 3).is_singleton()


def test_generated_indicator_instance_has_normal_components():
    inst, queries = load_document(dumps(generate(7, "indicator-heavy")))
    from epsint.integral import eps_normal_dom
    xs = [q["x"] for q in queries if q["kind"] == "sum_rule"]
    assert any(not eps_normal_dom(inst, x, 1).is_singleton() for x in xs)


def test_generated_files_check_clean(capsys, tmp_path):
    for seed, profile in [(0, "box-domains"), (7, "indicator-heavy"), (1, "affine-only"), (2, "kinked"), (3, "restricted-subspace")]:
        p = tmp_path / f"{profile}-{seed}.json"
        p.write_text(dumps(generate(seed, profile)))
        code, out = run(capsys, "check", str(p))
        assert code == 0, out


def test_generated_sizes_within_bounds():
    for profile in PROFILES:
        for seed in range(20):
            doc = generate(seed, profile)
            assert doc["dimension"] <= 4 and len(doc["atoms"]) <= 6
            for atom in doc["atoms"]:
                assert len(atom["function"]["pieces"]) <= 5


def test_examples_subcommands(capsys):
    code, out = run(capsys, "examples", "l2", "--dim", "4", "--point", "1,2,3,4")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out = run(capsys, "examples", "l1", "--nmax", "50")
    assert code == 0
    code, out = run(capsys, "examples", "l1", "--nmax", "50", "--step", "1e-9")
    assert code == 1
    code, _ = run(capsys, "examples", "l2", "--dim", "3", "--point", "1,2")
    assert code == 2
    code, _ = run(capsys, "examples", "l2", "--dim", "5000")
    assert code == 2
    code, _ = run(capsys, "examples", "l1", "--nmax", "0")
    assert code == 2


def test_failed_report_replays(capsys, tmp_path):
    # a failing verify entry names the same defects that certificate_defects reproduces
    from epsint.calculus import DecompositionCertificate, certificate_defects
    doc = json.loads(FALSIFIED.read_text())
    inst = instance_from_json(doc)
    item = doc["certificates"][1]
    cert = DecompositionCertificate.from_json(item["certificate"])
    x = [F(c) for c in item["x"]]
    xs = [F(c) for c in item["xstar"]]
    _, out = run(capsys, "verify", str(FALSIFIED))
    assert json.loads(out)["certificates"][1]["defects"] == certificate_defects(inst, x, xs, F(item["eps"]), cert)
