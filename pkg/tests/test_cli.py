import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from opgsolve.cli import main
from opgsolve.diagram import Seq, atoms, operational_semantics
from opgsolve.dsl import format_source, parse_source
from opgsolve.generate import GenSpec, GenerationError, generate_random
from opgsolve.report import REPORT_SCHEMA, emit_json, run_solve

DATA = Path(__file__).parent / "data"
RUNNING = str(DATA / "running_example.opg")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("mode", ["compositional", "monolithic", "oracle"])
def test_solve_modes(capsys, mode):
    code, out, _ = run(capsys, "solve", RUNNING, "--diagram", "running", "--mode", mode)
    assert code == 0
    assert out.strip() == "in.r1: pending  {{(out.r1, 1)}}"


def test_closed_diagram_is_winning(capsys):
    code, out, _ = run(capsys, "solve", RUNNING, "--diagram", "closed")
    assert code == 0 and out.strip() == "in.r1: winning  {{TOP}}"


def test_json_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(capsys, "solve", RUNNING, "--diagram", "running", "--json", str(out))[0] == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["entrances"] == [
        {"id": "in.r1", "class": "pending", "front": [[{"exit": "out.r1", "priority": 1}]]}
    ]
    assert doc["stats"]["queries"] == 36 and doc["stats"]["mode"] == "compositional"


def test_json_top_element():
    report = run_solve(parse_source((DATA / "running_example.opg").read_text()), "closed")
    doc = json.loads(emit_json(report))
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["entrances"][0]["front"] == [[{"top": True}]]


def test_json_stable_across_jobs():
    src = generate_random(GenSpec(depth=2, seed=4, arity=((2, 0), (1, 0)), max_priority=2))
    reports = [json.loads(emit_json(run_solve(src, "main", jobs=j))) for j in (1, 3)]
    for r in reports:
        r.pop("stats")
    assert reports[0] == reports[1]


def test_dot_diamonds(tmp_path, capsys):
    out = tmp_path / "c.dot"
    assert run(capsys, "solve", RUNNING, "--diagram", "running", "--dot", str(out))[0] == 0
    text = out.read_text()
    assert text.count("shape=diamond") == 2
    assert text.startswith("digraph")
    assert '[label="3"]' in text


def test_dot_shortcut(tmp_path, capsys):
    out = tmp_path / "s.dot"
    assert run(capsys, "solve", RUNNING, "--diagram", "running", "--dot-shortcut", str(out))[0] == 0
    assert out.read_text().count("shape=diamond") == 1


def test_stats_flag(capsys):
    code, _, err = run(capsys, "solve", RUNNING, "--diagram", "running", "--stats")
    assert code == 0 and "queries: 36" in err


def test_oracle_bound(capsys):
    code, _, err = run(capsys, "solve", RUNNING, "--diagram", "running", "--mode", "oracle", "--oracle-bound", "3")
    assert code == 2 and "bound" in err


def test_missing_diagram_name(capsys):
    code, _, err = run(capsys, "solve", RUNNING)
    assert code == 2


def test_validate(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", RUNNING)
    assert code == 0 and "C: ok" in out
    bad = tmp_path / "bad.opg"
    bad.write_text("opg X : (1, 0) -> (0, 0) { node v A; in.r1 -> v @ 0; v -> in.r1 @ 1; }\n")
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1 and "entrance reachable" in out


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.opg"
    bad.write_text("opg X : (1, 0) -> (1, 0) {\n  out.r1 -> in.r1 @ 0;\n}\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "exit must be a sink" in err and "line 2" in err


class TestGenerate:
    def test_deterministic(self, tmp_path, capsys):
        spec = tmp_path / "g.json"
        spec.write_text(json.dumps({"atom_nodes": 4, "depth": 3, "seed": 5, "arity": [[1, 1], [1, 0]]}))
        first = run(capsys, "generate", str(spec))[1]
        second = run(capsys, "generate", str(spec))[1]
        assert first == second and "diagram main" in first
        assert run(capsys, "generate", str(spec), "--seed", "6")[1] != first

    def test_atoms_valid(self):
        for seed in range(20):
            src = generate_random(GenSpec(depth=3, seed=seed, arity=((1, 1), (2, 1))))
            src2 = parse_source(format_source(src))
            assert src2.diagrams.keys() == {"main"}

    def test_duplicates_hit_cache(self):
        spec = GenSpec(depth=2, seed=1, duplicate_rate=1.0, ops="sum", arity=((2, 0), (2, 0)),
                       composite_rate=1.0)
        src = generate_random(spec)
        term = src.diagrams["main"]
        assert len({a.name for a in atoms(term)}) < len(atoms(term))
        report = run_solve(src, "main")
        assert report.stats["cache_hits"] > 0
        assert report.stats["atoms_solved"] < len(atoms(term))

    def test_exit_free_sums(self):
        spec = GenSpec(depth=2, seed=3, ops="sum", arity=((3, 0), (0, 0)), composite_rate=1.0)
        src = generate_random(spec)
        game = operational_semantics(src.diagrams["main"])
        assert not game.exit_refs
        for a in src.opgs.values():
            assert a.type.exits == 0
        report = run_solve(src, "main")
        assert {e.classification.value for e in report.entrances} <= {"winning", "losing"}

    def test_seq_arities_forced(self):
        src = generate_random(GenSpec(depth=3, seed=9, ops="seq", composite_rate=1.0))
        assert isinstance(src.diagrams["main"], Seq)

    @pytest.mark.parametrize("bad", [{"max_priority": 3}, {"atom_nodes": 0}, {"duplicate_rate": 2.0}])
    def test_rejects(self, bad):
        with pytest.raises(GenerationError):
            generate_random(GenSpec(**bad))


def _exits_source(n, m):
    edges = "".join(f"  v -> out.r{k} @ {k % (m + 1)};\n" for k in range(1, n + 1))
    return (f"opg X : (1, 0) -> ({n}, 0) {{\n  maxprio {m};\n  node v A;\n  in.r1 -> v @ 0;\n{edges}}}\n"
            "diagram x = X;\n")


def test_bench_query_counts(tmp_path, capsys):
    instances = []
    for n in (1, 2, 3):
        path = tmp_path / f"x{n}.opg"
        path.write_text(_exits_source(n, 4))
        instances.append({"name": f"n{n}", "source": str(path), "diagram": "x"})
    spec = tmp_path / "bench.json"
    spec.write_text(json.dumps({"modes": ["compositional", "monolithic"], "instances": instances}))
    out = tmp_path / "b.csv"
    code, _, _ = run(capsys, "bench", str(spec), "--csv", str(out), "--timeout-ms", "60000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert list(rows[0]) == ["instance", "mode", "ms", "queries", "cache_hits", "match"]
    queries = {(r["instance"], r["mode"]): int(r["queries"]) for r in rows}
    for n, expected in ((1, 6), (2, 36), (3, 216)):
        assert queries[(f"n{n}", "monolithic")] == expected
        assert queries[(f"n{n}", "compositional")] == expected
    assert all(r["match"] == "yes" for r in rows)


def test_bench_generated_modes_agree(tmp_path, capsys):
    spec = tmp_path / "bench.json"
    spec.write_text(json.dumps({"instances": [
        {"name": f"g{k}", "generate": {"depth": 2, "seed": k, "duplicate_rate": 0.5, "max_priority": 2,
                                       "arity": [[1, 0], [1, 0]]}}
        for k in range(4)
    ]}))
    code, out, _ = run(capsys, "bench", str(spec), "--seed", "10")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 12
    assert {r["match"] for r in rows} == {"yes"}


def test_bench_timeout_is_a_row(tmp_path, capsys):
    path = tmp_path / "x.opg"
    path.write_text(_exits_source(3, 4))
    spec = tmp_path / "bench.json"
    spec.write_text(json.dumps({"modes": ["monolithic"], "instances": [
        {"name": "slow", "source": str(path), "diagram": "x"}]}))
    code, out, _ = run(capsys, "bench", str(spec), "--timeout-ms", "1")
    assert code == 0
    assert "timeout" in out


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "opgsolve.cli", "solve", RUNNING, "--diagram", "running"],
                          capture_output=True, text=True, check=True)
    assert "pending" in proc.stdout


def test_json_to_stdout_is_parseable(capsys):
    code, out, _ = run(capsys, "solve", RUNNING, "--diagram", "running", "--json", "-")
    assert code == 0
    assert json.loads(out)["entrances"][0]["class"] == "pending"
