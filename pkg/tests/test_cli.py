import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

from valkit.cli import main
from valkit.documents import canonical_json, model_document
from valkit.builtins import bell_model


def run_cli(*args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(args))
    return code, out.getvalue(), err.getvalue()


def test_list_builtins_names():
    code, out, _ = run_cli("list-builtins")
    assert code == 0
    names = out.split()
    for expected in ("bell", "hardy", "ghz", "pr-box", "liar(n)", "malawi", "screening"):
        assert expected in names


def test_list_builtins_describe():
    code, out, _ = run_cli("list-builtins", "--describe")
    assert code == 0
    assert "bell" in out and "empirical-model" in out


def test_analyze_bell_human_readable():
    code, out, _ = run_cli("analyze", "builtin:bell")
    assert code == 0
    assert "class: PC" in out
    assert "no-signalling: pass" in out
    assert "time:" in out


def test_analyze_screening_json_fields():
    code, out, _ = run_cli("analyze", "builtin:screening", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["kind"] == "knowledgebase"
    assert report["analysis"]["local"]["verdict"] == "pass"
    assert report["analysis"]["global"]["verdict"] == "disagree"
    assert report["analysis"]["global"]["witness-index"] == 1
    assert report["analysis"]["complete-disagreement"] is False
    assert "time" not in json.dumps(report)


def test_analyze_liar_json():
    code, out, _ = run_cli("analyze", "builtin:liar(3)", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["analysis"]["local"]["verdict"] == "pass"
    assert report["analysis"]["complete-disagreement"] is True


def test_analyze_json_deterministic_per_builtin():
    for name in ("bell", "hardy", "ghz", "pr-box", "liar(3)", "malawi", "screening"):
        first = run_cli("analyze", f"builtin:{name}", "--json")
        second = run_cli("analyze", f"builtin:{name}", "--json")
        assert first == second
        assert first[0] == 0


def test_json_determinism_across_hash_seeds(tmp_path):
    # Different PYTHONHASHSEED values must not leak set-iteration order.
    outputs = []
    for seed in ("1", "42"):
        proc = subprocess.run(
            [sys.executable, "-m", "valkit", "analyze", "builtin:malawi", "--json"],
            capture_output=True,
            text=True,
            env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"},
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1]


def test_verify_accepts_generated_reports(tmp_path):
    for name in ("bell", "hardy", "screening", "liar(4)", "malawi"):
        code, out, _ = run_cli("analyze", f"builtin:{name}", "--json")
        assert code == 0
        path = tmp_path / f"{name.replace('(', '_').replace(')', '')}.json"
        path.write_text(out, encoding="utf-8")
        code, out, err = run_cli("verify", str(path), f"builtin:{name}")
        assert code == 0, err
        assert "ok" in out


def test_verify_rejects_tampered_report(tmp_path):
    code, out, _ = run_cli("analyze", "builtin:screening", "--json")
    report = json.loads(out)
    report["analysis"]["global"]["witness-index"] = 2
    path = tmp_path / "tampered.json"
    path.write_text(canonical_json(report), encoding="utf-8")
    code, out, err = run_cli("verify", str(path), "builtin:screening")
    assert code == 1
    assert "FAIL" in err


def test_verify_never_crashes_on_mutated_reports(tmp_path):
    code, out, _ = run_cli("analyze", "builtin:bell", "--json")
    base = json.loads(out)
    mutations = []
    m = json.loads(out)
    m["analysis"]["probabilistic"]["certificate"][0]["context"] = "zz,yy"
    mutations.append(m)
    m = json.loads(out)
    m["analysis"]["probabilistic"]["certificate"][0]["coefficient"] = "nonsense"
    mutations.append(m)
    m = json.loads(out)
    m["analysis"]["gamma"] = {"size": "huh"}
    mutations.append(m)
    m = json.loads(out)
    m["analysis"] = None
    mutations.append(m)
    m = json.loads(out)
    m["report"] = "other/9"
    mutations.append(m)
    for index, mutant in enumerate(mutations):
        path = tmp_path / f"mutant{index}.json"
        path.write_text(json.dumps(mutant), encoding="utf-8")
        code, _, err = run_cli("verify", str(path), "builtin:bell")
        assert code == 1, (index, err)


def test_verify_rejects_wrong_input(tmp_path):
    code, out, _ = run_cli("analyze", "builtin:screening", "--json")
    path = tmp_path / "screening.json"
    path.write_text(out, encoding="utf-8")
    code, _, err = run_cli("verify", str(path), "builtin:malawi")
    assert code == 1
    assert "hash" in err


def test_analyze_file_input(tmp_path):
    doc = model_document(bell_model())
    path = tmp_path / "bell.json"
    path.write_text(canonical_json(doc), encoding="utf-8")
    code, out, _ = run_cli("analyze", str(path), "--json")
    assert code == 0
    report = json.loads(out)
    assert report["analysis"]["class"] == "PC"
    assert report["source"] == str(path)


def test_analyze_signalling_model_reports_fail(tmp_path):
    doc = model_document(bell_model())
    doc["sections"]["a1,b1"] = {"0,0": 1}
    path = tmp_path / "signalling.json"
    path.write_text(canonical_json(doc), encoding="utf-8")
    code, out, _ = run_cli("analyze", str(path), "--json")
    assert code == 0  # an analysis with a negative verdict is still a success
    report = json.loads(out)
    assert report["analysis"]["no-signalling"]["verdict"] == "fail"
    assert report["analysis"]["class"] is None


def test_parse_error_exit_code_and_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": "csp",\n  nope}', encoding="utf-8")
    code, _, err = run_cli("analyze", str(path))
    assert code == 2
    assert "line 2" in err


def test_missing_file_exit_code():
    code, _, err = run_cli("analyze", "no-such-file.json")
    assert code == 2


def test_unknown_builtin_exit_code():
    code, _, err = run_cli("analyze", "builtin:nessie")
    assert code == 2
    assert "unknown builtin" in err


def test_unknown_subcommand_exits_with_usage():
    with pytest.raises(SystemExit) as exc:
        run_cli("dance")
    assert exc.value.code == 2


def test_infer_screening_query():
    code, out, _ = run_cli("infer", "builtin:screening", "--query", "e,f")
    assert code == 0
    assert "CBE,2Y" in out and "M,Y" in out
    assert "tuples: 2" in out


def test_infer_malawi_empty_table():
    code, out, _ = run_cli("infer", "builtin:malawi", "--query", "MOZ,MWI")
    assert code == 0
    assert "tuples: 0" in out


def test_infer_methods_agree_on_dump():
    naive = run_cli("infer", "builtin:screening", "--query", "a,e", "--method", "naive", "--json")
    fusion = run_cli("infer", "builtin:screening", "--query", "a,e", "--method", "fusion", "--json")
    assert naive == fusion


def test_infer_respects_explicit_order():
    code, out, _ = run_cli("infer", "builtin:malawi", "--query", "MOZ,MWI", "--order", "TZA,ZMB,ZWE")
    assert code == 0
    assert "tuples: 0" in out
    code, _, err = run_cli("infer", "builtin:malawi", "--query", "MOZ,MWI", "--order", "TZA")
    assert code == 2


def test_infer_on_empirical_model_gives_potential():
    code, out, _ = run_cli("infer", "builtin:bell", "--query", "a1,b1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["type"] == "potential"


def test_cell_limit_flag_and_env(tmp_path, monkeypatch):
    code, _, err = run_cli("analyze", "builtin:malawi", "--limit", "2")
    assert code == 3
    monkeypatch.setenv("VK_CELL_LIMIT", "2")
    code, _, err = run_cli("analyze", "builtin:malawi")
    assert code == 3
    monkeypatch.setenv("VK_CELL_LIMIT", "not-a-number")
    code, _, err = run_cli("analyze", "builtin:malawi")
    assert code == 2
    monkeypatch.delenv("VK_CELL_LIMIT")
    code, _, _ = run_cli("analyze", "builtin:malawi")
    assert code == 0


def test_analyze_csp_file(tmp_path):
    from valkit.builtins import malawi_csp
    from valkit.documents import CSPDocumentPayload, csp_document

    csp = malawi_csp()
    payload = CSPDocumentPayload(csp, tuple(c.scheme_set for c in csp.constraints))
    path = tmp_path / "malawi.json"
    path.write_text(canonical_json(csp_document(payload)), encoding="utf-8")
    code, out, _ = run_cli("analyze", str(path), "--json")
    assert code == 0
    report = json.loads(out)
    assert report["kind"] == "csp"
    assert report["analysis"]["local"]["verdict"] == "pass"
    assert report["analysis"]["complete-disagreement"] is True
    report_path = tmp_path / "malawi-report.json"
    report_path.write_text(out, encoding="utf-8")
    code, out, err = run_cli("verify", str(report_path), str(path))
    assert code == 0, err


def test_verify_report_made_with_naive_method(tmp_path):
    code, out, _ = run_cli("analyze", "builtin:screening", "--json", "--method", "naive")
    assert code == 0
    assert json.loads(out)["method"] == "naive"
    path = tmp_path / "naive.json"
    path.write_text(out, encoding="utf-8")
    code, _, err = run_cli("verify", str(path), "builtin:screening")
    assert code == 0, err


def test_potential_knowledgebase_file_analysis(tmp_path):
    from valkit.documents import knowledgebase_document

    kb = bell_model().knowledgebase()
    path = tmp_path / "bell-kb.json"
    path.write_text(canonical_json(knowledgebase_document(kb)), encoding="utf-8")
    code, out, _ = run_cli("analyze", str(path), "--json")
    assert code == 0
    report = json.loads(out)
    assert report["analysis"]["local"]["verdict"] == "pass"  # no-signalling as local agreement
    assert report["analysis"]["global"]["verdict"] == "disagree"
    assert "certificate" in report["analysis"]["global"]
    report_path = tmp_path / "bell-kb-report.json"
    report_path.write_text(out, encoding="utf-8")
    code, _, err = run_cli("verify", str(report_path), str(path))
    assert code == 0, err


def test_agreeing_knowledgebase_report_and_verify(tmp_path):
    from valkit.builtins import liar_knowledgebase
    from valkit.documents import knowledgebase_document

    kb = liar_knowledgebase(4, consistent=True)
    path = tmp_path / "agree.json"
    path.write_text(canonical_json(knowledgebase_document(kb)), encoding="utf-8")
    code, out, _ = run_cli("analyze", str(path), "--json")
    assert code == 0
    report = json.loads(out)
    assert report["analysis"]["global"]["verdict"] == "agree"
    truth = report["analysis"]["global"]["truth"]
    assert truth["type"] == "relation" and truth["size"] == 2
    report_path = tmp_path / "agree-report.json"
    report_path.write_text(out, encoding="utf-8")
    code, _, err = run_cli("verify", str(report_path), str(path))
    assert code == 0, err


def test_agreeing_potential_knowledgebase_report_and_verify(tmp_path):
    from fractions import Fraction

    from valkit.algebra import Knowledgebase
    from valkit.core import NONNEG_RATIONAL
    from valkit.documents import knowledgebase_document
    from valkit.potentials import constant_potential

    model = bell_model()
    universe = model.scenario.universe
    sections = tuple(
        constant_potential(universe, frozenset(ctx), NONNEG_RATIONAL, Fraction(1, 4))
        for ctx in model.scenario.contexts
    )
    kb = Knowledgebase(universe, sections)
    path = tmp_path / "uniform.json"
    path.write_text(canonical_json(knowledgebase_document(kb)), encoding="utf-8")
    code, out, _ = run_cli("analyze", str(path), "--json")
    assert code == 0
    report = json.loads(out)
    assert report["analysis"]["global"]["verdict"] == "agree"
    assert report["analysis"]["global"]["truth"]["type"] == "potential"
    report_path = tmp_path / "uniform-report.json"
    report_path.write_text(out, encoding="utf-8")
    code, _, err = run_cli("verify", str(report_path), str(path))
    assert code == 0, err


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "valkit", "list-builtins"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "bell" in proc.stdout
