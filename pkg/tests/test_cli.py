import json
import subprocess
import sys

import pytest

from raagfix.cli import DEMOS, main, render_json, render_text, run_demo

PATH3 = {"generators": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}
CLIQUES = {"generators": list("abcde"), "edges": [["a", "b"], ["c", "d"], ["d", "e"], ["c", "e"]]}
SQUARE = {"generators": list("abcd"), "edges": [["a", "c"], ["c", "b"], ["b", "d"], ["d", "a"]]}
WITNESS = {"images": {"a": "a b", "b": "b", "c": "b^-1 c"}}


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, doc in (("path3", PATH3), ("cliques", CLIQUES), ("square", SQUARE), ("witness", WITNESS)):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv) + ["--format", "json"])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


def test_classify_commands(files, capsys):
    code, rep, _ = run(capsys, "classify", files["path3"], "--scope", "endo")
    assert code == 0 and rep["answer"] == "NotAllFinitelyGenerated"
    assert rep["witness"] == {"a": "a b", "b": "b", "c": "b^-1 c"}
    code, rep, _ = run(capsys, "classify", files["cliques"], "--scope", "auto")
    assert code == 0 and rep["answer"] == "AllFinitelyGenerated"
    code, rep, _ = run(capsys, "classify", files["square"], "--scope", "auto")
    assert code == 0 and rep["answer"] == "OutsideTheoremScope"
    assert rep["classification"]["forbidden_witness"]["kind"] == "cycle4"


def test_nf_apply_abelian(files, capsys):
    _, rep, _ = run(capsys, "nf", files["path3"], "c b a")
    assert rep["normal_form"] == "b c a"
    _, rep, _ = run(capsys, "apply", files["path3"], files["witness"], "a c")
    assert rep["image"] == "a c"
    _, rep, _ = run(capsys, "abelian-fix", files["path3"], files["witness"])
    assert rep["fixed_lattice"]["basis"] == [[1, 0, 1], [0, 1, 0]]
    assert rep["periodic_lattice"]["basis"] == [[1, 0, 1], [0, 1, 0]]


def test_scan_commands(files, capsys):
    _, rep, _ = run(capsys, "fix", files["path3"], files["witness"], "-r", "2")
    assert "a c" in rep["fixed"] and "a" not in rep["fixed"]
    _, rep, _ = run(capsys, "per", files["path3"], files["witness"], "-r", "2", "--kmax", "3")
    assert rep["truncated"] and all(e["period"] == 1 for e in rep["periodic"])
    _, rep, _ = run(capsys, "chain", files["path3"], files["witness"], "--family", "a,c", "-N", "3")
    assert rep["strictly_ascending"] and [lv["states"] for lv in rep["levels"]] == [2, 3, 4]
    _, rep, _ = run(capsys, "auto-check", files["path3"], files["witness"], "-d", "2")
    assert rep["verdict"] == "Verified"


def test_exit_codes(files, capsys, tmp_path):
    # operational failures exit 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["classify", str(bad)]) == 2
    assert main(["classify", str(tmp_path / "missing.json")]) == 2
    assert main(["nf", files["path3"], "a^2"]) == 2
    assert main(["fix", files["path3"], files["witness"], "-r", "-1"]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"images": {"b": "a"}}))
    assert main(["apply", files["path3"], str(broken), "a"]) == 2
    assert main(["chain", files["path3"], files["witness"], "--family", "a,b", "--projection", "a,c"]) == 2
    assert "error" in capsys.readouterr().err
    # negative verdicts exit 0
    assert main(["classify", files["path3"]]) == 0
    capsys.readouterr()


def test_output_file_and_text_format(files, capsys, tmp_path):
    out = tmp_path / "report.txt"
    assert main(["classify", files["path3"], "-o", str(out)]) == 0
    text = out.read_text()
    assert "answer: NotAllFinitelyGenerated" in text
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize("name", DEMOS)
def test_demo_round_trip_and_stability(name):
    rep = run_demo(name)
    text = render_json(rep)
    assert render_json(json.loads(text)) == text
    assert render_json(run_demo(name)) == text
    assert render_text(rep) == render_text(json.loads(text))


def test_demo_facts():
    endo = run_demo("thm-endo")
    assert endo["verdict"]["answer"] == "NotAllFinitelyGenerated"
    assert endo["chain"]["strictly_ascending"] and len(endo["chain"]["levels"]) == 6
    assert endo["projection_invariant"]["passed"]
    assert all(row["fixed"] for row in endo["fixed_family"])
    # on the bare path nothing is sent to 1, so the witness is invertible
    assert endo["automorphism_certificate"]["verdict"] == "Verified"

    auto = run_demo("thm-auto")
    assert auto["automorphism_certificate"]["verdict"] == "Verified"
    assert auto["chain"]["strictly_ascending"]

    yes = run_demo("ex-fgyes")
    assert yes["verdict"]["answer"] == "OutsideTheoremScope"
    assert yes["swap"]["classification"]["kind"] == "TypeII"
    assert yes["swap"]["fix"]["generators"] == [["a", "c"], ["b", "d"]]
    assert yes["swap"]["fix"]["verified"] and yes["type_i_sample"]["fix"]["verified"]
    assert yes["swap"]["per_vs_per_of_square"]["equal"]

    no = run_demo("ex-fgno")
    assert no["automorphism_certificate"]["verdict"] == "Verified"
    assert no["automorphism_certificate"]["needed_depth"] <= 3
    assert [row["fixed"] for row in no["fixed_family"]][:4] == [True] * 4
    assert no["chain"]["strictly_ascending"] and len(no["chain"]["levels"]) == 4
    assert no["projection_invariant"]["passed"] and no["fixed_in_ball"]["count"] > 0


def test_demo_bytes_across_processes(tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"r{k}.json"
        subprocess.run([sys.executable, "-m", "raagfix", "demo", "ex-fgyes", "--format", "json", "-o", str(target)],
                       check=True)
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
