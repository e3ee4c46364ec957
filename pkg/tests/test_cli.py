import json
import os

import pytest

from hdabisim.cli import main
from hdabisim.fixtures import example
from hdabisim.hda import hda_to_json, load_hda
from hdabisim.ipomset import ipomset_from_json, isomorphic, parse_ipomset


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def model_files(tmp_path):
    paths = {}
    for name in ("X1", "X2", "filled_square", "hollow_square"):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(hda_to_json(example(name))))
        paths[name] = str(p)
    return paths


def test_decompose_prints_factors(capsys):
    code, out, _ = run(capsys, "decompose", "[.a. b]*[.a. c]")
    assert code == 0
    assert out.split("\n")[:2] == ["[.a. b]", "[.a. c]"]


def test_decompose_json(capsys):
    code, out, _ = run(capsys, "decompose", "--json", "[a. b] * [.a c] * [d.]")
    data = json.loads(out)
    assert code == 0 and data["factors"] == ["[a. b]", "[.a c]", "[d.]"]
    assert isomorphic(ipomset_from_json(data["json"][0]), parse_ipomset("[a. b]"))


def test_bisim_closed_cell_fails_with_witness(capsys, model_files, tmp_path):
    out_file = tmp_path / "w.json"
    code, out, _ = run(capsys, "bisim", "--kind", "closed-cell", model_files["X1"],
                       model_files["X2"], "--emit-witness", str(out_file))
    assert code == 1
    assert "not related" in out and "witness" in out
    assert json.loads(out_file.read_text())["condition"]


@pytest.mark.parametrize("kind,expected", [("cell", 0), ("t0", 0), ("strong-path", 0),
                                           ("strong-track", 0), ("path", 0),
                                           ("closed-cell", 1)])
def test_bisim_kinds_on_bundled_examples(capsys, kind, expected):
    code, out, _ = run(capsys, "bisim", "--kind", kind, "--depth", "3", "--json", "X1", "X2")
    assert code == expected
    data = json.loads(out)
    assert data["kind"] == kind and data["related"] == (expected == 0)


def test_check_formula(capsys, model_files):
    code, out, _ = run(capsys, "check", model_files["filled_square"], "--formula", "<[a b]>tt")
    assert code == 0 and "holds" in out
    code, _, _ = run(capsys, "check", model_files["hollow_square"], "--formula", "<[a b]>tt")
    assert code == 1


def test_check_along_a_path(capsys):
    path = json.dumps([{"up": {"cell": "x2", "A": [1]}}, {"down": {"B": [1]}}])
    code, out, _ = run(capsys, "check", "X2", "--formula", "<-[.a. c]>tt", "--path", path,
                       "--json")
    assert code == 0
    assert json.loads(out)["modal_depth"] == 1


def test_check_formula_syntax_error(capsys):
    code, out, err = run(capsys, "check", "X1", "--formula", "<[a>tt", "--json")
    assert code == 3
    assert json.loads(out)["error"] == "LiteralSyntaxError"
    assert err.rstrip().endswith("at position 3")


def test_glue_and_iso(capsys):
    code, out, _ = run(capsys, "glue", "[.a. b]", "[.a. c]")
    assert code == 0 and isomorphic(parse_ipomset(out.strip()), parse_ipomset("[.a. b]*[.a. c]"))
    assert run(capsys, "iso", "[a b]", "[a b]")[0] == 0
    assert run(capsys, "iso", "[a b]", "[b a]")[0] == 1


def test_glue_mismatch_is_validation_error(capsys):
    code, _, err = run(capsys, "glue", "[a.]", "[b]")
    assert code == 3 and "NotComposable" in err


def test_interval_reports_witness(capsys, tmp_path):
    doc = {"events": [{"id": e, "label": e} for e in "abcd"],
           "precedence": [["a", "b"], ["c", "d"]],
           "eventOrder": [["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"]]}
    f = tmp_path / "two_plus_two.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "interval", "--json", str(f))
    assert code == 1
    assert len(json.loads(out)["witness"]) == 4
    assert run(capsys, "interval", "[a b]*[c]")[0] == 0


def test_track_object_output(capsys):
    code, out, _ = run(capsys, "track-object", "[.a. b] * [.a c.] * [d. .c]")
    assert code == 0
    h = load_hda(json.loads(out))
    assert sum(1 for x in h.cells if h.dim(x) == 2) == 3
    code, out, _ = run(capsys, "track-object", "--summary", "[a b]")
    assert out.strip() == "9 cells; by dimension 0: 4, 1: 4, 2: 1"


def test_label_of_path(capsys):
    path = json.dumps([{"up": {"cell": "x", "A": [0, 1]}}, {"down": {"B": [0, 1]}}])
    code, out, _ = run(capsys, "label", "filled_square", path)
    assert code == 0 and isomorphic(parse_ipomset(out.strip()), parse_ipomset("[a b]"))


def test_label_bad_step(capsys):
    path = json.dumps([{"down": {"B": [0]}}])
    code, _, err = run(capsys, "label", "filled_square", path)
    assert code == 3 and "BadStep" in err


def test_distinguish(capsys):
    code, out, _ = run(capsys, "distinguish", "X1_node", "X2_node", "--depth", "2")
    assert code == 0 and out.strip() == "<[c]><[b d]>tt"
    code, out, _ = run(capsys, "distinguish", "X1", "X2", "--depth", "2", "--backward")
    assert code == 1 and "no distinguishing formula" in out


def test_validate_models_and_ipomsets(capsys, model_files):
    code, out, _ = run(capsys, "validate", "--json", model_files["X1"], "[.a. b]")
    data = json.loads(out)
    assert code == 0 and [r["type"] for r in data["inputs"]] == ["hda", "ipomset"]


def test_validate_reports_broken_hda(capsys, tmp_path):
    doc = hda_to_json(example("filled_square"))
    doc["initial"] = "nowhere"
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(doc))
    code, _, err = run(capsys, "validate", str(f))
    assert code == 3 and "NoInitial" in err


def test_unknown_ipomset_field(capsys):
    code, _, err = run(capsys, "validate", '{"events": [], "prec": []}')
    assert code == 3 and "prec" in err


def test_validate_rejects_bad_literal(capsys):
    code, _, err = run(capsys, "validate", "[a b] * [c")
    assert code == 3


def test_usage_errors(capsys):
    assert run(capsys, "bisim", "--kind", "cell", "no_such_file", "X2")[0] == 2
    with pytest.raises(SystemExit) as err:
        main(["bisim", "--kind", "bogus", "X1", "X2"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2


def test_initial_mismatch_is_validation_error(capsys):
    code, _, err = run(capsys, "bisim", "--kind", "cell", "X1", "filled_square")
    assert code == 3 and "InitialMismatch" in err


def test_gen_corpus_is_deterministic_and_valid(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "gen-corpus", "--seed", "1", "--count", "3", "--out", str(a))[0] == 0
    assert run(capsys, "gen-corpus", "--seed", "1", "--count", "3", "--out", str(b))[0] == 0
    names = sorted(os.listdir(a))
    assert names == sorted(os.listdir(b))
    assert "manifest.json" in names and len(names) == 7
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    manifest = json.loads((a / "manifest.json").read_text())
    assert manifest["seed"] == 1 and manifest["bounds"]["max_dim"] == 2
    hdas = [str(a / n) for n in names if n.startswith("hda_")]
    assert run(capsys, "validate", *hdas)[0] == 0


def test_gen_corpus_bounds(capsys, tmp_path):
    out = str(tmp_path / "c")
    assert run(capsys, "gen-corpus", "--seed", "2", "--out", out, "--max-dim", "4")[0] == 2
    assert run(capsys, "gen-corpus", "--seed", "2", "--out", out, "--alphabet", "")[0] == 2
    assert run(capsys, "gen-corpus", "--seed", "2", "--count", "2", "--out", out,
               "--max-dim", "3", "--side", "1")[0] == 0


def test_json_output_is_stable(capsys):
    first = run(capsys, "bisim", "--kind", "cell", "--json", "X1_node", "X2_node")
    second = run(capsys, "bisim", "--kind", "cell", "--json", "X1_node", "X2_node")
    assert first == second and first[0] == 1
