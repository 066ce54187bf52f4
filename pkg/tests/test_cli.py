import json

import pytest

from homprofile.cli import main
from homprofile.structures import dumps, from_json, structure
from homprofile.transforms import chain, make_clique, make_figure3_pair


@pytest.fixture
def files(tmp_path):
    M, N = make_figure3_pair()
    paths = {}
    for name, S in {
        "M": M,
        "N": N,
        "T3": chain(3),
        "K2": make_clique(2),
        "back": structure(("p",), ("R",), 2, edges=[(1, 0)]),
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(dumps(S))
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_equiv_on_figure3_pair(files, capsys):
    code, out, _ = run(capsys, "equiv", "--logic", "ml", "--left", files["M"], "--right", files["N"])
    assert code == 1 and out.strip() == "not equivalent"
    code, out, _ = run(capsys, "equiv", "--logic", "pml", "--k", "2", "--left", files["M"], "--right", files["N"])
    assert code == 0 and out.strip() == "equivalent"


def test_equiv_needs_k_for_bounded_languages(files, capsys):
    code, _, err = run(capsys, "equiv", "--logic", "gml", "--left", files["M"], "--right", files["N"])
    assert code == 2 and "depth bound" in err


def test_hom_count(files, capsys):
    code, out, _ = run(capsys, "hom-count", "--semiring", "nat", "--source", files["T3"], "--target", files["K2"])
    assert code == 0 and out.strip() == "4"
    code, out, _ = run(capsys, "hom-count", "--semiring", "modp:2", "--source", files["T3"], "--target", files["K2"])
    assert out.strip() == "0"
    code, out, _ = run(capsys, "hom-count", "--semiring", "bool", "--source", files["T3"], "--target", files["K2"])
    assert out.strip() == "true"


def test_unravel_to_depth_zero(files, capsys):
    code, out, _ = run(capsys, "transform", "unravel", "--k", "0", "--in", files["M"])
    assert code == 0
    assert from_json(out).n == 1


@pytest.mark.parametrize("op", ["gsub", "backexp", "globexp", "down", "pgaug"])
def test_transforms_emit_json(files, capsys, op):
    code, out, _ = run(capsys, "transform", op, "--in", files["back"])
    assert code == 0
    assert from_json(out).n >= 1


def test_flip_round_trip_through_files(files, capsys, tmp_path):
    _, out, _ = run(capsys, "transform", "down", "--in", files["back"])
    down = tmp_path / "down.json"
    down.write_text(out)
    _, out, _ = run(capsys, "transform", "flip", "--in", str(down))
    assert from_json(out) == from_json(open(files["back"]).read())


def test_transform_errors(files, capsys):
    assert run(capsys, "transform", "unravel", "--in", files["M"])[0] == 2
    assert run(capsys, "transform", "rgconnect", "--in", files["back"])[0] == 2
    code, out, _ = run(capsys, "transform", "gsub", "--dot", "--in", files["M"])
    assert code == 0 and out.startswith("digraph")


def test_classify(files, capsys):
    code, out, _ = run(capsys, "classify", "--in", files["back"])
    info = json.loads(out)
    assert code == 0 and info["kinds"] == ["acyclic", "connected"] and info["pathDepth"] == 1


def test_check_exit_codes(files, capsys):
    assert run(capsys, "check", "--in", files["M"], "--formula", "<R>>=2 true") == (0, "true\n", "")
    assert run(capsys, "check", "--in", files["N"], "--formula", "<R>>=2 true")[0:2] == (1, "false\n")
    code, _, err = run(capsys, "check", "--in", files["N"], "--formula", "<S> p")
    assert code == 2 and "unknown action" in err
    assert run(capsys, "check", "--in", files["M"], "--formula", "p", "--state", "2")[0] == 0
    assert run(capsys, "check", "--in", files["M"], "--formula", "p", "--state", "9")[0] == 2


def test_profile_compare(files, capsys):
    code, out, _ = run(capsys, "profile-compare", "--left", files["M"], "--right", files["N"], "--max-states", "2", "--max-depth", "1")
    verdict = json.loads(out)
    assert code == 1 and verdict["status"] == "Distinguished"
    assert (verdict["countLeft"], verdict["countRight"]) == (2, 1)
    code, out, _ = run(capsys, "profile-compare", "--left", files["M"], "--right", files["N"], "--semiring", "bool", "--max-states", "4", "--depth", "3")
    assert code == 0 and json.loads(out)["status"] == "EqualUpToBound"


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--class", "tree", "--max-states", "2", "--max-depth", "1")
    assert code == 0 and len(out.splitlines()) == 6
    code, out, _ = run(capsys, "enumerate", "--class", "forest", "--max-states", "4", "--random", "3", "--seed", "7")
    assert len(out.splitlines()) == 3
    assert run(capsys, "enumerate", "--class", "connected", "--max-states", "6")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "T4.5", "--max-states", "2", "--k", "1", "2")
    assert code == 0 and out.startswith("T4.5: PASS")
    code, out, _ = run(capsys, "verify", "--theorem", "T3.2", "--corpus", "figure3", "--k", "2", "--json")
    report = json.loads(out)
    assert code == 0 and report["agreements"] == report["pairsTested"] == 1


def test_negative_demo(capsys):
    code, out, _ = run(capsys, "negative-demo", "--semiring", "modp:3")
    assert code == 0 and "zero-in-segment" in out
    code, out, _ = run(capsys, "negative-demo", "--semiring", "bool", "--json")
    assert code == 0 and json.loads(out)["case"] == "one-in-segment-P1"


def test_usage_errors(files, capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "classify", "--in", "/nonexistent.json")[0] == 2
    assert run(capsys, "hom-count", "--semiring", "reals", "--source", files["T3"], "--target", files["K2"])[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_malformed_input_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "classify", "--in", str(bad))
    assert code == 2 and "not valid JSON" in err
