import json

from hnnfree.cli import main

FILE_TEXT = """\
# three-letter base with two stable letters, conjugators of length two
base y1 y2 y3
stable x1 x2
rel x1 : y1 ^ y2 y3 = y1 ^ y3 y2
rel x1 : y2 ^ y3^-1 y1 = y2 ^ y1 y3
rel x2 : y3 ^ y1 y1 = y3 ^ y2^-1 y1
"""


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


# --- engine commands ---------------------------------------------------------------

def test_nf_example(capsys):
    code, out, _ = run(capsys, "nf", "--preset", "gn", "3", "x2 y2^-1 y1")
    assert code == 0
    assert out.strip() == "y2^-1 y1 y2 x2 y2^-1"


def test_nf_trace(capsys):
    code, out, _ = run(capsys, "nf", "--preset", "gn", "3", "--trace", "x2 y2^-1 y1")
    assert code == 0
    assert "initial: x2 y2^-1 y1" in out
    assert "final: y2^-1 y1 y2 x2 y2^-1" in out
    assert "nu=" in out and "rule=" in out


def test_nf_json_is_stable(capsys):
    runs = [run(capsys, "nf", "--preset", "gn", "3", "--json", "x2 y2^-1 y1")
            for _ in range(2)]
    assert runs[0] == runs[1]
    doc = json.loads(runs[0][1])
    assert doc["schema"] == 1
    assert doc["command"] == "nf"
    assert doc["normal_form"] == "y2^-1 y1 y2 x2 y2^-1"
    assert doc["steps"] >= 1


def test_eq_example(capsys):
    code, out, _ = run(capsys, "eq", "--preset", "gn", "3", "x1 y2", "y2 x1")
    assert code == 0
    assert out.strip() == "true"


def test_eq_false_exits_one(capsys):
    code, out, _ = run(capsys, "eq", "--preset", "gn", "3", "x1", "x2")
    assert code == 1
    assert out.strip() == "false"


def test_rules_counts(capsys):
    code, out, _ = run(capsys, "rules", "--preset", "gn", "3")
    assert code == 0
    assert out.splitlines()[0] == "16 rules"
    assert "kind 3" in out and "->" in out


def test_confluence_critical_pairs(capsys):
    code, out, _ = run(capsys, "confluence", "--preset", "gn", "3")
    assert code == 0
    assert "24 checked: all joinable" in out


def test_confluence_random_probe(capsys):
    code, out, _ = run(capsys, "confluence", "--preset", "gn", "3",
                       "--random", "--seed", "5", "--trials", "40")
    assert code == 0
    assert "random probe: 40 trials" in out


def test_file_source(tmp_path, capsys):
    path = tmp_path / "pres.txt"
    path.write_text(FILE_TEXT)
    code, out, _ = run(capsys, "rules", "--file", str(path))
    assert code == 0
    assert out.splitlines()[0] == "22 rules"
    code, out, _ = run(capsys, "confluence", "--file", str(path))
    assert code == 0
    assert "all joinable" in out


def test_file_preset_line_reaches_braid_layer(tmp_path, capsys):
    path = tmp_path / "pres.txt"
    path.write_text("preset p2 2\n")
    code, out, _ = run(capsys, "braid-phi", "--file", str(path), "x1")
    assert code == 0
    assert out.strip() == "y1 x1 y1^-1"


# --- certificates and oracles ---------------------------------------------------------

def test_certify_with_orbit_evidence(capsys):
    code, out, _ = run(capsys, "pingpong-certify", "--preset", "gn", "3",
                       "--spec", "A1:x1:x1", "--spec", "A2:x2:y1 x2",
                       "--evidence", "A1:orbit:x1", "--evidence", "A2:orbit:y1 x2")
    assert code == 0
    assert "certified" in out


def test_certify_without_evidence_is_inconclusive(capsys):
    code, out, _ = run(capsys, "pingpong-certify", "--preset", "gn", "3",
                       "--spec", "A1:x1:x1")
    assert code == 3
    assert "inconclusive" in out and "no evidence" in out


def test_certify_probe_evidence_stays_inconclusive(capsys):
    code, out, _ = run(capsys, "pingpong-certify", "--preset", "gn", "3",
                       "--spec", "A1:x1:x1", "--evidence", "A1:probe:4")
    assert code == 3
    assert "bounded probe only: pass" in out


def test_certify_overlapping_support_is_refuted(capsys):
    code, out, _ = run(capsys, "pingpong-certify", "--preset", "gn", "3",
                       "--spec", "A1:x1:x1", "--spec", "A2:x1:x1",
                       "--evidence", "A1:declared:external", "--evidence", "A2:declared:external")
    assert code == 1
    assert "refuted" in out


def test_certify_json_document(capsys):
    code, out, _ = run(capsys, "pingpong-certify", "--preset", "gn", "3", "--json",
                       "--spec", "A1:x1:x1", "--evidence", "A1:orbit:x1")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["verdict"] == "certified"
    assert any(c["name"].startswith("base_intersection") for c in doc["conditions"])


def test_oracle_pass_and_fail(capsys):
    code, out, _ = run(capsys, "pingpong-oracle", "--preset", "gn", "3",
                       "--spec", "A1:x1:x1", "--spec", "A2:x2:y1 x2",
                       "--syllables", "4")
    assert code == 0
    assert "pass" in out
    code, out, _ = run(capsys, "pingpong-oracle", "--preset", "gn", "3",
                       "--spec", "A1:x1:x1", "--spec", "B1:x1:x1",
                       "--syllables", "4")
    assert code == 1
    assert "A1: (x1)" in out and "B1: (x1)^-1" in out


def test_oracle_budget_inconclusive(capsys):
    code, out, _ = run(capsys, "pingpong-oracle", "--preset", "gn", "3",
                       "--spec", "A1:x1:x1", "--spec", "A2:x2:y1 x2",
                       "--max-products", "5")
    assert code == 3
    assert "budget" in out


# --- braid layer ----------------------------------------------------------------------

def test_braid_verify_rank_two(capsys):
    code, out, _ = run(capsys, "braid-verify", "--preset", "p2", "2")
    assert code == 0
    assert "all trivial" in out and "via push" in out


def test_braid_verify_rank_three_uses_both_routes(capsys):
    code, out, _ = run(capsys, "braid-verify", "--preset", "p2", "3")
    assert code == 0
    assert "via split" in out
    assert "relator_image_trivial" in out and "FAIL" in out
    assert "do not descend" in out


def test_braid_verify_json(capsys):
    code, out, _ = run(capsys, "braid-verify", "--preset", "p2", "3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "pass"
    assert doc["relations"]["ok"] is True
    assert doc["relations"]["all_settled_by_push"] is False
    assert doc["extension"]["ok"] is False


def test_braid_phi_power_and_push(capsys):
    code, out, _ = run(capsys, "braid-phi", "--preset", "p2", "2", "x1")
    assert code == 0
    assert out.strip() == "y1 x1 y1^-1"
    code, out, _ = run(capsys, "braid-phi", "--preset", "p2", "2", "--k", "-1", "x1")
    assert code == 0
    assert out.strip() == "x1^-1 y1^-1 x1 y1 x1"
    code, out, _ = run(capsys, "braid-phi", "--preset", "p2", "2", "--push", "x1 t y1")
    assert code == 0
    assert "semidirect: (y1 x1, t^1)" in out
    assert "splitting:" in out and "trivial: false" in out


def test_braid_names_accepted(capsys):
    code, out, _ = run(capsys, "braid-phi", "--preset", "p2", "3", "A1_4")
    assert code == 0
    assert out.strip() == "y1 x1 y1^-1"


def test_braid_check_free_example(capsys):
    code, out, _ = run(capsys, "braid-check-free", "--preset", "p2", "3",
                       "--w", "y1 x1", "--w", "x2")
    assert code == 1
    assert "refuted" in out and "[y1 x1, t] = 1" in out


def test_braid_check_free_certified(capsys):
    code, out, _ = run(capsys, "braid-check-free", "--preset", "p2", "3",
                       "--w", "x1", "--w", "x2")
    assert code == 0
    assert "certified" in out


def test_danilevich_verdicts(capsys):
    code, out, _ = run(capsys, "danilevich", "--preset", "p2", "2", "--h", "x1")
    assert code == 0
    code, out, _ = run(capsys, "danilevich", "--preset", "p2", "2", "--h", "y1 x1")
    assert code == 1
    assert "y1 x1 t x1^-1 y1^-1 t^-1" in out
    code, out, _ = run(capsys, "danilevich", "--preset", "p2", "2",
                       "--h", "x1", "--max-products", "3")
    assert code == 3


# --- usage and parse errors ------------------------------------------------------------

def test_word_parse_error(capsys):
    code, _, err = run(capsys, "nf", "--preset", "gn", "3", "y1 zz")
    assert code == 2
    assert "parse error" in err and "column" in err


def test_missing_source(capsys):
    code, _, err = run(capsys, "nf", "x1")
    assert code == 2
    assert "presentation source" in err


def test_conflicting_sources(tmp_path, capsys):
    path = tmp_path / "pres.txt"
    path.write_text(FILE_TEXT)
    code, _, err = run(capsys, "nf", "--preset", "gn", "3", "--file", str(path), "x1")
    assert code == 2


def test_bad_preset(capsys):
    code, _, err = run(capsys, "nf", "--preset", "zz", "3", "x1")
    assert code == 2
    code, _, err = run(capsys, "nf", "--preset", "gn", "1", "x1")
    assert code == 2


def test_braid_command_needs_p2(capsys):
    code, _, err = run(capsys, "braid-verify", "--preset", "gn", "3")
    assert code == 2
    assert "p2" in err


def test_bad_spec_and_evidence_format(capsys):
    code, _, err = run(capsys, "pingpong-certify", "--preset", "gn", "3",
                       "--spec", "A1:x1")
    assert code == 2
    code, _, err = run(capsys, "pingpong-certify", "--preset", "gn", "3",
                       "--spec", "A1:x1:x1", "--evidence", "A1:psychic:yes")
    assert code == 2
    code, _, err = run(capsys, "pingpong-certify", "--preset", "gn", "3",
                       "--spec", "A1:x1:x1", "--evidence", "ZZ:declared:proof")
    assert code == 2


def test_presentation_file_error_carries_line(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("base y1\nstable x1\nrel x1 : zz ^ y1 = zz ^ y1\n")
    code, _, err = run(capsys, "rules", "--file", str(path))
    assert code == 2
    assert "line 3" in err


def test_danilevich_rejects_outer_generator(capsys):
    code, _, err = run(capsys, "danilevich", "--preset", "p2", "2", "--h", "x1 t")
    assert code == 2
    assert "outer" in err
