"""Scenario parsing, witness files, and the command-line driver end to end."""

import json
import os

import pytest

from multitaylor.cli import main, run_command
from multitaylor.construct import read_witness, write_witness
from multitaylor.polynomials import ComplexPolynomial
from multitaylor.scenario import ScenarioError, load_scenario, parse_scenario

DESK = """\
# two far sets at one shared truncation index
[domain]
omega = disk 0 1
zeta0 = 0

[sets]
L  = disk 0 0.4
K1 = segment 1.5 2.5
K2 = segment 2-1.5j 2+1.5j

[neighborhoods]
U1 = halfplane 1 0.9
U2 = halfplane -1 -1.1

[sequences]
lambda1 = poly 0 1
lambda2 = poly 0 0 1

[targets]
g = const 0
f1 on K1 = const 1
f2 on K2 = poly 0 1

[tolerances]
eps = 0.1
s = 10
trials = 16

[verify]
coeffs = construct-out/witness.staged
"""

MINIMAL = """\
[domain]
omega = disk 0 1
zeta0 = 0
"""


def scenario(text=MINIMAL, **extra):
    return parse_scenario(text, **extra)


# ---------------------------------------------------------------------------
# grammar


class TestParsing:
    def test_minimal_domain(self):
        scn = scenario()
        assert scn.omega is not None
        assert scn.omega.zeta0 == 0.0
        assert scn.sets == {}

    def test_defaults(self):
        scn = scenario()
        assert scn.eps == 0.1
        assert scn.s == 10
        assert scn.trials == 16
        assert scn.horizon == 64
        assert scn.levels == (2, 4, 8, 16, 32)
        assert scn.mesh is None
        assert scn.theta0 is None

    def test_complex_literals_are_single_tokens(self):
        scn = scenario(MINIMAL + "[sets]\nK = segment 2-1.5j 2+1.5j\n")
        seg = scn.sets["K"].primitives[0]
        assert seg.a == 2 - 1.5j
        assert seg.b == 2 + 1.5j

    def test_union_splits_on_spaced_plus(self):
        scn = scenario(MINIMAL + "[sets]\nK = disk 0 1 + segment 2 3\n")
        assert len(scn.sets["K"].primitives) == 2

    def test_exhaustion_names_resolve(self):
        scn = scenario(MINIMAL + "[sets]\nE = exhaustion 3\n")
        e1 = scn.resolve_set("E1", field="x")
        e3 = scn.resolve_set("E3", field="x")
        assert e1.diameter < e3.diameter

    def test_sequences_parse_with_labels(self):
        scn = scenario(MINIMAL + "[sequences]\nlambda1 = poly 0 1\nlambda2 = geom 2\n")
        fam = scn.require_family()
        assert [m.label for m in fam.members] == ["lambda1", "lambda2"]
        assert fam.members[1].eval(3) == 8

    def test_targets_pair_with_sets(self):
        scn = scenario(DESK)
        pairs = scn.target_pairs()
        assert len(pairs) == 2
        assert pairs[0][0](0.5) == 1.0  # const 1 on K1

    def test_raw_text_is_preserved_verbatim(self):
        scn = scenario(DESK)
        assert scn.raw == DESK


class TestParseErrors:
    def test_missing_zeta0(self):
        with pytest.raises(ScenarioError, match="missing required field zeta0") as ei:
            scenario("[domain]\nomega = disk 0 1\n")
        assert ei.value.field == "domain.zeta0"

    def test_unknown_section_carries_line(self):
        with pytest.raises(ScenarioError, match="unknown section") as ei:
            scenario(MINIMAL + "\n[nonsense]\nx = 1\n")
        assert ei.value.line == 5

    def test_duplicate_key_rejected(self):
        with pytest.raises(ScenarioError, match="duplicate key 'omega'"):
            scenario("[domain]\nomega = disk 0 1\nomega = disk 0 2\nzeta0 = 0\n")

    def test_sequence_keys_must_be_consecutive(self):
        with pytest.raises(ScenarioError, match=r"must run 1\.\.2"):
            scenario(MINIMAL + "[sequences]\nlambda1 = poly 0 1\nlambda3 = poly 0 0 1\n")

    def test_target_needs_known_set(self):
        text = MINIMAL + "[targets]\ng = const 0\nf1 on K9 = const 1\n"
        with pytest.raises(ScenarioError, match="K9"):
            scenario(text)

    def test_command_section_rejects_unknown_key(self):
        with pytest.raises(ScenarioError, match="unknown entry 'seed'") as ei:
            scenario(MINIMAL + "[fekete]\nset = L\nseed = 4\n")
        assert ei.value.field == "fekete.seed"

    def test_bad_complex_token_names_line_and_field(self):
        with pytest.raises(ScenarioError, match="line 6: sets.K"):
            scenario(MINIMAL + "\n[sets]\nK = segment 1 nope\n")


# ---------------------------------------------------------------------------
# driver plumbing shared by the artifact tests


@pytest.fixture(scope="module")
def desk(tmp_path_factory):
    """One construct run; the artifact tests all read from it."""
    root = tmp_path_factory.mktemp("desk")
    path = root / "desk.ini"
    path.write_text(DESK)
    out = root / "construct-out"
    code = main(["construct", str(path), "--out", str(out)])
    report = json.loads((out / "report.json").read_text())
    return {"root": root, "ini": path, "out": out, "code": code, "report": report}


class TestConstructArtifacts:
    def test_exit_zero_and_passed(self, desk):
        assert desk["code"] == 0
        assert desk["report"]["passed"] is True

    def test_frozen_desk_numbers(self, desk):
        res = desk["report"]["results"]
        assert res["n1"] == 8
        assert res["witness_degree"] == 63
        assert res["final_error_on_l"] < 0.05
        assert all(e < 0.1 for e in res["final_errors_per_set"])

    def test_expected_files_exist(self, desk):
        names = sorted(os.listdir(desk["out"]))
        assert names == ["errors.csv", "report.json", "run.txt",
                         "stages.csv", "witness.coef", "witness.staged"]

    def test_report_keys_sorted(self, desk):
        text = (desk["out"] / "report.json").read_text()
        assert text == json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n"

    def test_run_txt_shape(self, desk):
        lines = (desk["out"] / "run.txt").read_text().splitlines()
        assert lines[0].startswith("# generated ")
        assert lines[1] == "command: construct"
        assert lines[-1] == "verdict: PASS"

    def test_stage_csv_has_one_row_per_stage(self, desk):
        rows = (desk["out"] / "stages.csv").read_text().splitlines()
        assert rows[0].startswith("sigma,n,window_lo")
        assert len(rows) >= 3  # header + seed stage + corrections


class TestWitnessFiles:
    def test_staged_round_trip_is_byte_identical(self, desk, tmp_path):
        w = read_witness(str(desk["out"] / "witness.staged"))
        again = tmp_path / "again.staged"
        write_witness(str(again), w)
        assert again.read_text() == (desk["out"] / "witness.staged").read_text()

    def test_staged_and_plain_agree_near_center(self, desk):
        staged = read_witness(str(desk["out"] / "witness.staged"))
        from multitaylor.gaps import read_coefficients
        plain = ComplexPolynomial(0.0, read_coefficients(str(desk["out"] / "witness.coef")))
        for z in (0.0, 0.2 + 0.1j, -0.3j):
            assert abs(staged(z) - plain(z)) < 1e-9

    def test_corrupt_magic_rejected(self, desk, tmp_path):
        bad = tmp_path / "bad.staged"
        text = (desk["out"] / "witness.staged").read_text()
        bad.write_text(text.replace("stage", "mango", 1))
        with pytest.raises(ValueError, match="bad.staged:"):
            read_witness(str(bad))

    def test_staged_witness_cannot_be_recentered(self, desk, tmp_path):
        moved = tmp_path / "moved.ini"
        moved.write_text(DESK.replace("zeta0 = 0", "zeta0 = 0.1"))
        # point verify at the staged witness from the original center
        rel = os.path.relpath(desk["out"] / "witness.staged", tmp_path)
        moved.write_text(moved.read_text().replace(
            "coeffs = construct-out/witness.staged", f"coeffs = {rel}"))
        code = main(["verify", str(moved), "--out", str(tmp_path / "v")])
        assert code == 2


class TestVerifyCommand:
    def test_staged_verify_passes_with_common_window(self, desk):
        out = desk["root"] / "verify-out"
        code = main(["verify", str(desk["ini"]), "--out", str(out)])
        report = json.loads((out / "report.json").read_text())
        assert code == 0
        assert report["passed"] is True
        assert report["results"]["common"] == [8, 9]


class TestClassifyCommand:
    def test_well_ordered_family_certificate(self, tmp_path, capsys):
        path = tmp_path / "s.ini"
        path.write_text(MINIMAL + "[sequences]\nlambda1 = poly 0 1\nlambda2 = poly 0 0 1\n")
        code = main(["classify", str(path), "--out", str(tmp_path / "o")])
        report = json.loads((tmp_path / "o" / "report.json").read_text())
        assert code == 0
        assert report["results"]["well_ordered"] is True
        assert report["results"]["status"] == "certificate"
        assert report["results"]["replay_ok"] is True
        assert capsys.readouterr().out.startswith("classify: PASS")

    def test_reversed_family_is_permuted_first(self, tmp_path):
        path = tmp_path / "s.ini"
        path.write_text(MINIMAL + "[sequences]\nlambda1 = poly 0 0 1\nlambda2 = poly 0 1\n")
        code = main(["classify", str(path), "--out", str(tmp_path / "o")])
        report = json.loads((tmp_path / "o" / "report.json").read_text())
        assert code == 0
        assert report["results"]["well_ordered"] is False
        assert report["results"]["permutation"] == [2, 1]
        assert report["results"]["status"] == "certificate"

    def test_bounded_ratio_family_fails_with_exit_one(self, tmp_path):
        path = tmp_path / "s.ini"
        path.write_text(MINIMAL + "[sequences]\nlambda1 = poly 0 1\nlambda2 = poly 0 2\n")
        code = main(["classify", str(path), "--out", str(tmp_path / "o")])
        report = json.loads((tmp_path / "o" / "report.json").read_text())
        assert code == 1
        assert report["passed"] is False
        assert report["results"]["status"] == "class-empty"
        assert report["results"]["exact"] is True


class TestErrorExit:
    def test_parse_error_exits_two_and_names_field(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text("[domain]\nomega = disk 0 1\n")
        code = main(["classify", str(path), "--out", str(tmp_path / "o")])
        err = capsys.readouterr().err
        assert code == 2
        assert "error:" in err and "zeta0" in err

    def test_missing_file_exits_two(self, tmp_path, capsys):
        code = main(["classify", str(tmp_path / "absent.ini"), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "error:" in capsys.readouterr().err


class TestDeterminism:
    def test_reruns_are_byte_identical_outside_run_txt(self, tmp_path):
        path = tmp_path / "s.ini"
        path.write_text(MINIMAL
                        + "[sets]\nS = segment -1 1\n"
                        + "[fekete]\nset = S\nn = 12\n"
                        + "[sequences]\nlambda1 = poly 0 1\nlambda2 = poly 0 0 1\n")
        for cmd in ("classify", "fekete"):
            a, b = tmp_path / f"{cmd}-a", tmp_path / f"{cmd}-b"
            assert run_command(cmd, str(path), str(a)) == 0
            assert run_command(cmd, str(path), str(b)) == 0
            for name in os.listdir(a):
                fa = (a / name).read_text()
                fb = (b / name).read_text()
                if name == "run.txt":  # first line is the only timestamp anywhere
                    assert fa.splitlines()[1:] == fb.splitlines()[1:]
                else:
                    assert fa == fb

    def test_report_carries_scenario_text_for_replay(self, tmp_path):
        path = tmp_path / "s.ini"
        path.write_text(MINIMAL + "[sets]\nS = disk 0 1\n[capacity]\nset = S\nn = 16\n")
        run_command("capacity", str(path), str(tmp_path / "o"))
        report = json.loads((tmp_path / "o" / "report.json").read_text())
        assert report["inputs"]["scenario_text"] == path.read_text()
        assert report["inputs"]["seedless"] is True


class TestOverrides:
    def test_horizon_and_trials_flags(self, tmp_path):
        path = tmp_path / "s.ini"
        path.write_text(MINIMAL + "[sequences]\nlambda1 = poly 0 1\nlambda2 = poly 0 0 1\n")
        code = main(["classify", str(path), "--out", str(tmp_path / "o"),
                     "--horizon", "32", "--trials", "4"])
        report = json.loads((tmp_path / "o" / "report.json").read_text())
        assert code == 0
        assert report["inputs"]["horizon"] == 32
        assert report["inputs"]["trials"] == 4
