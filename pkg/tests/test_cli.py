import json
import subprocess
import sys

import pytest

from begriff.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, RunReport, corpus_list, run


def go(*argv):
    return run(list(argv))


class TestExitCodes:
    def test_classical_replay(self, capsys):
        code, rep = go("check", "corpus/frege_classical.cs", "--mode", "classical")
        assert code == EXIT_OK
        assert rep.inconsistency == [["lambda", "iota"]]
        assert "lambda contradicts iota" in capsys.readouterr().out

    def test_fail_on_inconsistent(self, capsys):
        code, _ = go("check", "corpus/frege_classical.cs", "--fail-on-inconsistent")
        assert code == EXIT_FAIL

    def test_guarded_replay(self, capsys):
        code, rep = go("check", "corpus/frege_guarded.cs", "--mode", "guarded", "--json")
        assert code == EXIT_OK and rep.inconsistency == []
        steps = {s["id"]: s for s in rep.steps}
        assert steps["3iii"]["status"] == "blocked" and steps["3iii"]["blocked_by"] == "5"
        assert steps["10"]["status"] == steps["12"]["status"] == "certified"
        assert steps["10"]["anchor"] == "(10)"

    def test_missing_file(self, capsys):
        assert go("check", "nonexistent.cs")[0] == EXIT_IO

    def test_usage(self, capsys):
        assert go()[0] == EXIT_USAGE
        assert go("check", "x.cs", "--mode", "lenient")[0] == EXIT_USAGE
        assert go("models", "corpus/models_star.cs", "--max-size", "0")[0] == EXIT_USAGE

    def test_failing_script(self, tmp_path, capsys):
        p = tmp_path / "bad.cs"
        p.write_text("layer fol\nstep a: mp [x, y]\n", encoding="utf-8")
        assert go("check", str(p))[0] == EXIT_FAIL

    def test_malformed_script(self, tmp_path, capsys):
        p = tmp_path / "bad.cs"
        p.write_text("layer fol\nwhatever\n", encoding="utf-8")
        code, rep = go("check", str(p))
        assert code == EXIT_FAIL and "line 2" in rep.result["error"]

    def test_every_corpus_script_exit_code(self, capsys):
        for entry in corpus_list():
            if entry["kind"] == "script":
                assert go("check", "corpus/" + entry["file"], "--mode", entry["mode"])[0] == EXIT_OK, entry


class TestCommands:
    def test_prove(self, capsys):
        code, rep = go("prove", "corpus/prove_ra.cs", "--depth", "6", "--json")
        assert code == EXIT_OK
        assert {s["id"]: s["replayed"] for s in rep.steps} == {"ra": True, "refl": True}

    def test_prove_unknown(self, tmp_path, capsys):
        p = tmp_path / "g.cs"
        p.write_text("goal bad: exists y. all x. x in y\n", encoding="utf-8")
        code, rep = go("prove", str(p), "--depth", "3", "--gamma", "20")
        assert code == EXIT_FAIL and rep.steps[0]["status"] == "unknown"

    def test_models(self, capsys):
        code, rep = go("models", "corpus/models_star.cs", "corpus/models_russell.cs", "--max-size", "2", "--json")
        assert code == EXIT_OK
        assert rep.result["models_star.cs"]["verdict"] == "Model"
        assert rep.result["models_russell.cs"] == {"verdict": "NoneUpTo", "max_size": 2}

    def test_defs(self, capsys):
        code, rep = go("defs", "check", "corpus/theory_empty.cs", "corpus/def_empty.cs", "--max-model-size", "2", "--json")
        assert code == EXIT_OK
        (d,) = rep.result["definitions"]
        assert d["proper"] and d["conservativity"]["kind"] == "NonCreativeUpTo"
        code, rep = go("defs", "check", "corpus/theory_empty.cs", "corpus/def_russell.cs")
        assert code == EXIT_FAIL
        assert rep.result["definitions"][0]["restrictions"]["iv"]["status"] == "fail"

    def test_corpus_manifest(self, capsys):
        code, rep = go("corpus", "list", "--json")
        files = {e["file"]: e for e in rep.result["manifest"]}
        assert "(I)" in files["zf_star_from_E2.cs"]["anchors"]
        assert "(V'c)" in files["frege_wayout_Vc.cs"]["anchors"]
        assert code == EXIT_OK

    def test_corpus_check(self, capsys):
        assert go("corpus", "check")[0] == EXIT_OK

    def test_empty_corpus_dir(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("BEGRIFF_CORPUS_DIR", str(tmp_path))
        code, rep = go("corpus", "list", "--json")
        assert code == EXIT_OK and rep.result["manifest"] == []

    def test_corpus_dir_override_resolves_paths(self, tmp_path, monkeypatch, capsys):
        (tmp_path / "mine.cs").write_text("layer fol\nstep a: axiom E1\n", encoding="utf-8")
        monkeypatch.setenv("BEGRIFF_CORPUS_DIR", str(tmp_path))
        assert go("check", "corpus/mine.cs")[0] == EXIT_OK

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code, _ = go("check", "corpus/theory_empty.cs", "--json", "--out", str(out))
        assert code == EXIT_OK and capsys.readouterr().out == ""
        assert json.loads(out.read_text(encoding="utf-8"))["schema_version"] == 1

    def test_unwritable_out(self, tmp_path, capsys):
        assert go("check", "corpus/theory_empty.cs", "--out", str(tmp_path / "no" / "r.txt"))[0] == EXIT_IO


class TestReport:
    @pytest.mark.parametrize(
        "argv",
        [
            ("check", "corpus/frege_guarded.cs", "--mode", "guarded"),
            ("prove", "corpus/prove_ra.cs"),
            ("corpus", "list"),
        ],
    )
    def test_round_trip_is_byte_identical(self, argv, capsys):
        _, rep = go(*argv, "--json")
        text = rep.to_json()
        assert RunReport.from_json(text).to_json() == text
        assert capsys.readouterr().out == text

    def test_schema_version_checked(self):
        with pytest.raises(ValueError):
            RunReport.from_json(json.dumps({"schema_version": 99}))


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "begriff.cli", "check", "corpus/frege_classical.cs"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "inconsistent" in proc.stdout
