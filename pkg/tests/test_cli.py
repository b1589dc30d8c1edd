"""CLI behavior: JSON on stdout, diagnostics on stderr, exit codes."""

import json

import pytest

from mastforge import parse
from mastforge.cli import main

from conftest import DATA_DIR


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGenerate:
    def test_k2_writes_pair_and_reports(self, tmp_path, capsys):
        s_path = tmp_path / "s.nwk"
        t_path = tmp_path / "t.nwk"
        code, out, err = run(
            capsys, "generate", "--k", "2",
            "--out-s", str(s_path), "--out-t", str(t_path),
        )
        assert code == 0 and not err
        payload = json.loads(out)
        assert payload == {"k": 2, "n": 16, "expected_mast": 4}
        assert parse(s_path.read_text()).size == 16
        assert parse(t_path.read_text()).size == 16

    def test_c_selects_k(self, tmp_path, capsys):
        code, out, _ = run(
            capsys, "generate", "--c", "2.0",
            "--out-s", str(tmp_path / "s.nwk"), "--out-t", str(tmp_path / "t.nwk"),
        )
        assert code == 0
        assert json.loads(out)["k"] == 1

    def test_oversized_k_fails_cleanly(self, tmp_path, capsys):
        code, out, err = run(
            capsys, "generate", "--k", "5",
            "--out-s", str(tmp_path / "s.nwk"), "--out-t", str(tmp_path / "t.nwk"),
        )
        assert code == 1 and not out
        assert "k=5" in err

    def test_pipeline_generate_then_mast(self, tmp_path, capsys):
        s_path, t_path = str(tmp_path / "s.nwk"), str(tmp_path / "t.nwk")
        code, _, _ = run(capsys, "generate", "--k", "2", "--out-s", s_path, "--out-t", t_path)
        assert code == 0
        code, out, _ = run(capsys, "mast", s_path, t_path)
        assert code == 0
        assert json.loads(out) == 4

    def test_pipeline_k3_reaches_32(self, tmp_path, capsys):
        s_path, t_path = str(tmp_path / "s.nwk"), str(tmp_path / "t.nwk")
        code, out, _ = run(capsys, "generate", "--k", "3", "--out-s", s_path, "--out-t", t_path)
        assert code == 0
        assert json.loads(out)["n"] == 2048
        code, out, _ = run(capsys, "mast", s_path, t_path)
        assert code == 0
        assert json.loads(out) == 32

    def test_pipeline_deterministic(self, tmp_path, capsys):
        paths = [tmp_path / name for name in ("a.nwk", "b.nwk", "c.nwk", "d.nwk")]
        run(capsys, "generate", "--k", "2", "--out-s", str(paths[0]), "--out-t", str(paths[1]))
        run(capsys, "generate", "--k", "2", "--out-s", str(paths[2]), "--out-t", str(paths[3]))
        assert paths[0].read_text() == paths[2].read_text()
        assert paths[1].read_text() == paths[3].read_text()


class TestMast:
    def test_self_mast_prints_leaf_count(self, tmp_path, capsys):
        path = tmp_path / "t.nwk"
        path.write_text("((a,b),(c,d));\n")
        code, out, _ = run(capsys, "mast", str(path), str(path))
        assert code == 0
        assert json.loads(out) == 4

    def test_brute_flag(self, tmp_path, capsys):
        path = tmp_path / "t.nwk"
        path.write_text("((a,b),c);\n")
        code, out, _ = run(capsys, "mast", "--brute", str(path), str(path))
        assert code == 0
        assert json.loads(out) == 3

    def test_witness_file(self, tmp_path, capsys):
        s_path = tmp_path / "s.nwk"
        t_path = tmp_path / "t.nwk"
        s_path.write_text("((1,2),(3,4));\n")
        t_path.write_text("(((1,2),3),4);\n")
        witness = tmp_path / "w.nwk"
        code, out, _ = run(capsys, "mast", str(s_path), str(t_path), "--witness", str(witness))
        assert code == 0
        size = json.loads(out)
        assert parse(witness.read_text()).size == size == 3

    def test_witness_with_brute_is_refused(self, tmp_path, capsys):
        path = tmp_path / "t.nwk"
        path.write_text("(a,b);\n")
        code, _, err = run(
            capsys, "mast", "--brute", str(path), str(path),
            "--witness", str(tmp_path / "w.nwk"),
        )
        assert code == 1 and "witness" in err

    def test_parse_error_names_file_and_position(self, tmp_path, capsys):
        path = tmp_path / "bad.nwk"
        path.write_text("(a,b,c);\n")
        good = tmp_path / "good.nwk"
        good.write_text("(a,b);\n")
        code, out, err = run(capsys, "mast", str(path), str(good))
        assert code == 1 and not out
        assert "bad.nwk" in err and "position" in err

    def test_missing_file(self, tmp_path, capsys):
        good = tmp_path / "good.nwk"
        good.write_text("(a,b);\n")
        code, _, err = run(capsys, "mast", str(tmp_path / "absent.nwk"), str(good))
        assert code == 1 and "absent.nwk" in err


class TestVerify:
    def test_generated_k2_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "2")
        assert code == 0
        report = json.loads(out)
        assert report["pass"] is True
        names = {entry["check"] for entry in report["checks"]}
        assert {"pairwise_overlap", "anticaterpillar_restrictions", "mast_size"} <= names

    def test_external_golden_pair_passes(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--k", "3",
            "--s", str(DATA_DIR / "balanced2048_s.nwk"),
            "--t", str(DATA_DIR / "balanced2048_t.nwk"),
        )
        assert code == 0
        report = json.loads(out)
        assert report["pass"] is True

    def test_wrong_size_supplied_pair_fails(self, tmp_path, capsys):
        small = tmp_path / "small.nwk"
        small.write_text("(a,b);\n")
        code, _, err = run(
            capsys, "verify", "--k", "2", "--s", str(small), "--t", str(small)
        )
        assert code == 1 and err

    def test_one_sided_flags_rejected(self, tmp_path, capsys):
        path = tmp_path / "s.nwk"
        path.write_text("(a,b);\n")
        code, _, err = run(capsys, "verify", "--k", "2", "--s", str(path))
        assert code == 1 and "both" in err


class TestPackBoundsProbe:
    def test_pack_reports_count(self, capsys):
        code, out, _ = run(capsys, "pack", "--n", "4")
        assert code == 0
        payload = json.loads(out)
        assert payload["n"] == 4
        assert payload["count"] == 2
        assert payload["host_height"] == 3
        assert sorted(p for cat in payload["caterpillars"] for p in cat) == list(range(8))

    def test_bounds_value_mode(self, capsys):
        code, out, _ = run(capsys, "bounds", "--n", "2048")
        assert code == 0
        payload = json.loads(out)
        assert payload["floor"] == pytest.approx(2 ** 1.87, rel=1e-12)
        assert payload["sixth_root"] == pytest.approx(2048 ** (1 / 6), rel=1e-12)

    def test_bounds_certify(self, capsys):
        code, out, _ = run(capsys, "bounds", "--certify")
        assert code == 0
        payload = json.loads(out)
        assert payload["certificates"]["pass"] is True
        assert abs(payload["beta"]["beta"] - 0.149) <= 0.001

    def test_probe(self, capsys, monkeypatch):
        monkeypatch.setenv("MAST_FORGE_THREADS", "2")
        code, out, _ = run(capsys, "probe", "--m", "3", "--trials", "5", "--seed", "11")
        assert code == 0
        payload = json.loads(out)
        assert payload["n"] == 8
        assert payload["all_above"] is True

    def test_unknown_flag_is_nonzero(self, capsys):
        code = main(["pack", "--n", "4", "--bogus"])
        capsys.readouterr()
        assert code != 0

    def test_unknown_command_is_nonzero(self, capsys):
        code = main(["frobnicate"])
        capsys.readouterr()
        assert code != 0
