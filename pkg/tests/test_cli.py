import json

import pytest

from threepowers import cli, counting


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_json(capsys):
    code, out, _ = run(capsys, "count", "--c", "1", "--d", "2", "--B", "5", "--format", "json")
    assert code == 0
    assert json.loads(out)["nontrivial_ordered"] == "18"


def test_count_listing(capsys):
    code, out, _ = run(capsys, "count", "--c", "1", "--d", "2", "--B", "7", "--list", "10", "--format", "json")
    sols = json.loads(out)["solutions"]
    assert {"left": ["1", "5", "6"], "right": ["2", "3", "7"], "key": ["12", "62"], "height": "7", "gcd": "1"} in sols


def test_count_csv(capsys):
    code, out, _ = run(capsys, "count", "--c", "1", "--d", "2", "--B", "5", "--format", "csv")
    header, row = out.strip().splitlines()
    assert header == "B,nontrivial,primitive_nontrivial,seconds"
    assert row.split(",")[:3] == ["5", "18", "18"]


def test_planes(capsys):
    code, out, _ = run(capsys, "planes", "--k", "4")
    assert code == 0 and "960" in out
    code, out, _ = run(capsys, "planes", "--c", "2", "--d", "5", "--format", "json")
    assert json.loads(out)["total_rational_positive"] == "6"


def test_spaces_probe_singular(capsys):
    assert json.loads(run(capsys, "spaces", "--m", "1", "--k", "3", "--format", "json")[1])["count"] == "27"
    probe = json.loads(run(capsys, "probe", "--k", "4", "--p", "17", "--seed", "5", "--format", "json")[1])
    assert probe["all_standard"] is True
    sing = json.loads(run(capsys, "singular", "--c", "1", "--d", "2", "--format", "json")[1])
    assert sing["label"] == "HEURISTIC" and sing["count"] == "1"


def test_scaling_json(capsys):
    code, out, _ = run(capsys, "scaling", "--c", "1", "--d", "3", "--B-list", "10,20,40", "--shards", "2", "--format", "json")
    obj = json.loads(out)
    assert [r["B"] for r in obj["rows"]] == ["10", "20", "40"]
    assert obj["fitted_exponent"] is not None


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "FAIL" not in out


def test_unknown_flag_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["count", "--c", "1", "--d", "2", "--B", "5", "-x"])
    assert info.value.code == 1
    assert "usage" in capsys.readouterr().err


def test_short_flags_rejected():
    with pytest.raises(SystemExit) as info:
        cli.main(["count", "--c", "1", "--d", "2", "--B", "5", "--form", "json"])
    assert info.value.code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["probe", "--k", "4", "--p", "2"],
        ["count", "--c", "2", "--d", "2", "--B", "5"],
        ["oracle", "--c", "1", "--d", "2", "--B", "13"],
        ["planes", "--c", "1", "--d", "3"],
        ["planes"],
    ],
)
def test_precondition_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_oracle_mismatch_exit_2(capsys, monkeypatch):
    real = counting.count_report

    def broken(e, B, **kw):
        rep = real(e, B, **kw)
        return counting.CountReport(rep.B, rep.exponents, rep.total_ordered + 2, rep.trivial_ordered, rep.nontrivial_ordered + 2, rep.primitive_nontrivial)

    monkeypatch.setattr(counting, "count_report", broken)
    assert run(capsys, "oracle", "--c", "1", "--d", "2", "--B", "5")[0] == 2
    assert run(capsys, "selftest", "--B-max", "3")[0] == 2


def test_config_and_output_dir(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("shards=4\nworkers=1\nmemory_budget=1000\n")
    code, _, err = run(capsys, "--config", str(cfg), "count", "--c", "1", "--d", "2", "--B", "200")
    assert code == 1 and "shard_count" in err

    out_dir = tmp_path / "reports"
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(out_dir))
    code, out, _ = run(capsys, "count", "--c", "1", "--d", "2", "--B", "5", "--format", "json")
    assert code == 0
    (written,) = out_dir.iterdir()
    assert json.loads(written.read_text()) == json.loads(out)


def test_bad_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour=blue\n")
    assert run(capsys, "--config", str(cfg), "planes", "--k", "1")[0] == 1
