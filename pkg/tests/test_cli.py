import json

import pytest

from atiyahlab.cli import main

TINY = """\
[field]
p = 0

[curve]
a = 0, 0, 0, -1, 1

[surface]
q = 0, 1
T = -1, 1

[run]
seed = 5

[job.h0-small]
type = h0
levels = 0..2
twisted = both

[job.twist-check]
type = verify-prop23
levels = 0..2
"""

ORDER_FAIL = """\
[field]
p = 3
k = 1

[curve]
a = 0, 0, 0, -1, 1

[surface]
q = 0, 1

[job.order]
type = group-order
expect_order = 8
"""

JOB_ERROR = """\
[field]
p = 0

[curve]
a = 0, 0, 0, -1, 1

[surface]
q = 0, 1

[job.bad-point]
type = h0-fat
level = 1
points = 0:1:0:1
"""


def write(tmp_path, text, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_successful_run(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    out = tmp_path / "out"
    code = main(["run", "--config", cfg, "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "[INFO] h0-small (h0)" in printed
    assert "[PASS] twist-check (verify-prop23)" in printed
    assert (out / "report.json").exists()
    assert (out / "report.csv").exists()
    payload = json.loads((out / "report.json").read_text())
    assert payload["schema_version"] == 1
    assert payload["config"]["seed"] == 5
    assert [r["id"] for r in payload["results"]] == ["h0-small", "twist-check"]
    assert payload["results"][1]["status"] == "PASS"
    dims = payload["results"][0]["values"]["dims"]
    assert dims["plain"] == {"0": 1, "1": 1, "2": 1}
    assert dims["twisted"] == {"0": 1, "1": 2, "2": 3}


def test_json_is_byte_stable(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", cfg, "--out", str(a)]) == 0
    assert main(["run", "--config", cfg, "--out", str(b)]) == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_parallel_matches_serial(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    a, b = tmp_path / "serial", tmp_path / "parallel"
    assert main(["run", "--config", cfg, "--out", str(a), "--jobs", "1"]) == 0
    assert main(["run", "--config", cfg, "--out", str(b), "--jobs", "4"]) == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_json_excludes_wall_time(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    out = tmp_path / "out"
    main(["run", "--config", cfg, "--out", str(out)])
    assert "wall_time" not in (out / "report.json").read_text()


def test_csv_has_wall_time_column(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    out = tmp_path / "out"
    main(["run", "--config", cfg, "--out", str(out)])
    lines = (out / "report.csv").read_text().splitlines()
    assert lines[0] == "id,type,status,summary,error,wall_time_s"
    assert len(lines) == 3
    assert lines[1].startswith("h0-small,h0,INFO,")


def test_format_selection(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    out = tmp_path / "csv_only"
    main(["run", "--config", cfg, "--out", str(out), "--format", "csv"])
    assert (out / "report.csv").exists()
    assert not (out / "report.json").exists()
    out2 = tmp_path / "json_only"
    main(["run", "--config", cfg, "--out", str(out2), "--format", "json"])
    assert (out2 / "report.json").exists()
    assert not (out2 / "report.csv").exists()


def test_failing_expectation_exits_1(tmp_path, capsys):
    cfg = write(tmp_path, ORDER_FAIL)
    out = tmp_path / "out"
    code = main(["run", "--config", cfg, "--out", str(out)])
    assert code == 1
    assert "[FAIL] order (group-order)" in capsys.readouterr().out
    payload = json.loads((out / "report.json").read_text())
    row = payload["results"][0]
    assert row["status"] == "FAIL"
    assert row["values"]["order"] == 7           # the true order
    assert row["values"]["checks"]["order"] is False


def test_job_error_exits_1_without_aborting(tmp_path, capsys):
    # a fat point on the marked fiber is a per-job error, not a crash
    cfg = write(tmp_path, JOB_ERROR)
    out = tmp_path / "out"
    code = main(["run", "--config", cfg, "--out", str(out)])
    assert code == 1
    printed = capsys.readouterr().out
    assert "[ERROR] bad-point (h0-fat)" in printed
    payload = json.loads((out / "report.json").read_text())
    assert payload["results"][0]["status"] == "ERROR"
    assert "ValueError" in payload["results"][0]["error"]


@pytest.mark.parametrize("mutate,fragment", [
    (lambda t: t.replace("p = 0", "p = 4"), "not prime"),
    (lambda t: t.replace("q = 0, 1", "q = 5, 5"), "not on the curve"),
    (lambda t: t.replace("T = -1, 1", "T = 0, 1"), "differ"),
    (lambda t: t.replace("a = 0, 0, 0, -1, 1", "a = 0, 0, 0, 0, 0"),
     "singular"),
])
def test_inconsistent_data_exits_2(tmp_path, capsys, mutate, fragment):
    cfg = write(tmp_path, mutate(TINY))
    code = main(["run", "--config", cfg, "--out", str(tmp_path / "o")])
    assert code == 2
    assert fragment in capsys.readouterr().err


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.ini")]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_subcommand_filters_jobs(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    out = tmp_path / "out"
    code = main(["verify-prop23", "--config", cfg, "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "twist-check" in printed
    assert "h0-small" not in printed
    payload = json.loads((out / "report.json").read_text())
    assert len(payload["results"]) == 1


def test_subcommand_without_matching_jobs_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    assert main(["lambda", "--config", cfg]) == 2
    assert "no job of type 'lambda'" in capsys.readouterr().err


def test_out_env_var(tmp_path, capsys, monkeypatch):
    cfg = write(tmp_path, TINY)
    target = tmp_path / "from_env"
    monkeypatch.setenv("ATIYAHLAB_OUT", str(target))
    assert main(["run", "--config", cfg]) == 0
    assert (target / "report.json").exists()


def test_seed_override_recorded(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    out = tmp_path / "out"
    main(["run", "--config", cfg, "--out", str(out), "--seed", "99"])
    payload = json.loads((out / "report.json").read_text())
    assert payload["config"]["seed"] == 99


def test_bad_jobs_flag_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    assert main(["run", "--config", cfg, "--jobs", "0"]) == 2
