import json

from checkergram.cli import main
from checkergram.report import Report

GAUSSIAN_JOB = {
    "scalar": "rational",
    "n": 1,
    "m": 6,
    "condensed_moments": [["1"], ["0"], ["1"], ["0"], ["3"]],
}

IDENTITY_JOB = {
    "scalar": "rational",
    "n": 1,
    "m": 4,
    "condensed_moments": [["1"], ["0"], ["1"]],
}


def write_job(tmp_path, payload, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, out


def test_verify_gaussian_passes(tmp_path, capsys):
    path = write_job(tmp_path, GAUSSIAN_JOB)
    code, out = run_cli(capsys, "--input", path, "--command", "verify")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["command"] == "verify"
    assert all(r["passed"] for r in report["records"])


def test_factorize_emits_matrices(tmp_path, capsys):
    job = dict(GAUSSIAN_JOB)
    job["condensed_moments"] = [["1"], ["1/2"], ["1"]]
    job["m"] = 4
    path = write_job(tmp_path, job)
    code, out = run_cli(capsys, "--input", path, "--command", "factorize",
                        "--emit-matrices")
    assert code == 0
    report = json.loads(out)
    d = report["matrices"]["d"]
    flattened = {v for row in d for blk in row for r in blk for v in r}
    assert "3/4" in flattened  # exact rational strings, no float conversion
    assert all(isinstance(v, str) for v in flattened)


def test_singular_pivot_reported(tmp_path, capsys):
    job = {"scalar": "rational", "n": 1, "m": 4,
           "condensed_moments": [["0"], ["1"], ["1"]]}
    path = write_job(tmp_path, job)
    code, out = run_cli(capsys, "--input", path, "--command", "factorize")
    assert code == 1
    report = json.loads(out)
    assert report["passed"] is False
    rec = [r for r in report["records"] if r["name"] == "factorize"][0]
    assert rec["indices"] == [0]
    assert "SingularPivot" in rec["detail"]


def test_unwrapped_pattern_violation_is_usage_error(tmp_path, capsys):
    job = {"scalar": "rational", "n": 1, "m": 4,
           "unwrapped_moments": [["0"], ["1"], ["1"], ["0"], ["0"], ["1"]]}
    path = write_job(tmp_path, job)
    code, _ = run_cli(capsys, "--input", path, "--command", "verify")
    assert code == 2


def test_odd_truncation_is_usage_error(tmp_path, capsys):
    job = dict(GAUSSIAN_JOB)
    job["m"] = 5
    path = write_job(tmp_path, job)
    code, _ = run_cli(capsys, "--input", path)
    assert code == 2


def test_float_literal_in_rational_mode_rejected(tmp_path, capsys):
    job = dict(GAUSSIAN_JOB)
    job["condensed_moments"] = [[0.5], ["0"], ["1"]]
    path = write_job(tmp_path, job)
    code, _ = run_cli(capsys, "--input", path)
    assert code == 2


def test_missing_file(tmp_path, capsys):
    code, _ = run_cli(capsys, "--input", str(tmp_path / "nope.json"))
    assert code == 2


def test_gram_entries_payload(tmp_path, capsys):
    job = {"scalar": "rational", "n": 1, "m": 2,
           "gram_entries": [[0, 1, ["1"]], [1, 0, ["1"]]]}
    path = write_job(tmp_path, job)
    code, out = run_cli(capsys, "--input", path, "--command", "verify")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_hankel_command_needs_moments(tmp_path, capsys):
    job = {"scalar": "rational", "n": 1, "m": 2,
           "gram_entries": [[0, 1, ["1"]], [1, 0, ["1"]]]}
    path = write_job(tmp_path, job)
    code, _ = run_cli(capsys, "--input", path, "--command", "hankel")
    assert code == 2


def test_hankel_command_gaussian(tmp_path, capsys):
    job = dict(GAUSSIAN_JOB)
    job["n"], job["m"] = 1, 8
    job["condensed_moments"] = [["1"], ["0"], ["1"], ["0"], ["3"], ["0"], ["15"]]
    path = write_job(tmp_path, job)
    code, out = run_cli(capsys, "--input", path, "--command", "hankel")
    assert code == 0
    report = json.loads(out)
    names = {r["name"] for r in report["records"]}
    assert "even-p-is-condensed-op" in names
    assert "kronecker-route-l1" in names


def test_kernels_identity_lift_tensor(tmp_path, capsys):
    path = write_job(tmp_path, IDENTITY_JOB)
    code, out = run_cli(capsys, "--input", path, "--command", "kernels", "--nmax", "0")
    assert code == 0
    report = json.loads(out)
    tensor = report["matrices"]["kernel_even_0"]
    assert tensor[1][0] == [["1"]]  # the w coefficient
    assert tensor[0][0] == [["0"]]
    scope = [r for r in report["records"] if r["name"] == "kernel-relation-scope"]
    assert scope and "SingularPivot" in scope[0]["detail"]


def test_christoffel_command(tmp_path, capsys):
    job = {"scalar": "rational", "n": 1, "m": 8,
           "condensed_moments": [["1"], ["1"], ["3"], ["15"], ["105"], ["945"], ["10395"]]}
    path = write_job(tmp_path, job)
    code, out = run_cli(capsys, "--input", path, "--command", "christoffel",
                        "--emit-matrices")
    assert code == 0
    report = json.loads(out)
    assert report["matrices"]["sigma"][1][0] == [["1"]]
    names = {r["name"] for r in report["records"]}
    assert {"connector-route-equality", "q-side-column", "connector-row"} <= names


def test_christoffel_command_singular_shift(tmp_path, capsys):
    path = write_job(tmp_path, GAUSSIAN_JOB)
    code, out = run_cli(capsys, "--input", path, "--command", "christoffel")
    assert code == 1
    report = json.loads(out)
    rec = [r for r in report["records"] if r["name"] == "christoffel-factorize"][0]
    assert rec["passed"] is False and rec["indices"] == [1]


def test_polys_command_route_equality(tmp_path, capsys):
    path = write_job(tmp_path, GAUSSIAN_JOB)
    code, out = run_cli(capsys, "--input", path, "--command", "polys", "--emit-matrices")
    assert code == 0
    report = json.loads(out)
    assert report["matrices"]["p"][4] == [[["-1"]], [["0"]], [["0"]], [["0"]], [["1"]]]


def test_report_round_trip(tmp_path, capsys):
    path = write_job(tmp_path, GAUSSIAN_JOB)
    _, out = run_cli(capsys, "--input", path, "--command", "kernels")
    first = Report.from_json(out)
    again = Report.from_json(first.to_json())
    assert first.to_json() == again.to_json()


def test_command_from_file_default(tmp_path, capsys):
    job = dict(GAUSSIAN_JOB)
    job["command"] = "factorize"
    path = write_job(tmp_path, job)
    code, out = run_cli(capsys, "--input", path)
    assert code == 0
    assert json.loads(out)["command"] == "factorize"


def test_log_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CHECKERBOARD_LOG", "debug")
    path = write_job(tmp_path, IDENTITY_JOB)
    code, _ = run_cli(capsys, "--input", path, "--command", "factorize")
    assert code == 0
