import json

import pytest

from main import EXIT_BOUND, EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main


@pytest.fixture(autouse=True)
def cache_env(settings, monkeypatch):
    # main() reloads settings from the environment
    monkeypatch.setenv("GREENFIELDS_CACHE_DIR", settings.cache_dir)


def test_dims(capsys):
    assert main(["dims", "const(2)", "C7"]) == EXIT_PASS
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "const(2)(C7): dimension 1"


def test_dims_as_json(capsys):
    assert main(["--format", "json", "dims", "burnside(Q)", "S3"]) == EXIT_PASS
    data = json.loads(capsys.readouterr().out)
    assert data["dimension"] == 4
    assert data["basis"] == ["[S3/1]", "[S3/H1_2]", "[S3/H2_3]", "[S3/S3]"]


@pytest.mark.parametrize(
    "argv",
    [
        ["dims", "foo(Q)", "C2"],
        ["dims", "burnside(Q)", "Z9"],
        ["act", "burnside(Q)", "S3", "Res[C2<S3]", "9"],
        ["check", "strict", "burnside(Q)", "--pairs", "C2"],
        ["check", "anisotropic", "const(2)", "C3"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err.splitlines()[-1].startswith("greenfields: ")


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as excinfo:
        main(["example3", "5"])
    assert excinfo.value.code == EXIT_USAGE


def test_invalid_environment(monkeypatch, capsys):
    monkeypatch.setenv("GREENFIELDS_BOUND", "0")
    assert main(["dims", "burnside(Q)", "C2"]) == EXIT_USAGE
    assert "invalid settings" in capsys.readouterr().err


def test_bound_exceeded(capsys):
    assert main(["--bound", "8", "dims", "burnside(Q)", "S4"]) == EXIT_BOUND
    assert "above the configured bound 8" in capsys.readouterr().err


def test_field_at_one_failure(capsys):
    assert main(["check", "field-at-one", "shift(burnside(Q),C2)"]) == EXIT_FAIL
    out = capsys.readouterr().out
    assert "verdict: FAIL" in out
    assert "idempotent element:" in out


def test_strict_pairs(capsys):
    code = main(["--format", "json", "check", "strict", "repC(Q)", "--pairs", "C2,C2", "C1,C3"])
    assert code == EXIT_PASS
    reports = json.loads(capsys.readouterr().out)
    assert [r["scope"] for r in reports] == [["C2,C2"], ["C1,C3"]]
    assert main(["check", "strict", "burnside(Q)", "--pairs", "C2,C2"]) == EXIT_FAIL


def test_essential(capsys):
    assert main(["check", "essential", "burnside(Q)", "C1"]) == EXIT_PASS
    assert capsys.readouterr().out.strip() == "essential algebra of burnside(Q) at C1: dimension 1"


def test_gram(capsys):
    assert main(["gram", "burnside(Q)", "C2"]) == EXIT_PASS
    out = capsys.readouterr().out.splitlines()
    assert out[1:3] == ["2 1", "1 1"]
    assert "rank: 2" in out
    assert "routes agree: yes" in out


def test_act(capsys):
    assert main(["act", "burnside(Q)", "S3", "Res[C2<S3]", "3"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "[S3/S3]" in out
    assert " -> " in out


def test_chartable(capsys):
    assert main(["chartable", "S3"]) == EXIT_PASS
    assert capsys.readouterr().out.splitlines() == ["chi0: 1 1 1", "chi1: 1 -1 1", "chi2: 2 0 -1"]


def test_marks_then_cache_clear(capsys):
    assert main(["marks", "C2"]) == EXIT_PASS
    capsys.readouterr()
    assert main(["cache", "clear"]) == EXIT_PASS
    assert capsys.readouterr().out.startswith("removed ")


def test_props(capsys):
    argv = ["--seed", "3", "props", "const(2)", "--suite", "trivial", "--suite", "commutative",
            "--samples", "2", "--groups", "C1", "C3"]
    assert main(argv) == EXIT_PASS
    assert "verdict: PASS" in capsys.readouterr().out


def test_config_file(tmp_path, capsys):
    config = tmp_path / "settings.env"
    config.write_text("output_format=json\n")
    assert main(["--config", str(config), "dims", "repC(Q)", "C3"]) == EXIT_PASS
    assert json.loads(capsys.readouterr().out)["dimension"] == 3
