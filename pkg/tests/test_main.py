import json

import pytest

from main import PolyCF, VerificationPipeline, create_argument_parser, main


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


class TestEval:
    def test_conjecture(self, capsys):
        assert main(["eval", "--preset", "conjecture-pi4", "--digits", "10"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "-0.7853981634"
        assert lines[1].startswith("depth: ")

    def test_inline_spec(self, capsys):
        code, result = run_json(capsys, "eval", "--spec", "b0 = 1; a(n) = 1; b(n) = 2")
        assert code == 0
        assert result["value"] == "1.4142135624"

    def test_no_convergence_exit_code(self, capsys):
        assert main(["eval", "--preset", "oscillating", "--max-depth", "50"]) == 2

    def test_bad_spec_exit_code(self, capsys):
        assert main(["eval", "--spec", "b0 = 0; a(n) = 1 +; b(n) = 1"]) == 1

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 1


class TestTable:
    def test_first_row(self, capsys):
        code, result = run_json(capsys, "table", "--rows", "1", "3")
        assert code == 0
        first, third = result["rows"]
        assert first["value"] == "-1.0000000000"
        assert first["abs_error"] == "2.15e-1"
        assert first["digits"] == 0
        assert third["abs_error"] == "2.48e-3"

    def test_published_rows_are_flagged(self, capsys):
        code, result = run_json(capsys, "table")
        assert code == 0
        assert [row["n"] for row in result["rows"]] == [5, 10, 15]
        assert result["rows"][0]["flag"] == "differs"
        assert result["rows"][0]["published_error"] == "9.56e-5"
        assert result["flags"]

    def test_published_rows_follow_the_terms_not_the_name(self, capsys):
        spec = ("b0 = 0; a(n) = { 1 for n in 1..1; 1 for n in 2..2; -2*n^2 + 7*n - 5 for n >= 3 }; "
                "b(n) = 2 - 3*n")
        code, result = run_json(capsys, "table", "--spec", spec, "--reference", "minus_pi_over_4")
        assert code == 0
        assert result["rows"][0]["published_error"] == "9.56e-5"

    def test_other_fractions_have_no_published_column(self, capsys):
        code, result = run_json(capsys, "table", "--preset", "sqrt2", "--rows", "2")
        assert "published_error" not in result["rows"][0]

    def test_bracket(self, capsys):
        code, result = run_json(capsys, "table", "--rows", "5", "--bracket")
        assert [row["n"] for row in result["rows"]] == [4, 5, 6]

    def test_empty_rows(self, capsys):
        code, result = run_json(capsys, "table", "--rows")
        assert code == 0
        assert result["rows"] == []

    def test_reference_required_for_specs(self, capsys):
        assert main(["table", "--spec", "b0 = 0; a(n) = 1; b(n) = 3"]) == 1

    def test_csv(self, capsys):
        assert main(["table", "--preset", "sqrt2", "--rows", "1", "2", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.split("\r\n")
        assert lines[0] == "n,value,abs_error,digits"
        assert lines[1].startswith("1,1.5000000000,")


class TestGauss:
    def test_kernel(self, capsys):
        code, result = run_json(capsys, "gauss", "1/2", "0", "1/2", "-1", "--depth", "30")
        assert code == 0
        assert [row["d"] for row in result["d"][:3]] == ["1/3", "4/15", "9/35"]
        assert result["stabilized"] is False
        assert "--convention classical" in result["flags"][0]

    def test_kernel_text_points_to_the_classical_convention(self, capsys):
        assert main(["gauss", "1/2", "0", "1/2", "-1", "--depth", "30"]) == 0
        out = capsys.readouterr().out
        assert "no stabilization" in out
        assert "FLAG:" in out and "--convention classical" in out

    def test_classical_kernel(self, capsys):
        code, result = run_json(capsys, "gauss", "1/2", "0", "1/2", "-1",
                                "--convention", "classical", "--digits", "8")
        assert code == 0
        assert result["stabilized"] is True
        assert result["value"] == "0.78539816"
        assert result["flags"] == []

    @pytest.mark.parametrize("args", [
        ["1/2", "0", "1/2", "0"],
        ["1", "1", "-1", "1/2"],
        ["x", "1", "1", "1/2"],
    ])
    def test_invalid_parameters(self, capsys, args):
        assert main(["gauss", *args]) == 1


class TestTransform:
    def test_kernel(self, capsys):
        code, result = run_json(capsys, "transform", "--preset", "gauss-kernel")
        assert code == 0
        assert result["all_equal"] is True
        head = {row["n"]: row for row in result["head"]}
        assert head[2]["a"] == "-4/3"
        assert head[3]["a"] == "-112/15"
        assert head[3]["b"] == "-7"
        assert len(result["invariance"]) == 30

    def test_identity(self, capsys):
        code, result = run_json(capsys, "transform", "--preset", "sqrt2",
                                "--scaling-preset", "identity", "-N", "5")
        assert result["transformed"] == result["source"]

    def test_invalid_scaling(self, capsys):
        code = main(["transform", "--scaling", "r(n) = { 1 for n in 0..0; n - 3 for n >= 1 }"])
        assert code == 1

    def test_text_output(self, capsys):
        assert main(["transform", "--preset", "gauss-kernel", "-N", "3"]) == 0
        out = capsys.readouterr().out
        assert "n = 1: EQUAL (pairs differ)" in out
        assert "all convergent values equal" in out


class TestAnalyze:
    def test_conjecture(self, capsys):
        code, result = run_json(capsys, "analyze")
        assert code == 0
        assert result["L"] == "-2/9"
        assert result["classification"] == "interior"
        assert result["sigma"] == "1/2"
        assert result["digits_per_10"] == "3.0103"
        assert result["rho_expansion"]["coefficients"] == ["-2/9", "7/27", "8/27"]
        assert result["rho_samples"][0] == {"n": 2, "rho": "1/4"}
        assert len(result["empirical"]["n"]) == 50

    def test_boundary(self, capsys):
        code, result = run_json(capsys, "analyze", "--preset", "exact-transformed", "-N", "20")
        assert result["classification"] == "boundary"
        assert result["digits_per_10"] is None
        assert any("inconclusive" in flag for flag in result["flags"])

    def test_text_output(self, capsys):
        assert main(["analyze", "--preset", "sqrt2", "-N", "10"]) == 0
        out = capsys.readouterr().out
        assert "classification: boundary" in out
        assert "FLAG:" in out


class TestOutput:
    def test_output_file_mirrors_stdout(self, capsys, tmp_path):
        path = tmp_path / "presets.md"
        assert main(["presets", "--format", "markdown", "--output", str(path)]) == 0
        out = capsys.readouterr().out
        assert path.read_text(encoding="utf-8") == out
        assert "conjecture-pi4" in out

    def test_presets_text(self, capsys):
        assert main(["presets"]) == 0
        out = capsys.readouterr().out
        assert "linear-scaling (scaling)" in out


class TestVerify:
    def test_pipeline(self):
        checks = {c["name"]: c for c in VerificationPipeline().run()}
        assert not [name for name, c in checks.items() if c["status"] == "FAIL"]
        assert checks["asymptotic expansions"]["status"] == "FLAG"
        assert checks["published error table"]["status"] == "FLAG"
        assert checks["boundary kernels"]["status"] == "FLAG"
        assert checks["equivalence invariance"]["status"] == "PASS"
        assert checks["Worpitzky parameters"]["status"] == "PASS"

    def test_command(self, capsys):
        code, result = run_json(capsys, "verify")
        assert code == 0
        assert result["failed"] == 0
        assert result["passed"] + result["flagged"] == len(result["checks"])


def test_parser_defaults():
    args = create_argument_parser().parse_args(["table"])
    assert args.rows == [5, 10, 15]
    assert args.format == "text"
    assert PolyCF().digits == 10


@pytest.mark.parametrize("argv", [
    ["table", "--rows", "1", "5", "9"],
    ["analyze", "--format", "json"],
    ["gauss", "1", "1", "2", "1/2", "--convention", "classical", "--digits", "12"],
])
def test_repeated_runs_print_identical_output(capsys, argv):
    outputs = []
    for _ in range(2):
        assert main(argv) == 0
        outputs.append(capsys.readouterr().out.encode("utf-8"))
    assert outputs[0] == outputs[1]
