"""CLI surface: formats, exit codes, and report determinism."""

import os
import subprocess
import sys

import pytest

from braidcong.cli import main


@pytest.fixture
def run(capsys):
    def inner(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return inner


class TestBurauMatrix:
    def test_generator_image(self, run):
        code, out, _ = run("burau", "matrix", "--n", "3", "--word", "3: 1")
        assert code == 0
        assert out == "3 0\n2 1 0\n-1 0 0\n0 0 1\n"

    def test_mod_output(self, run):
        code, out, _ = run("burau", "matrix", "--word", "3: 1", "--mod", "2")
        assert code == 0
        assert out.splitlines()[0] == "3 2"

    def test_laurent_output(self, run):
        code, out, _ = run("burau", "matrix", "--word", "2: 1", "--laurent")
        assert code == 0
        assert out.splitlines()[0] == "2 laurent"
        assert "1 - t" in out

    def test_malformed_word(self, run):
        code, _, err = run("burau", "matrix", "--word", "3: 7")
        assert code == 2 and "error" in err


class TestChecks:
    def test_thm41_exit_zero(self, run):
        code, out, _ = run("finquot", "check-thm41", "--n", "3", "--m", "2")
        assert code == 0
        assert "status: PASS" in out
        assert "closure-order: 8" in out

    def test_lemma42(self, run):
        code, out, _ = run("finquot", "check-lemma42", "--n", "3", "--r", "1")
        assert code == 0 and "status: PASS" in out

    def test_mennicke(self, run):
        code, out, _ = run("finquot", "check-mennicke", "--g", "1", "--m", "2")
        assert code == 0 and "status: PASS" in out

    def test_corollary(self, run):
        code, out, _ = run("finquot", "check-corollary", "--n", "3", "--m", "2")
        assert code == 0 and "extra0-integral-identity: True" in out

    def test_enum_and_filter(self, run):
        code, out, _ = run("finquot", "enum", "--n", "3", "--mod", "5")
        assert code == 0 and "order: 120" in out
        code, out, _ = run(
            "finquot", "filter", "--n", "3", "--mod", "4", "--m", "2"
        )
        assert code == 0 and "filter-order: 8" in out

    def test_closure(self, run):
        code, out, _ = run(
            "finquot", "closure", "--n", "3", "--mod", "4", "--word", "3: 1 1"
        )
        assert code == 0 and "closure-order: 8" in out


class TestCosets:
    def test_vondyck(self, run):
        code, out, _ = run("cosets", "order", "--preset", "vondyck", "--m", "5")
        assert code == 0 and "order: 60" in out

    def test_braid_preset(self, run):
        code, out, _ = run(
            "cosets", "order", "--preset", "braid", "--n", "3", "--m", "4"
        )
        assert code == 0 and "order: 96" in out

    def test_budget_exit_two(self, run):
        code, _, err = run(
            "cosets", "order", "--preset", "braid", "--n", "3", "--m", "6",
            "--cap", "3000",
        )
        assert code == 2 and "budget exceeded" in err

    def test_file_preset(self, run, tmp_path):
        path = tmp_path / "pres.txt"
        path.write_text("1 1 1\n2 2\n1 2 1 2 1 2\n")
        code, out, _ = run(
            "cosets", "order", "--preset", "file", "--gens", "2", "--path", str(path)
        )
        assert code == 0 and "order: 12" in out

    def test_ratio(self, run):
        code, out, _ = run("cosets", "ratio", "--n", "3", "--m", "4")
        assert code == 0 and "ratio: 2" in out


class TestFactorizeVerify:
    def test_roundtrip(self, run, tmp_path):
        cert = tmp_path / "cert.txt"
        code, out, _ = run(
            "factorize", "--n", "4", "--m", "2", "--x", "1,0,3",
            "--out", str(cert),
        )
        assert code == 0 and cert.exists()
        code, out, _ = run("verify", "--cert", str(cert))
        assert code == 0 and "status: PASS" in out

    def test_base_case_single_factor(self, run, tmp_path):
        cert = tmp_path / "cert.txt"
        code, _, _ = run(
            "factorize", "--n", "2", "--m", "1", "--x", "1", "--out", str(cert)
        )
        assert code == 0
        code, out, _ = run("verify", "--cert", str(cert))
        assert code == 0

    def test_tampered_certificate_fails(self, run, tmp_path):
        cert = tmp_path / "cert.txt"
        run("factorize", "--n", "4", "--m", "2", "--x", "1,0,3", "--out", str(cert))
        lines = cert.read_text().splitlines()
        exp, _, word = lines[1].partition(":")
        lines[1] = f"{int(exp) + 1} :{word}"
        cert.write_text("\n".join(lines) + "\n")
        code, out, _ = run("verify", "--cert", str(cert))
        assert code == 1 and "status: FAIL" in out

    def test_stdout_when_no_out(self, run):
        code, out, _ = run("factorize", "--n", "2", "--m", "2", "--x", "3")
        assert code == 0 and out.startswith("2 2 3\n")


class TestSpcong:
    def test_kernel_factorize_file(self, run, tmp_path):
        from braidcong.exactmat import format_matrix
        from braidcong.stabilizer import StabilizerContext, stabilizer_kernel_element

        ctx = StabilizerContext.standard(2, 2)
        s = stabilizer_kernel_element(ctx, (1, 0, 2, -1))
        path = tmp_path / "mat.txt"
        path.write_text(format_matrix(s))
        code, out, _ = run(
            "spcong", "kernel-factorize", "--g", "2", "--m", "2",
            "--matrix", str(path),
        )
        assert code == 0
        assert out.splitlines()[0] == "4 2"
        assert len(out.splitlines()) >= 2


class TestSuite:
    def test_subset_and_determinism(self, run):
        args = ("suite", "--only", "burau-relations,generator-transvections",
                "--no-times")
        code1, out1, _ = run(*args)
        code2, out2, _ = run(*args)
        assert code1 == code2 == 0
        assert out1 == out2
        assert "overall: PASS" in out1

    def test_mutated_suite_fails_via_env(self):
        env = dict(os.environ, BRAIDCONG_MUTATE="burau_block")
        proc = subprocess.run(
            [sys.executable, "-m", "braidcong.cli", "suite",
             "--only", "burau-relations"],
            capture_output=True, text=True, env=env,
        )
        assert proc.returncode == 1
        assert "FAIL" in proc.stdout


class TestReportDeterminism:
    def test_no_times_hides_timing_details(self, run):
        code, out, _ = run("suite", "--only", "power-certificates", "--no-times")
        assert code == 0
        assert "mean-search-ms" not in out
        code, out2, _ = run("suite", "--only", "power-certificates")
        assert "mean-search-ms" in out2
