# tests/test_cli.py
import json
import os
import subprocess
import sys

import pytest

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
GOLDEN_DIR = os.path.join(ROOT, "tests", "golden")


def run_main(*args):
    env = dict(os.environ, LOG_LEVEL="WARNING")
    return subprocess.run(
        [sys.executable, "main.py", *args],
        capture_output=True,
        text=True,
        cwd=ROOT,
        env=env,
    )


@pytest.mark.integration
class TestRandomCommand:
    def test_seeded_output_is_deterministic(self):
        """Two runs with --seed 42 print the same element."""
        args = ("random", "--group", "ortho", "--ring", "zmod:5", "--seed", "42")
        first, second = run_main(*args), run_main(*args)
        assert first.returncode == 0, first.stderr
        assert first.stdout == second.stdout
        obj = json.loads(first.stdout)
        assert obj["group"] == "ortho"
        assert len(obj["sigma"]) == 7

    def test_empty_word_is_identity(self):
        """--len 0 gives e."""
        result = run_main("random", "--group", "ortho", "--ring", "zmod:5", "--len", "0")
        assert result.returncode == 0, result.stderr
        sigma = json.loads(result.stdout)["sigma"]
        assert sigma == [[[1 if r == c else 0] for c in range(7)] for r in range(7)]

    def test_bad_ring(self):
        """An unknown ring description is invalid input."""
        result = run_main("random", "--ring", "poly:5")
        assert result.returncode == 2


@pytest.mark.integration
class TestDecomposeAndVerify:
    def test_decompose_then_verify(self, tmp_path):
        """A written certificate verifies from the file."""
        out = tmp_path / "cert.json"
        result = run_main(
            "decompose", "--group", "ortho", "--ring", "zmod:5", "--seed", "42",
            "--kind", "i", "--i", "1", "--j", "2", "--k", "1", "--l", "3", "--out", str(out),
        )
        assert result.returncode == 0, result.stderr
        checked = run_main("verify", str(out))
        assert checked.returncode == 0, checked.stderr
        report = json.loads(checked.stdout)
        assert report["ok"] is True
        assert report["canonical"] is True

    def test_unitary_kind_viii_needs_a(self):
        """Missing --a is invalid input."""
        result = run_main(
            "decompose", "--group", "unitary", "--ring", "zmod:3", "--delta", "max",
            "--kind", "viii", "--j", "2", "--k", "-1",
        )
        assert result.returncode == 2

    def test_missing_index(self):
        """Kind i without --l is invalid input."""
        result = run_main("decompose", "--group", "ortho", "--kind", "i", "--i", "1", "--j", "2", "--k", "1")
        assert result.returncode == 2

    def test_truncated_file(self, tmp_path):
        """A file that is not JSON exits with 2."""
        path = tmp_path / "broken.json"
        path.write_text('{"group": "ortho", "n": ', encoding="utf-8")
        assert run_main("verify", str(path)).returncode == 2

    def test_verify_without_path(self):
        """verify needs a file."""
        assert run_main("verify").returncode == 2

    def test_tampered_golden(self, tmp_path):
        """Flipping the exponent of the only factor fails verification."""
        with open(os.path.join(GOLDEN_DIR, "ortho_zmod5_short_i.json"), encoding="utf-8") as fh:
            obj = json.load(fh)
        obj["factors"][0]["exp"] = -1
        path = tmp_path / "tampered.json"
        path.write_text(json.dumps(obj), encoding="utf-8")
        result = run_main("verify", str(path))
        assert result.returncode == 1
        assert json.loads(result.stdout)["ok"] is False

    def test_unknown_command(self):
        """argparse rejections map to 2."""
        assert run_main("factor").returncode == 2


@pytest.mark.integration
class TestLevelCommand:
    def test_orthogonal_level(self, tmp_path):
        """level prints the pair (I, J) of a saved element."""
        path = tmp_path / "sigma.json"
        made = run_main("random", "--group", "ortho", "--ring", "zmod:8", "--seed", "3", "--len", "6", "--out", str(path))
        assert made.returncode == 0, made.stderr
        result = run_main("level", "--sigma", str(path))
        assert result.returncode == 0, result.stderr
        assert set(json.loads(result.stdout)) == {"I", "J"}

    def test_unitary_level(self):
        """The unitary level carries the derived sets."""
        result = run_main("level", "--group", "unitary", "--ring", "zmod:3", "--delta", "max", "--seed", "1", "--len", "5")
        assert result.returncode == 0, result.stderr
        obj = json.loads(result.stdout)
        assert obj["omega"] == "max"
        assert "J_delta" in obj["derived"]


@pytest.mark.slow
class TestSelftestCommand:
    def test_small_battery(self):
        """A single small configuration passes."""
        result = run_main("selftest", "--group", "ortho", "--ring", "zmod:2", "--trials", "1", "--len", "4")
        assert result.returncode == 0, result.stderr
        assert json.loads(result.stdout)["passed"] is True
