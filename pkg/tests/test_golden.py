# tests/test_golden.py
import json
import os

import pytest

from scripts.make_golden import build_golden_set
from src.certificates.codec import certificate_from_json, certificate_to_json, dumps_canonical, load_json
from src.certificates.verifier import verify_certificate
from src.cli.commands import EXIT_FAIL, EXIT_INPUT, EXIT_OK, cmd_verify

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")
GOLDEN_FILES = sorted(f for f in os.listdir(GOLDEN_DIR) if f.endswith(".json"))


@pytest.mark.unit
class TestGoldenFiles:
    @pytest.mark.parametrize("name", GOLDEN_FILES)
    def test_verifies(self, name, capsys):
        """Each stored certificate passes every check."""
        path = os.path.join(GOLDEN_DIR, name)
        report = verify_certificate(certificate_from_json(load_json(path)))
        assert report.ok, report.reason
        assert report.count <= report.bound
        assert cmd_verify(path) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["ok"] is True

    @pytest.mark.parametrize("name", GOLDEN_FILES)
    def test_canonical_text(self, name):
        """Re-serializing gives the stored bytes."""
        path = os.path.join(GOLDEN_DIR, name)
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        cert = certificate_from_json(json.loads(text))
        assert dumps_canonical(certificate_to_json(cert)) == text.rstrip("\n")

    def test_cmd_verify(self, capsys):
        """The verify command reports ok and canonical."""
        assert cmd_verify(os.path.join(GOLDEN_DIR, "unitary_zmod3_extra_vii.json")) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["ok"] is True
        assert out["canonical"] is True

    def test_cmd_verify_tampered(self, tmp_path, capsys):
        """A changed exponent exits with 1."""
        obj = load_json(os.path.join(GOLDEN_DIR, "ortho_zmod5_short_i.json"))
        obj["factors"][0]["exp"] = -1
        path = tmp_path / "tampered.json"
        path.write_text(dumps_canonical(obj) + "\n", encoding="utf-8")
        assert cmd_verify(str(path)) == EXIT_FAIL
        out = json.loads(capsys.readouterr().out)
        assert out["checks"]["product_equals_target"] is False
        assert out["canonical"] is True


@pytest.mark.slow
class TestGoldenBuilder:
    def test_rebuild_is_deterministic(self):
        """Two builds with one seed give byte-identical files."""
        kinds = ("i", "ii", "iii", "iv", "v", "vi")
        first = build_golden_set(7, only="ortho", kinds=kinds)
        second = build_golden_set(7, only="ortho", kinds=kinds)
        assert first == second
        assert sorted(first) == sorted(f"ortho_{r}_seeded_{k}.json" for r in ("zmod5", "zmod8") for k in kinds)
        for text in first.values():
            assert verify_certificate(certificate_from_json(json.loads(text))).ok


def swap_conjugator(obj):
    obj["factors"][0]["conj"][1] = {"g": "S", "i": 2, "j": 3, "x": [2]}


def shift_target(obj):
    obj["target"]["x"] = [4]


def raise_bound(obj):
    obj["bound"] = 9


def replace_sigma(obj):
    # T_12(2) instead of T_12(3): still orthogonal, but the target no longer matches
    obj["sigma"][0][1] = [2]
    obj["sigma"][5][6] = [3]


def write_tampered(tmp_path, name, mutate):
    obj = load_json(os.path.join(GOLDEN_DIR, name))
    mutate(obj)
    path = tmp_path / name
    path.write_text(dumps_canonical(obj) + "\n", encoding="utf-8")
    return str(path)


@pytest.mark.unit
class TestTamperedCertificates:
    def test_conjugated_file_walks_shared_prefixes(self):
        """Factors with conjugator words sharing T_12(1) multiply out to the target."""
        cert = certificate_from_json(load_json(os.path.join(GOLDEN_DIR, "ortho_zmod5_short_i_conjugated.json")))
        assert [len(f.conj) for f in cert.factors] == [2, 2, 1]
        report = verify_certificate(cert)
        assert report.ok, report.reason
        assert report.count == 3

    @pytest.mark.parametrize(
        "mutate, check",
        [
            (swap_conjugator, "product_equals_target"),
            (shift_target, "target_semantics"),
            (raise_bound, "bound_formula"),
            (replace_sigma, "target_semantics"),
        ],
    )
    def test_each_tamper_fails(self, tmp_path, capsys, mutate, check):
        """Every single-field change to a valid certificate exits with 1."""
        path = write_tampered(tmp_path, "ortho_zmod5_short_i_conjugated.json", mutate)
        assert cmd_verify(path) == EXIT_FAIL
        out = json.loads(capsys.readouterr().out)
        assert out["ok"] is False
        assert out["checks"][check] is False

    def test_unitary_conjugator_swap(self, tmp_path, capsys):
        """The same conjugator change breaks the unitary certificate."""
        path = write_tampered(tmp_path, "unitary_zmod3_short_i_conjugated.json", swap_conjugator)
        assert cmd_verify(path) == EXIT_FAIL
        assert json.loads(capsys.readouterr().out)["checks"]["product_equals_target"] is False

    def test_kind_mismatch_is_input_error(self, tmp_path):
        """Changing only the kind leaves indices the kind does not take: exit 2."""

        def to_kind_vi(obj):
            obj["kind"] = "vi"

        path = write_tampered(tmp_path, "ortho_zmod5_short_i.json", to_kind_vi)
        assert cmd_verify(path) == EXIT_INPUT

    def test_rank_mismatch_is_input_error(self, tmp_path):
        """n = 4 with a 7x7 sigma does not parse: exit 2."""

        def to_rank_four(obj):
            obj["n"] = 4

        path = write_tampered(tmp_path, "ortho_zmod5_short_i.json", to_rank_four)
        assert cmd_verify(path) == EXIT_INPUT


@pytest.mark.slow
class TestSeededGoldenSet:
    def test_every_kind_both_groups(self, tmp_path, capsys):
        """Seeded certificates for all kinds verify from disk and fail once the bound is changed."""
        texts = build_golden_set(7)
        assert len(texts) == 3 * 8
        conjugated = 0
        for name, text in sorted(texts.items()):
            path = tmp_path / name
            path.write_text(text, encoding="utf-8")
            assert cmd_verify(str(path)) == EXIT_OK, name
            out = json.loads(capsys.readouterr().out)
            assert out["canonical"] is True
            obj = json.loads(text)
            conjugated += sum(1 for f in obj["factors"] if f["conj"])
            obj["bound"] += 1
            path.write_text(dumps_canonical(obj) + "\n", encoding="utf-8")
            assert cmd_verify(str(path)) == EXIT_FAIL, name
            assert json.loads(capsys.readouterr().out)["checks"]["bound_formula"] is False
        assert conjugated > 0
