# tests/test_certificates.py
import copy
import os

import pytest

from src.algebra.theta_matrix import conjugate
from src.certificates.certificate import (
    Cert,
    certificate_count,
    check_kind_indices,
    check_param,
    column_bound,
    comm_left,
    comm_right,
    concat,
    expected_target,
    kind_bound,
)
from src.certificates.codec import certificate_from_json, load_json
from src.certificates.verifier import factors_product, verify_certificate
from src.groups.generators import ElemGen
from src.groups.ortho_group import OrthoGroup
from src.utils.errors import FormParameterError, InvalidIndexError, MalformedCertificateError

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


def golden(name: str) -> dict:
    return load_json(os.path.join(GOLDEN_DIR, name))


@pytest.mark.unit
class TestBounds:
    def test_orthogonal_bounds(self):
        """Fixed bounds and the n-dependent ones at n = 3."""
        assert [kind_bound("ortho", k, 3) for k in ("i", "ii", "iii", "iv", "v", "vi")] == [8, 16, 24, 24, 24, 48]
        assert kind_bound("ortho", "vii", 3) == 340
        assert kind_bound("ortho", "viii", 3) == 1140

    def test_unitary_bounds(self):
        """Unitary bounds at n = 3."""
        assert [kind_bound("unitary", k, 3) for k in ("i", "ii", "iii", "iv", "v", "vi")] == [160, 320, 480, 480, 480, 960]
        assert kind_bound("unitary", "vii", 3) == 10564
        assert kind_bound("unitary", "viii", 3) == 31212
        assert column_bound(3) == 9604

    def test_rank_four_bounds(self):
        """The n-dependent bounds grow linearly: values at n = 4."""
        assert [kind_bound("ortho", k, 4) for k in ("i", "ii", "iii", "iv", "v", "vi")] == [8, 16, 24, 24, 24, 48]
        assert kind_bound("ortho", "vii", 4) == 404
        assert kind_bound("ortho", "viii", 4) == 1332
        assert kind_bound("unitary", "vii", 4) == 12164
        assert kind_bound("unitary", "viii", 4) == 36012
        assert column_bound(4) == 11204

    def test_unknown_kind(self):
        """Kind names outside i..viii raise."""
        with pytest.raises(InvalidIndexError):
            kind_bound("ortho", "ix", 3)


@pytest.mark.unit
class TestCertAlgebra:
    def test_of_sigma(self, ortho5, rng):
        """A single factor whose value is sigma."""
        _, sigma = ortho5.random_element(rng, 8)
        cert = Cert.of_sigma(ortho5, sigma)
        assert len(cert) == 1
        assert cert.value == sigma
        assert (cert.value @ cert.inv).is_identity()

    def test_comm_left_doubles_count(self, ortho5, rng):
        """[W, C] has twice the factors of C and the commutator as value."""
        _, sigma = ortho5.random_element(rng, 8)
        word = (ortho5.short(1, 2, 1), ortho5.extra(-3, 2))
        cert = comm_left(word, Cert.of_sigma(ortho5, sigma))
        w = ortho5.word_matrix(word)
        assert len(cert) == 2
        assert cert.value == conjugate(w, sigma) @ sigma.inverse()
        assert factors_product(ortho5, sigma, sigma.inverse(), cert.factors) == cert.value

    def test_comm_right(self, ortho5, rng):
        """[C, W] = C W C^-1 W^-1."""
        _, sigma = ortho5.random_element(rng, 8)
        word = (ortho5.short(2, -1, 3),)
        cert = comm_right(Cert.of_sigma(ortho5, sigma), word)
        w = ortho5.word_matrix(word)
        assert len(cert) == 2
        assert cert.value == sigma @ w @ sigma.inverse() @ w.inverse()

    def test_inverse_and_concat(self, ortho5, rng):
        """C C^-1 multiplies to e and keeps both factor lists."""
        _, sigma = ortho5.random_element(rng, 8)
        cert = comm_left((ortho5.short(1, 3, 4),), Cert.of_sigma(ortho5, sigma))
        joined = concat(ortho5, [cert, cert.inverse()])
        assert len(joined) == 4
        assert joined.value.is_identity()
        assert (cert + Cert.empty(ortho5)).value == cert.value


@pytest.mark.unit
class TestRequests:
    def test_kind_i_needs_distinct_pairs(self, ortho5):
        """i = -j is not a short root position."""
        with pytest.raises(InvalidIndexError):
            check_kind_indices(ortho5, "i", {"i": 1, "j": -1, "k": 1, "l": 2})

    def test_missing_index(self, ortho5):
        """Kind vii takes j and k."""
        with pytest.raises(InvalidIndexError):
            check_kind_indices(ortho5, "vii", {"j": 1})

    def test_small_rank_rejected(self, z5):
        """Decompositions need n >= 3."""
        with pytest.raises(InvalidIndexError):
            check_kind_indices(OrthoGroup(z5, 2), "ii", {"i": 1, "k": 1, "l": 2})

    def test_parameter_rules(self, ortho5, unitary3, z3, z5):
        """a is required for unitary iii and forbidden for orthogonal kinds."""
        check_param(unitary3, "iii", z3(1))
        check_param(ortho5, "iii", None)
        with pytest.raises(FormParameterError):
            check_param(unitary3, "iii", None)
        with pytest.raises(FormParameterError):
            check_param(ortho5, "iii", z5(1))

    def test_identity_targets(self, ortho5, z5):
        """Every kind read off e is the trivial generator."""
        e = ortho5.identity()
        assert expected_target(ortho5, e, "i", {"i": 1, "j": 2, "k": 2, "l": 3}) == ElemGen.short(2, 3, z5.zero)
        assert expected_target(ortho5, e, "viii", {"j": 2, "k": -1}) == ElemGen.extra(-1, z5.zero)


@pytest.mark.unit
class TestVerifier:
    def test_golden_short(self):
        """The hand-built T_12(3) certificate verifies."""
        cert = certificate_from_json(golden("ortho_zmod5_short_i.json"))
        report = verify_certificate(cert)
        assert report.ok
        assert report.count == certificate_count(cert) == 1
        assert all(report.checks.values())

    def test_flipped_exponent(self):
        """sigma^-1 instead of sigma breaks the product."""
        obj = golden("ortho_zmod5_short_i.json")
        obj["factors"][0]["exp"] = -1
        report = verify_certificate(certificate_from_json(obj))
        assert not report.ok
        assert report.checks["product_equals_target"] is False

    def test_wrong_bound(self):
        """A bound other than the formula is reported."""
        obj = golden("ortho_zmod5_short_i.json")
        obj["bound"] = 9
        report = verify_certificate(certificate_from_json(obj))
        assert not report.ok
        assert report.checks["bound_formula"] is False

    def test_wrong_target(self):
        """A target that disagrees with sigma's entries fails the semantics check."""
        obj = golden("ortho_zmod5_short_i.json")
        obj["target"]["x"] = [4]
        report = verify_certificate(certificate_from_json(obj))
        assert report.checks["target_semantics"] is False
        assert report.checks["product_equals_target"] is False

    def test_non_member_sigma(self):
        """sigma outside the group stops verification early."""
        obj = golden("ortho_zmod5_short_i.json")
        obj["sigma"][5][6] = [0]
        report = verify_certificate(certificate_from_json(obj))
        assert not report.ok
        assert report.checks == {"sigma_member": False}

    def test_invalid_conjugator(self):
        """An extra short root outside Delta is a failed generator check."""
        obj = golden("unitary_zmod3_extra_vii.json")
        obj["factors"][0]["conj"] = [{"g": "E", "i": 1, "x": [1], "y": [0]}]
        report = verify_certificate(certificate_from_json(obj))
        assert report.checks["generators_valid"] is False

    def test_schema_errors(self):
        """Missing fields and bad exponents are malformed."""
        obj = golden("ortho_zmod5_short_i.json")
        broken = copy.deepcopy(obj)
        del broken["factors"]
        with pytest.raises(MalformedCertificateError):
            certificate_from_json(broken)
        broken = copy.deepcopy(obj)
        broken["factors"][0]["exp"] = 2
        with pytest.raises(MalformedCertificateError):
            certificate_from_json(broken)
        with pytest.raises(MalformedCertificateError):
            certificate_from_json([])
