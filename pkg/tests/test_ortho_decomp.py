# tests/test_ortho_decomp.py
import numpy as np
import pytest

from src.algebra.theta_matrix import ThetaMatrix, conjugate
from src.certificates.certificate import KINDS, kind_bound
from src.certificates.verifier import verify_certificate
from src.cli.selftest import valid_indices
from src.decomposers.ortho_decomp import decompose_ortho, relocate
from src.groups.generators import ElemGen
from src.groups.ortho_group import OrthoGroup
from src.utils.errors import InvalidIndexError, NotInGroupError

SLOW_KINDS = ("vii", "viii")
KIND_PARAMS = [pytest.param(k, marks=pytest.mark.slow) if k in SLOW_KINDS else k for k in KINDS]


def seeded_sigma(group, seed: int = 42, length: int = 12):
    _, sigma = group.random_element(np.random.default_rng(seed), length)
    return sigma


@pytest.mark.integration
class TestOrthoKinds:
    @pytest.mark.parametrize("kind", KIND_PARAMS)
    def test_kind_verifies_within_bound(self, ortho5, kind):
        """A seeded sigma over Z/5 decomposes for every kind."""
        sigma = seeded_sigma(ortho5)
        rng = np.random.default_rng(7)
        choices = valid_indices(ortho5, kind)
        for _ in range(2):
            idx = choices[int(rng.integers(len(choices)))]
            cert = decompose_ortho(ortho5, sigma, kind, idx)
            report = verify_certificate(cert)
            assert report.ok, report.reason
            assert len(cert.factors) <= kind_bound("ortho", kind, 3)

    @pytest.mark.parametrize("kind", ["i", "ii", "v", "vi"])
    def test_over_z8(self, ortho8, kind):
        """Short root kinds also work over a ring with zero divisors and 2 not a unit."""
        sigma = seeded_sigma(ortho8, seed=3)
        idx = valid_indices(ortho8, kind)[5]
        assert verify_certificate(decompose_ortho(ortho8, sigma, kind, idx)).ok

    def test_shear_reproduces_itself(self, ortho5, z5):
        """For sigma = T_13(2) kind i at (1, 3) targets T_13(2) itself."""
        sigma = ortho5.t_short(1, 3, 2)
        cert = decompose_ortho(ortho5, sigma, "i", {"i": 1, "j": 3, "k": 1, "l": 3})
        assert cert.target == ElemGen.short(1, 3, z5(2))
        assert verify_certificate(cert).ok
        moved = decompose_ortho(ortho5, sigma, "i", {"i": 1, "j": 3, "k": 2, "l": -1})
        assert moved.target == ElemGen.short(2, -1, z5(2))
        assert verify_certificate(moved).ok

    def test_identity_gives_trivial_target(self, ortho5, z5):
        """Every entry difference of e is zero."""
        cert = decompose_ortho(ortho5, ortho5.identity(), "v", {"i": 1, "j": 2, "k": 3, "l": 1})
        assert cert.target == ElemGen.short(3, 1, z5.zero)
        assert verify_certificate(cert).ok

    def test_non_member_rejected(self, ortho5, z5):
        """e + e^{12} is not orthogonal."""
        sigma = ThetaMatrix.from_entries(z5, 3, {(1, 2): z5.one})
        with pytest.raises(NotInGroupError):
            decompose_ortho(ortho5, sigma, "i", {"i": 1, "j": 2, "k": 1, "l": 2})

    def test_unitary_group_rejected(self, unitary3):
        """The orthogonal decomposer only takes the orthogonal group."""
        with pytest.raises(InvalidIndexError):
            decompose_ortho(unitary3, unitary3.identity(), "i", {"i": 1, "j": 2, "k": 1, "l": 2})

    def test_bad_indices(self, ortho5):
        """k = -l is rejected before any work."""
        with pytest.raises(InvalidIndexError):
            decompose_ortho(ortho5, ortho5.identity(), "ii", {"i": 1, "k": 2, "l": -2})


@pytest.mark.slow
class TestRelocation:
    def test_all_short_positions(self, ortho5, z5):
        """^W T_src(x) = T_dst(x) for every pair of short root positions."""
        pairs = ortho5.short_pairs()
        x = z5(3)
        for src in pairs:
            t_src = ortho5.t_short(*src, x)
            for dst in pairs:
                word = relocate(ortho5, src, dst)
                assert conjugate(ortho5.word_matrix(word), t_src) == ortho5.t_short(*dst, x), (src, dst)


def sweep(group, kind, seeds, picks):
    rng = np.random.default_rng(101)
    choices = valid_indices(group, kind)
    counts = []
    for seed in seeds:
        sigma = seeded_sigma(group, seed=seed, length=10)
        for _ in range(picks):
            idx = choices[int(rng.integers(len(choices)))]
            cert = decompose_ortho(group, sigma, kind, idx)
            report = verify_certificate(cert)
            assert report.ok, (seed, idx, report.reason)
            counts.append(len(cert.factors))
    return counts


@pytest.mark.slow
class TestOrthoSweep:
    @pytest.mark.parametrize("kind", KINDS)
    @pytest.mark.parametrize("group_name", ["ortho5", "ortho8"])
    def test_rank_three(self, group_name, kind, request):
        """Every kind on eight seeded sigma and three index choices each."""
        group = request.getfixturevalue(group_name)
        counts = sweep(group, kind, range(8), 3)
        assert max(counts) <= kind_bound("ortho", kind, 3)

    @pytest.mark.parametrize("kind", KINDS)
    def test_rank_four(self, z5, kind):
        """O_9(Z/5): the n-dependent bounds hold for n = 4."""
        group = OrthoGroup(z5, 4)
        counts = sweep(group, kind, range(2), 2)
        assert max(counts) <= kind_bound("ortho", kind, 4)
