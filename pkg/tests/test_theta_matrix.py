# tests/test_theta_matrix.py
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.theta_matrix import (
    ThetaMatrix,
    ThetaVector,
    commutator,
    conjugate,
    eps,
    index_at,
    position,
    product,
    theta,
    theta_hb,
)
from src.utils.errors import InvalidIndexError, MatrixShapeError, NotInvertibleError


@pytest.mark.unit
class TestIndexOrder:
    def test_basis_order(self):
        """Theta for n=3 runs 1, 2, 3, 0, -3, -2, -1."""
        assert theta(3) == [1, 2, 3, 0, -3, -2, -1]
        assert theta_hb(3) == [1, 2, 3, -3, -2, -1]

    def test_positions(self):
        """position and index_at are mutually inverse."""
        assert position(1, 3) == 0
        assert position(0, 3) == 3
        assert position(-1, 3) == 6
        assert [index_at(p, 3) for p in range(7)] == theta(3)

    def test_out_of_range(self):
        """Indices beyond n are rejected."""
        with pytest.raises(InvalidIndexError):
            position(4, 3)

    def test_eps(self):
        """eps is the sign and is undefined at 0."""
        assert eps(2) == 1
        assert eps(-3) == -1
        with pytest.raises(InvalidIndexError):
            eps(0)


@pytest.mark.unit
class TestThetaMatrix:
    def test_shape_checked(self, z5):
        """A 5x5 array is not a matrix for n=3."""
        with pytest.raises(MatrixShapeError):
            ThetaMatrix(z5, 3, np.zeros((1, 5, 5), dtype=np.int64))

    def test_entries_addressed_by_index(self, z5):
        """from_entries writes at Theta addresses on top of e."""
        m = ThetaMatrix.from_entries(z5, 3, {(1, -2): z5(3)})
        assert m[1, -2] == z5(3)
        assert m[-2, -2] == z5.one
        assert m[-2, 1] == z5.zero

    def test_matrix_times_vector(self, z5):
        """e^{12}-shear moves e_2 to e_2 + x e_1."""
        m = ThetaMatrix.from_entries(z5, 3, {(1, 2): z5(4)})
        v = m @ ThetaVector.unit(z5, 3, 2)
        assert v[1] == z5(4)
        assert v[2] == z5.one
        assert v[0] == z5.zero

    def test_inverse_of_random_product(self, ortho5, rng):
        """sigma sigma^-1 = e for a random word."""
        _, sigma = ortho5.random_element(rng, 15)
        assert (sigma @ sigma.inverse()).is_identity()
        assert (sigma.inverse() @ sigma).is_identity()

    def test_singular_matrix(self, z5):
        """The matrix unit e^{11} has no inverse."""
        m = ThetaMatrix.basis(z5, 3, 1, 1)
        assert m.inverse_or_none() is None
        with pytest.raises(NotInvertibleError):
            m.inverse()

    def test_det_over_quadratic_extension(self, gauss3):
        """det((1+t) e) = (1+t)^7 = 2+t."""
        m = ThetaMatrix.identity(gauss3, 3).scale(gauss3((1, 1)))
        assert m.det() == gauss3((2, 1))

    def test_non_unit_determinant(self, z8):
        """2e over Z/8 is singular."""
        m = ThetaMatrix.identity(z8, 3).scale(z8(2))
        assert m.inverse_or_none() is None

    def test_commutator_of_shears(self, ortho5):
        """[T_12(x), T_23(y)] = T_13(xy)."""
        a = ortho5.t_short(1, 2, 2)
        b = ortho5.t_short(2, 3, 4)
        assert commutator(a, b) == ortho5.t_short(1, 3, 8)

    @pytest.mark.parametrize("group_name", ["ortho5", "ortho8", "unitary_gauss"])
    def test_conjugated_commutator_identity(self, group_name, request):
        """^{b^-1}[a, bc] = [b^-1, a][a, c] on 100 random triples."""
        group = request.getfixturevalue(group_name)
        rng = np.random.default_rng(11)
        for t in range(100):
            a, b, c = (group.random_element(rng, 4)[1] for _ in range(3))
            b_inv = b.inverse()
            lhs = conjugate(b_inv, commutator(a, b @ c))
            assert lhs == commutator(b_inv, a) @ commutator(a, c), (group_name, t)

    def test_conjugate_and_product(self, ortho5, rng):
        """h g h^-1 composes as a product of three matrices."""
        _, h = ortho5.random_element(rng, 6)
        g = ortho5.t_extra(2, 3)
        assert conjugate(h, g) == product([h, g, h.inverse()], ortho5.ring, 3)

    def test_mixed_rings_rejected(self, z5, z8):
        """Products across rings raise."""
        with pytest.raises(MatrixShapeError):
            ThetaMatrix.identity(z5, 3) @ ThetaMatrix.identity(z8, 3)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_det_is_multiplicative(self, ortho8, seed):
        """det(ab) = det(a) det(b)."""
        rng = np.random.default_rng(seed)
        _, a = ortho8.random_element(rng, 5)
        b = ThetaMatrix.from_entries(ortho8.ring, 3, {(0, 0): ortho8.ring(2), (1, -1): ortho8.ring(1)})
        assert (a @ b).det() == a.det() * b.det()
