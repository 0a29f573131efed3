# tests/test_ring_core.py
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.ring_core import parse_ring
from src.utils.errors import RingSpecError

GAUSS = parse_ring("quadext:3:2", "conj")
Z8 = parse_ring("zmod:8")

elements = st.sampled_from(GAUSS.elements)
z8_elements = st.sampled_from(Z8.elements)


@pytest.mark.unit
class TestRingValidation:
    def test_trivial_involution_is_valid(self):
        """Z/5 with lambda = mu = 1 validates."""
        ring = parse_ring("zmod:5", "id", 1, 1)
        assert ring.size == 5
        assert ring.lam == ring.one

    def test_lambda_not_self_inverse_rejected(self):
        """lambda = 2 over Z/5 fails conj(lambda) = lambda^-1."""
        with pytest.raises(RingSpecError):
            parse_ring("zmod:5", "id", 2, 1)

    def test_gaussian_ring_is_valid(self):
        """(Z/3)[t]/(t^2+1) with t -> -t has nine elements."""
        assert GAUSS.size == 9
        assert GAUSS.conj_on

    def test_bad_description_rejected(self):
        """Unknown carriers raise RingSpecError."""
        with pytest.raises(RingSpecError):
            parse_ring("poly:5")

    def test_conj_on_zmod_rejected(self):
        """Z/m carries only the trivial involution."""
        with pytest.raises(RingSpecError):
            parse_ring("zmod:5", "conj")


@pytest.mark.unit
class TestInvolution:
    def test_trivial_involution(self, z5):
        """The identity involution fixes 4 over Z/5."""
        assert z5(4).conj() == z5(4)

    def test_conjugation(self):
        """1+2t maps to 1+t."""
        assert GAUSS((1, 2)).conj() == GAUSS((1, 1))

    def test_underbar_inverts_involution(self):
        """underbar(conj(x)) = x for every element."""
        assert all(GAUSS.underbar(x.conj()) == x for x in GAUSS.elements)


@pytest.mark.unit
class TestUnits:
    def test_inverse_mod_five(self, z5):
        """2^-1 = 3 over Z/5."""
        assert GAUSS.unit_inverse(GAUSS(1)) == GAUSS.one
        assert z5.unit_inverse(z5(2)) == z5(3)

    def test_non_unit(self):
        """2 is not a unit of Z/8."""
        assert Z8.unit_inverse(Z8(2)) is None
        with pytest.raises(ArithmeticError):
            Z8.unit_inverse_strict(Z8(2))

    def test_quadratic_inverse(self):
        """(1+t) times its inverse is 1."""
        x = GAUSS((1, 1))
        assert x * GAUSS.unit_inverse(x) == GAUSS.one

    def test_lambda_powers(self, z5):
        """lambda^0 = 1 and lambda = 1 gives 1 at every power."""
        assert z5.lambda_power(0) == z5.one
        assert z5.lambda_power(-3) == z5.one

    def test_solve_and_combination(self):
        """solve finds y with y a = b, combination a coefficient tuple."""
        assert Z8.solve(Z8(2), Z8(6)) * Z8(2) == Z8(6)
        assert Z8.solve(Z8(2), Z8(3)) is None
        coeffs = Z8.combination([Z8(4), Z8(6)], Z8(2))
        assert coeffs is not None
        assert coeffs[0] * Z8(4) + coeffs[1] * Z8(6) == Z8(2)

    def test_combination_search_order(self):
        """The first tuple in canonical order wins; an unreachable target gives None."""
        assert Z8.combination([Z8(2), Z8(4)], Z8(6)) == (Z8(1), Z8(1))
        assert Z8.combination([Z8(2), Z8(4)], Z8(3)) is None
        assert Z8.combination([], Z8(0)) == ()


@pytest.mark.unit
class TestRingLaws:
    @settings(max_examples=100, deadline=None)
    @given(elements, elements, elements)
    def test_commutative_ring_axioms(self, x, y, z):
        """Associativity, commutativity and distributivity."""
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
        assert x * (y + z) == x * y + x * z
        assert (x + y) - y == x

    @settings(max_examples=100, deadline=None)
    @given(elements, elements)
    def test_involution_is_ring_automorphism(self, x, y):
        """conj respects sums and products and squares to the identity."""
        assert (x + y).conj() == x.conj() + y.conj()
        assert (x * y).conj() == y.conj() * x.conj()
        assert x.conj().conj() == x

    @settings(max_examples=60, deadline=None)
    @given(z8_elements)
    def test_units_have_inverses(self, x):
        """Units of Z/8 are exactly the odd residues."""
        assert Z8.is_unit(x) == (x.c[0] % 2 == 1)

    def test_encode_decode(self):
        """Encoded coefficient lists decode to the same element."""
        assert all(GAUSS.decode(GAUSS.encode(x)) == x for x in GAUSS.elements)

    def test_decode_rejects_bools(self):
        """true is not a ring element encoding."""
        with pytest.raises(RingSpecError):
            GAUSS.decode(True)
