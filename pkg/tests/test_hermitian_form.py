# tests/test_hermitian_form.py
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.ideals import IdealDesc
from src.algebra.ring_core import parse_ring
from src.groups.hermitian_form import (
    HeisElem,
    HeisenbergGroup,
    OddFormIdeal,
    delta_bounds_member,
    delta_from_json,
    delta_max,
    delta_min,
    form_ideal_derived,
    ortho_delta,
    parse_delta,
    scale_sum_expand,
)
from src.utils.errors import FormParameterError, IdealError

GAUSS = parse_ring("quadext:3:2", "conj")
Z3 = parse_ring("zmod:3")

ring_elems = st.sampled_from(GAUSS.elements)
heis_elems = st.builds(HeisElem, ring_elems, ring_elems)
trace_free = st.sampled_from(sorted(HeisenbergGroup(GAUSS).delta_max_elements(), key=HeisElem.key))


@pytest.mark.unit
class TestHeisenbergGroup:
    @settings(max_examples=80, deadline=None)
    @given(heis_elems, heis_elems, heis_elems, st.sampled_from([1, -1]))
    def test_associative(self, a, b, c, sign):
        """(a + b) + c = a + (b + c) for both signs."""
        hg = HeisenbergGroup(GAUSS, sign)
        assert hg.add(hg.add(a, b), c) == hg.add(a, hg.add(b, c))

    @settings(max_examples=60, deadline=None)
    @given(heis_elems, st.sampled_from([1, -1]))
    def test_inverse(self, h, sign):
        """h + (-h) = 0 = (-h) + h."""
        hg = HeisenbergGroup(GAUSS, sign)
        assert hg.add(h, hg.neg(h)) == hg.zero
        assert hg.add(hg.neg(h), h) == hg.zero

    @settings(max_examples=60, deadline=None)
    @given(heis_elems, heis_elems, ring_elems)
    def test_scaling_is_additive(self, a, b, s):
        """(a + b) o s = a o s + b o s."""
        hg = HeisenbergGroup(GAUSS)
        assert hg.scale(hg.add(a, b), s) == hg.add(hg.scale(a, s), hg.scale(b, s))

    @settings(max_examples=60, deadline=None)
    @given(heis_elems, ring_elems, ring_elems)
    def test_scaling_is_multiplicative(self, h, s, t):
        """(h o s) o t = h o (st)."""
        hg = HeisenbergGroup(GAUSS)
        assert hg.scale(hg.scale(h, s), t) == hg.scale(h, s * t)

    @settings(max_examples=60, deadline=None)
    @given(heis_elems, heis_elems, ring_elems)
    def test_trace_homomorphism(self, a, b, s):
        """tr(a + b) = tr(a) + tr(b) and tr(a o s) = conj(s) tr(a) s."""
        hg = HeisenbergGroup(GAUSS)
        assert hg.trace(hg.add(a, b)) == hg.trace(a) + hg.trace(b)
        assert hg.trace(hg.scale(a, s)) == s.conj() * hg.trace(a) * s

    def test_bad_sign(self):
        """Only +1 and -1 select a structure."""
        with pytest.raises(ValueError):
            HeisenbergGroup(GAUSS, 2)


@pytest.mark.unit
class TestOddFormParameters:
    @pytest.mark.parametrize("ring", [Z3, GAUSS])
    def test_bounds_are_parameters(self, ring):
        """Delta_min <= Delta_max and both are closed."""
        low, high = delta_min(ring), delta_max(ring)
        assert low <= high
        assert low.is_valid()
        assert high.is_valid()

    def test_zmod3_maximum(self):
        """Over Z/3 with lambda = mu = 1, Delta_max is {(x, x^2)}."""
        high = delta_max(Z3)
        assert high.elems == frozenset(HeisElem(x, x * x) for x in Z3.elements)
        assert delta_bounds_member(HeisElem(Z3(2), Z3(1)), "max", Z3)
        assert not delta_bounds_member(HeisElem(Z3(2), Z3(1)), "min", Z3)

    def test_gens_closure_reaches_maximum(self):
        """(1, 1) generates Delta_max over Z/3."""
        delta = parse_delta(Z3, "gens:1/1")
        assert delta.kind == "max"
        assert delta == delta_max(Z3)

    def test_min_description(self):
        """parse_delta('min') is Delta_min."""
        assert parse_delta(GAUSS, "min").elems == delta_min(GAUSS).elems

    def test_generator_outside_maximum(self):
        """(1, 0) has nonzero trace over Z/3."""
        with pytest.raises(FormParameterError):
            parse_delta(Z3, "gens:1/0")

    def test_unknown_description(self):
        """Anything but min, max or gens: is rejected."""
        with pytest.raises(FormParameterError):
            parse_delta(Z3, "everything")

    def test_invalid_json(self):
        """An unclosed set of pairs is not a parameter."""
        with pytest.raises(FormParameterError):
            delta_from_json(Z3, {"kind": "set", "elems": [[[1], [1]]]})

    def test_json_round_trip(self):
        """to_json output loads back to the same parameter."""
        delta = delta_max(GAUSS)
        assert delta_from_json(GAUSS, delta.to_json()) == delta

    def test_mirror_is_involutive(self):
        """Mirroring twice gives the parameter back."""
        delta = delta_max(GAUSS)
        assert delta.mirror().sign == -1
        assert delta.mirror().mirror() == delta
        assert delta.with_sign(1) is delta

    def test_first_components(self):
        """J(Delta_min) = 0 and J(Delta_max) = R over Z/3."""
        assert delta_min(Z3).first_components == (Z3.zero,)
        assert delta_max(Z3).first_components == Z3.elements

    def test_ortho_parameter(self):
        """{(x, -x^2)} is an odd form parameter for lambda = 1, mu = 2."""
        ring = parse_ring("zmod:5", "id", 1, 2)
        assert ortho_delta(ring).is_valid()


@pytest.mark.unit
class TestScaleSumExpansion:
    @settings(max_examples=80, deadline=None)
    @given(trace_free, st.lists(ring_elems, min_size=1, max_size=4))
    def test_expansion(self, h, xs):
        """h o (x_1 + ... + x_k) equals the expanded sum with its cross term."""
        lhs, rhs = scale_sum_expand(h, xs, GAUSS)
        assert lhs == rhs

    def test_outside_maximum_rejected(self):
        """The expansion needs tr(h) = 0."""
        with pytest.raises(FormParameterError):
            scale_sum_expand(HeisElem(Z3(1), Z3(0)), [Z3(1), Z3(2)], Z3)


@pytest.mark.unit
class TestFormIdeals:
    def test_zero_ideal(self):
        """For I = 0 every derived set is trivial."""
        delta = delta_max(Z3)
        data = form_ideal_derived(IdealDesc.zero(Z3), delta)
        assert data.I_tilde == frozenset({Z3.zero})
        assert data.I_0 == frozenset({Z3.zero})
        assert data.omega_max.elems == frozenset({HeisElem(Z3.zero, Z3.zero)})
        assert data.omega_min.elems == data.omega_max.elems

    def test_whole_ring(self):
        """For I = R both relative parameters are Delta."""
        delta = delta_max(Z3)
        data = form_ideal_derived(IdealDesc.whole(Z3), delta)
        assert data.omega_max.elems == delta.elems
        assert data.omega_min.elems == delta.elems
        assert OddFormIdeal(IdealDesc.whole(Z3), data.omega_max).validate(delta)

    def test_minimal_parameter_leaves_everything_annihilated(self):
        """J(Delta_min) = 0 makes I~ the whole ring."""
        data = form_ideal_derived(IdealDesc.zero(GAUSS), delta_min(GAUSS))
        assert data.I_tilde == frozenset(GAUSS.elements)

    def test_non_invariant_ideal_rejected(self):
        """(t - 2) over Z/5[t] with t^2 = -1 is not conj invariant."""
        ring = parse_ring("quadext:5:4", "conj")
        ideal = IdealDesc(ring, [ring((3, 1))])
        assert not ideal.is_involution_invariant()
        with pytest.raises(IdealError):
            form_ideal_derived(ideal, delta_min(ring))
