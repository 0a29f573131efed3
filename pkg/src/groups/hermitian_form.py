# src/groups/hermitian_form.py
"""
Heisenberg group, trace map, odd form parameters and odd form ideals.

Everything is enumerated over a finite ring. ``sign = -1`` selects the
mirrored structure built from (R, underbar, conj(lambda), conj(mu)), which
governs Delta^{-1}.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from src.algebra.ideals import IdealDesc
from src.algebra.ring_core import Ring, RingElem
from src.utils.errors import FormParameterError, IdealError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeisElem:
    x: RingElem
    y: RingElem

    def key(self) -> tuple:
        return (self.x.c, self.y.c)

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


class HeisenbergGroup:
    """The group R x R with (x1,y1) + (x2,y2) = (x1+x2, y1+y2 - conj(x1) mu x2)."""

    def __init__(self, ring: Ring, sign: int = 1):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.ring = ring
        self.sign = sign
        self.lam = ring.lam if sign == 1 else ring.lam_bar
        self.mu = ring.mu if sign == 1 else ring.mu_bar

    def bar(self, x: RingElem) -> RingElem:
        return x.conj() if self.sign == 1 else self.ring.underbar(x)

    @cached_property
    def zero(self) -> HeisElem:
        return HeisElem(self.ring.zero, self.ring.zero)

    def pair(self, x, y) -> HeisElem:
        return HeisElem(self.ring(x), self.ring(y))

    def add(self, h1: HeisElem, h2: HeisElem) -> HeisElem:
        return HeisElem(h1.x + h2.x, h1.y + h2.y - self.bar(h1.x) * self.mu * h2.x)

    def neg(self, h: HeisElem) -> HeisElem:
        return HeisElem(-h.x, -h.y - self.bar(h.x) * self.mu * h.x)

    def sub(self, h1: HeisElem, h2: HeisElem) -> HeisElem:
        """h1 + (-h2)."""
        return self.add(h1, self.neg(h2))

    def scale(self, h: HeisElem, a: RingElem) -> HeisElem:
        return HeisElem(h.x * a, self.bar(a) * h.y * a)

    def trace(self, h: HeisElem) -> RingElem:
        return self.bar(h.x) * self.mu * h.x + h.y + self.bar(h.y) * self.lam

    def sum(self, hs: Iterable[HeisElem]) -> HeisElem:
        acc = self.zero
        for h in hs:
            acc = self.add(acc, h)
        return acc

    def all_elements(self) -> List[HeisElem]:
        return [HeisElem(x, y) for x in self.ring.elements for y in self.ring.elements]

    def delta_min_elements(self) -> FrozenSet[HeisElem]:
        return frozenset(HeisElem(self.ring.zero, x - self.bar(x) * self.lam) for x in self.ring.elements)

    def delta_max_elements(self) -> FrozenSet[HeisElem]:
        return frozenset(h for h in self.all_elements() if self.trace(h).is_zero())


def delta_bounds_member(h: HeisElem, which: str, ring: Ring, sign: int = 1) -> bool:
    """Membership in Delta_min or Delta_max (``which`` is ``"min"`` or ``"max"``)."""
    hg = HeisenbergGroup(ring, sign)
    if which == "max":
        return hg.trace(h).is_zero()
    if which == "min":
        if not h.x.is_zero():
            return False
        return any(h.y == x - hg.bar(x) * hg.lam for x in ring.elements)
    raise ValueError(f"unknown bound {which!r}")


def heis_closure(
    hg: HeisenbergGroup,
    seed: Iterable[HeisElem],
    scalars: Optional[Sequence[RingElem]] = None,
) -> FrozenSet[HeisElem]:
    """Smallest subset containing ``seed`` and 0, closed under +, - and (when given) scaling."""
    found = {hg.zero}
    queue = [hg.zero]
    for h in seed:
        if h not in found:
            found.add(h)
            queue.append(h)
    while queue:
        h = queue.pop()
        candidates = [hg.neg(h)]
        if scalars is not None:
            candidates.extend(hg.scale(h, a) for a in scalars)
        for g in list(found):
            candidates.append(hg.add(h, g))
            candidates.append(hg.add(g, h))
        for c in candidates:
            if c not in found:
                found.add(c)
                queue.append(c)
    return frozenset(found)


class OddFormParam:
    """Enumerated odd form parameter (or its mirror when ``sign == -1``)."""

    def __init__(self, ring: Ring, elems: Iterable[HeisElem], kind: str = "set", sign: int = 1):
        self.ring = ring
        self.sign = sign
        self.kind = kind
        self.elems: FrozenSet[HeisElem] = frozenset(elems)
        self.hg = HeisenbergGroup(ring, sign)

    def __contains__(self, h: HeisElem) -> bool:
        return h in self.elems

    def __len__(self) -> int:
        return len(self.elems)

    def __eq__(self, other) -> bool:
        return isinstance(other, OddFormParam) and self.sign == other.sign and self.elems == other.elems

    def __hash__(self) -> int:
        return hash((self.sign, self.elems))

    def __le__(self, other: "OddFormParam") -> bool:
        return self.elems <= other.elems

    def sorted_elements(self) -> List[HeisElem]:
        return sorted(self.elems, key=HeisElem.key)

    def contains_pair(self, x: RingElem, y: RingElem) -> bool:
        return HeisElem(x, y) in self.elems

    def mirror(self) -> "OddFormParam":
        """Delta^{-1} = {(x, y) : (x, conj(y)) in Delta}; mirroring twice is the identity."""
        if self.sign == 1:
            elems = [HeisElem(h.x, self.ring.underbar(h.y)) for h in self.elems]
        else:
            elems = [HeisElem(h.x, h.y.conj()) for h in self.elems]
        return OddFormParam(self.ring, elems, self.kind, -self.sign)

    def with_sign(self, sign: int) -> "OddFormParam":
        return self if sign == self.sign else self.mirror()

    @cached_property
    def first_components(self) -> Tuple[RingElem, ...]:
        """J of the parameter, in canonical order."""
        xs = {h.x for h in self.elems}
        return tuple(x for x in self.ring.elements if x in xs)

    def complete(self, a: RingElem) -> Optional[RingElem]:
        """First b in canonical order with (a, b) in the parameter."""
        for b in self.ring.elements:
            if HeisElem(a, b) in self.elems:
                return b
        return None

    def is_closed(self, scalars: Optional[Sequence[RingElem]] = None) -> bool:
        hg = self.hg
        scalars = self.ring.elements if scalars is None else scalars
        for h in self.elems:
            if hg.neg(h) not in self.elems:
                return False
            if any(hg.scale(h, a) not in self.elems for a in scalars):
                return False
        return all(hg.add(h1, h2) in self.elems for h1, h2 in itertools.product(self.elems, repeat=2))

    def is_valid(self) -> bool:
        return (
            self.hg.delta_min_elements() <= self.elems
            and self.elems <= self.hg.delta_max_elements()
            and self.is_closed()
        )

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "elems": [[self.ring.encode(h.x), self.ring.encode(h.y)] for h in self.sorted_elements()],
        }

    def __repr__(self) -> str:
        return f"OddFormParam(kind={self.kind}, sign={self.sign}, size={len(self.elems)})"


def delta_min(ring: Ring) -> OddFormParam:
    return OddFormParam(ring, HeisenbergGroup(ring).delta_min_elements(), "min")


def delta_max(ring: Ring) -> OddFormParam:
    return OddFormParam(ring, HeisenbergGroup(ring).delta_max_elements(), "max")


def delta_closure(ring: Ring, generators: Iterable[HeisElem]) -> OddFormParam:
    """
    Smallest odd form parameter containing the generators.

    Args:
        ring: Validated ring
        generators: Pairs that must lie in Delta_max

    Returns:
        Enumerated parameter, closed under +, - and scaling

    Raises:
        FormParameterError: when a generator lies outside Delta_max
    """
    hg = HeisenbergGroup(ring)
    gens = list(generators)
    for h in gens:
        if not hg.trace(h).is_zero():
            raise FormParameterError(f"generator {h} is outside Delta_max")
    elems = heis_closure(hg, list(hg.delta_min_elements()) + gens, scalars=ring.elements)
    if not elems <= hg.delta_max_elements():
        raise FormParameterError("closure escaped Delta_max")
    if elems == hg.delta_min_elements():
        kind = "min"
    elif elems == hg.delta_max_elements():
        kind = "max"
    else:
        kind = "set"
    return OddFormParam(ring, elems, kind)


def parse_delta(ring: Ring, desc: str) -> OddFormParam:
    """``min``, ``max`` or ``gens:x1/y1;x2/y2`` (coefficients comma separated)."""
    desc = desc.strip()
    if desc == "min":
        return delta_closure(ring, [])
    if desc == "max":
        return delta_max(ring)
    if desc.startswith("gens:"):
        gens = []
        for chunk in filter(None, desc[5:].split(";")):
            try:
                xs, ys = chunk.split("/")
            except ValueError as exc:
                raise FormParameterError(f"bad generator {chunk!r}") from exc
            gens.append(HeisElem(ring([int(v) for v in xs.split(",")]), ring([int(v) for v in ys.split(",")])))
        return delta_closure(ring, gens)
    raise FormParameterError(f"unrecognised Delta description {desc!r}")


def delta_from_json(ring: Ring, obj: dict) -> OddFormParam:
    try:
        elems = [HeisElem(ring.decode(x), ring.decode(y)) for x, y in obj["elems"]]
        param = OddFormParam(ring, elems, obj["kind"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormParameterError(f"bad Delta object: {exc}") from exc
    if not param.is_valid():
        raise FormParameterError("Delta object is not an odd form parameter")
    return param


def ortho_delta(ring: Ring) -> OddFormParam:
    """{(x, -x^2)}: the parameter under which U_{2n+1} with lambda=1, mu=2 is O_{2n+1}."""
    return OddFormParam(ring, [HeisElem(x, -(x * x)) for x in ring.elements], "set")


@dataclass
class FormIdealData:
    I: IdealDesc
    J: Tuple[RingElem, ...]
    I_tilde: FrozenSet[RingElem]
    I_0: FrozenSet[RingElem]
    I_tilde_0: FrozenSet[RingElem]
    omega_min: OddFormParam
    omega_max: OddFormParam


def form_ideal_derived(ideal: IdealDesc, delta: OddFormParam) -> FormIdealData:
    """Derived sets J(Delta), I~, I_0, I~_0, Omega^I_min and Omega^I_max."""
    ring = delta.ring
    if not ideal.is_involution_invariant():
        raise IdealError(f"{ideal} is not involution invariant")
    hg = HeisenbergGroup(ring)
    members = ideal.elements
    J = delta.first_components
    mu = ring.mu

    def annihilates(x: RingElem, target: FrozenSet[RingElem]) -> bool:
        return all(y.conj() * mu * x in target for y in J)

    I_tilde = frozenset(x for x in ring.elements if annihilates(x, members))
    I_0 = frozenset(x for x in ring.elements if all(x * y in members for y in J))
    I_tilde_0 = frozenset(x for x in ring.elements if annihilates(x, I_0))
    seeds = [HeisElem(ring.zero, x - x.conj() * ring.lam) for x in members]
    seeds += [hg.scale(h, a) for h in delta.elems for a in members]
    omega_min = OddFormParam(ring, heis_closure(hg, seeds), "set")
    omega_max = OddFormParam(ring, [h for h in delta.elems if h.x in I_tilde and h.y in members], "max")
    return FormIdealData(ideal, J, I_tilde, I_0, I_tilde_0, omega_min, omega_max)


@dataclass
class OddFormIdeal:
    I: IdealDesc
    omega: OddFormParam

    def validate(self, delta: OddFormParam) -> bool:
        """Omega^I_min <= Omega <= Omega^I_max and Omega closed."""
        data = form_ideal_derived(self.I, delta)
        return data.omega_min <= self.omega <= data.omega_max and self.omega.is_closed()


def scale_sum_expand(h: HeisElem, xs: Sequence[RingElem], ring: Ring) -> Tuple[HeisElem, HeisElem]:
    """
    Both sides of the expansion of h o (x_1 + ... + x_k).

    The right side is (+_i h o x_i) + (0, sum_{i>j} w_ij - conj(w_ij) lambda) with
    w_ij = conj(x_i) b x_j, h = (a, b).

    Raises:
        FormParameterError: when h is outside Delta_max
    """
    hg = HeisenbergGroup(ring)
    if not hg.trace(h).is_zero():
        raise FormParameterError(f"{h} is outside Delta_max")
    total = ring.zero
    for x in xs:
        total = total + x
    lhs = hg.scale(h, total)
    rhs = hg.sum(hg.scale(h, x) for x in xs)
    rhs = hg.add(rhs, HeisElem(ring.zero, cross_term(h, xs, ring)))
    return lhs, rhs


def cross_term(h: HeisElem, xs: Sequence[RingElem], ring: Ring) -> RingElem:
    acc = ring.zero
    for i, xi in enumerate(xs):
        for xj in xs[:i]:
            w = xi.conj() * h.y * xj
            acc = acc + w - w.conj() * ring.lam
    return acc
