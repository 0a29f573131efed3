# src/algebra/ideals.py
import logging
import math
from functools import cached_property
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from src.algebra.ring_core import Ring, RingElem

logger = logging.getLogger(__name__)


class IdealDesc:
    """
    Ideal of a finite commutative ring given by generators.

    The element set is the enumerated closure of the generators under
    addition and ring multiplication; with ``involutive=True`` the conjugates
    of the generators are added first.
    """

    def __init__(self, ring: Ring, generators: Iterable[RingElem], involutive: bool = False):
        self.ring = ring
        gens = [ring(g) for g in generators]
        if involutive:
            gens = gens + [g.conj() for g in gens]
        # drop duplicates, keep order
        seen = set()
        self.generators: Tuple[RingElem, ...] = tuple(g for g in gens if not (g in seen or seen.add(g)))

    @classmethod
    def zero(cls, ring: Ring) -> "IdealDesc":
        return cls(ring, [])

    @classmethod
    def whole(cls, ring: Ring) -> "IdealDesc":
        return cls(ring, [ring.one])

    @cached_property
    def elements(self) -> FrozenSet[RingElem]:
        ring = self.ring
        acc = {ring.zero}
        for g in self.generators:
            multiples = {r * g for r in ring.elements}
            acc = {s + t for s in acc for t in multiples}
        return frozenset(acc)

    def sorted_elements(self) -> List[RingElem]:
        return sorted(self.elements, key=lambda x: x.c)

    def __contains__(self, x: RingElem) -> bool:
        return self.ring(x) in self.elements

    def __le__(self, other: "IdealDesc") -> bool:
        return self.elements <= other.elements

    def __eq__(self, other) -> bool:
        return isinstance(other, IdealDesc) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __add__(self, other: "IdealDesc") -> "IdealDesc":
        return IdealDesc(self.ring, self.generators + other.generators)

    def is_involution_invariant(self) -> bool:
        return all(x.conj() in self.elements for x in self.elements)

    def normal_form(self) -> Tuple[RingElem, ...]:
        """Single gcd generator over Z/m, otherwise the generator list."""
        if self.ring.deg == 1:
            g = self.ring.modulus
            for x in self.generators:
                g = math.gcd(g, x.c[0])
            return (self.ring(g % self.ring.modulus),)
        return self.generators

    def to_json(self) -> List[list]:
        return [self.ring.encode(g) for g in self.normal_form() if not g.is_zero()]

    def __repr__(self) -> str:
        return f"IdealDesc({[str(g) for g in self.normal_form()]})"


def ideal_from_set(ring: Ring, values: Sequence[RingElem], involutive: bool = False) -> IdealDesc:
    return IdealDesc(ring, [v for v in values if not ring(v).is_zero()], involutive=involutive)


def squares(ideal: IdealDesc) -> FrozenSet[RingElem]:
    return frozenset(x * x for x in ideal.elements)
