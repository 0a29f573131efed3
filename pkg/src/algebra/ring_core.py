# src/algebra/ring_core.py
"""
Finite commutative rings with involution and the Hermitian data (lambda, mu).

Two carriers are supported:

* ``zmod:m``       residue ring Z/m, trivial involution
* ``quadext:m:d``  (Z/m)[t]/(t^2 - d), involution ``id`` or ``conj`` (t -> -t)

Elements are canonical coefficient tuples; matrices over the ring are numpy
``int64`` arrays of shape ``(deg, rows, cols)`` where ``deg`` is the number of
coefficients (1 or 2).
"""
import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.utils.errors import RingSpecError

logger = logging.getLogger(__name__)

# rings up to this size are validated exhaustively, larger ones by sampling
EXHAUSTIVE_LIMIT = 1024
SAMPLE_SIZE = 50

Coeffs = Tuple[int, ...]


@dataclass(frozen=True)
class RingSpec:
    kind: str
    modulus: int
    defect: int = 0
    involution: str = "id"
    lam: Coeffs = (1,)
    mu: Coeffs = (1,)

    @property
    def deg(self) -> int:
        return 1 if self.kind == "zmod" else 2

    def describe(self) -> str:
        if self.kind == "zmod":
            return f"zmod:{self.modulus}"
        return f"quadext:{self.modulus}:{self.defect}"


@dataclass(frozen=True)
class RingElem:
    """Canonical element of a validated ring."""

    ring: "Ring" = field(repr=False)
    c: Coeffs

    def _coerce(self, other) -> "RingElem":
        return self.ring(other)

    def __add__(self, other) -> "RingElem":
        o = self._coerce(other)
        m = self.ring.modulus
        return RingElem(self.ring, tuple((a + b) % m for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other) -> "RingElem":
        o = self._coerce(other)
        m = self.ring.modulus
        return RingElem(self.ring, tuple((a - b) % m for a, b in zip(self.c, o.c)))

    def __rsub__(self, other) -> "RingElem":
        return self._coerce(other) - self

    def __neg__(self) -> "RingElem":
        m = self.ring.modulus
        return RingElem(self.ring, tuple((-a) % m for a in self.c))

    def __mul__(self, other) -> "RingElem":
        return self.ring.mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RingElem":
        if k < 0:
            return self.ring.unit_inverse_strict(self) ** (-k)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "RingElem":
        return self.ring.involution(self)

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        if len(self.c) == 1:
            return str(self.c[0])
        return f"{self.c[0]}+{self.c[1]}t"


Scalar = Union[int, Sequence[int], RingElem]


class Ring:
    """Validated ring handle; build instances through :func:`ring_validate`."""

    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.modulus = spec.modulus
        self.defect = spec.defect % spec.modulus if spec.kind == "quadext" else 0
        self.deg = spec.deg
        self.conj_on = spec.involution == "conj"

    # identity -----------------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, Ring) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"Ring({self.describe()}, {self.spec.involution}, lam={self.lam}, mu={self.mu})"

    def describe(self) -> str:
        return self.spec.describe()

    # construction -------------------------------------------------------------
    def __call__(self, value: Scalar) -> RingElem:
        if isinstance(value, RingElem):
            if value.ring is self or value.ring == self:
                return value
            raise RingSpecError(f"element {value} belongs to another ring")
        if isinstance(value, (int, np.integer)):
            coeffs = (int(value) % self.modulus,) + (0,) * (self.deg - 1)
            return RingElem(self, coeffs)
        coeffs = tuple(int(v) % self.modulus for v in value)
        if len(coeffs) == 1 and self.deg == 2:
            coeffs = coeffs + (0,)
        if len(coeffs) != self.deg:
            raise RingSpecError(f"expected {self.deg} coefficients, got {list(value)}")
        return RingElem(self, coeffs)

    @cached_property
    def zero(self) -> RingElem:
        return self(0)

    @cached_property
    def one(self) -> RingElem:
        return self(1)

    @cached_property
    def lam(self) -> RingElem:
        return self(self.spec.lam)

    @cached_property
    def mu(self) -> RingElem:
        return self(self.spec.mu)

    @cached_property
    def lam_bar(self) -> RingElem:
        return self.involution(self.lam)

    @cached_property
    def mu_bar(self) -> RingElem:
        return self.involution(self.mu)

    @cached_property
    def elements(self) -> Tuple[RingElem, ...]:
        """All elements in canonical (lexicographic coefficient) order."""
        rng = range(self.modulus)
        return tuple(RingElem(self, c) for c in itertools.product(rng, repeat=self.deg))

    @cached_property
    def units(self) -> Tuple[RingElem, ...]:
        return tuple(x for x in self.elements if self.unit_inverse(x) is not None)

    @property
    def size(self) -> int:
        return self.modulus ** self.deg

    # arithmetic ---------------------------------------------------------------
    def mul(self, x: RingElem, y: RingElem) -> RingElem:
        m = self.modulus
        if self.deg == 1:
            return RingElem(self, ((x.c[0] * y.c[0]) % m,))
        a, b = x.c
        c, e = y.c
        return RingElem(self, ((a * c + self.defect * b * e) % m, (a * e + b * c) % m))

    def involution(self, x: RingElem) -> RingElem:
        if not self.conj_on:
            return x
        return RingElem(self, (x.c[0], (-x.c[1]) % self.modulus))

    def underbar(self, x: RingElem) -> RingElem:
        """Inverse of the involution: lam_bar * conj(x) * lam."""
        return self.lam_bar * self.involution(x) * self.lam

    def norm(self, x: RingElem) -> int:
        """Determinant of the regular representation (a^2 - d b^2 for a + bt)."""
        if self.deg == 1:
            return x.c[0]
        a, b = x.c
        return (a * a - self.defect * b * b) % self.modulus

    def unit_inverse(self, x: RingElem) -> Optional[RingElem]:
        """Inverse of ``x`` or None when ``x`` is not a unit."""
        m = self.modulus
        nrm = self.norm(x)
        if math.gcd(nrm, m) != 1:
            return None
        inv_nrm = pow(nrm, -1, m)
        if self.deg == 1:
            return RingElem(self, (inv_nrm,))
        a, b = x.c
        # adjugate of [[a, d b], [b, a]] divided by the norm
        return RingElem(self, ((a * inv_nrm) % m, (-b * inv_nrm) % m))

    def unit_inverse_strict(self, x: RingElem) -> RingElem:
        inv = self.unit_inverse(x)
        if inv is None:
            raise ArithmeticError(f"{x} is not a unit in {self.describe()}")
        return inv

    def is_unit(self, x: RingElem) -> bool:
        return self.unit_inverse(x) is not None

    def lambda_power(self, k: int) -> RingElem:
        return self.lam ** k

    # solving ------------------------------------------------------------------
    def solve(self, a: RingElem, b: RingElem) -> Optional[RingElem]:
        """First y in canonical order with y * a == b, or None."""
        inv = self.unit_inverse(a)
        if inv is not None:
            return b * inv
        for y in self.elements:
            if y * a == b:
                return y
        return None

    def combination(self, values: Sequence[RingElem], target: RingElem) -> Optional[Tuple[RingElem, ...]]:
        """
        First coefficient tuple (canonical order) with sum c_i * v_i == target.

        Searches all |R|^k tuples for k values, so it is only practical for the
        small rings and short atom lists the decomposers produce.
        """
        if not values:
            return () if target.is_zero() else None
        for coeffs in itertools.product(self.elements, repeat=len(values)):
            acc = self.zero
            for c, v in zip(coeffs, values):
                acc = acc + c * v
            if acc == target:
                return coeffs
        return None

    def unit_ratio(self, num: RingElem, den: RingElem) -> Optional[RingElem]:
        """A unit u with u * den == num, trying 1 and lambda powers first."""
        preferred = [self.one, -self.one, self.lam, self.lam_bar, -self.lam, -self.lam_bar]
        for u in preferred + list(self.units):
            if u * den == num:
                return u
        return None

    # numpy level --------------------------------------------------------------
    def arr_reduce(self, a: np.ndarray) -> np.ndarray:
        return np.mod(a, self.modulus)

    def arr_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of ring matrices stored as (deg, rows, k) and (deg, k, cols)."""
        m = self.modulus
        if self.deg == 1:
            return ((a[0] @ b[0]) % m)[np.newaxis]
        c0 = a[0] @ b[0] + self.defect * ((a[1] @ b[1]) % m)
        c1 = a[0] @ b[1] + a[1] @ b[0]
        return np.stack([c0 % m, c1 % m])

    def arr_scale(self, s: RingElem, a: np.ndarray) -> np.ndarray:
        m = self.modulus
        if self.deg == 1:
            return (s.c[0] * a) % m
        s0, s1 = s.c
        c0 = s0 * a[0] + self.defect * s1 * a[1]
        c1 = s0 * a[1] + s1 * a[0]
        return np.stack([c0 % m, c1 % m])

    def arr_conj(self, a: np.ndarray) -> np.ndarray:
        if not self.conj_on:
            return a.copy()
        out = a.copy()
        out[1] = (-out[1]) % self.modulus
        return out

    def arr_entry(self, a: np.ndarray, r: int, c: int) -> RingElem:
        return RingElem(self, tuple(int(v) for v in a[:, r, c]))

    def arr_set(self, a: np.ndarray, r: int, c: int, x: RingElem) -> None:
        a[:, r, c] = x.c

    # sampling / encoding ------------------------------------------------------
    def random(self, rng: Union[random.Random, np.random.Generator]) -> RingElem:
        if isinstance(rng, np.random.Generator):
            idx = int(rng.integers(self.size))
        else:
            idx = rng.randrange(self.size)
        return self.elements[idx]

    def encode(self, x: RingElem) -> List[int]:
        return list(x.c)

    def decode(self, obj) -> RingElem:
        if isinstance(obj, bool) or not isinstance(obj, (int, list)):
            raise RingSpecError(f"bad ring element encoding {obj!r}")
        if isinstance(obj, list) and not all(isinstance(v, int) and not isinstance(v, bool) for v in obj):
            raise RingSpecError(f"bad ring element encoding {obj!r}")
        return self(obj)

    def to_json(self) -> dict:
        return {
            "desc": self.describe(),
            "involution": self.spec.involution,
            "lambda": list(self.lam.c),
            "mu": list(self.mu.c),
        }


def _sample(ring: Ring, k: int) -> Iterator[Tuple[RingElem, ...]]:
    if ring.size ** k <= EXHAUSTIVE_LIMIT:
        yield from itertools.product(ring.elements, repeat=k)
        return
    rng = random.Random(0)
    for _ in range(SAMPLE_SIZE):
        yield tuple(ring.random(rng) for _ in range(k))


def ring_validate(spec: RingSpec) -> Ring:
    """
    Validate a ring description together with its Hermitian data.

    Args:
        spec: Ring kind, modulus, defect, involution, lambda and mu

    Returns:
        Validated ring handle

    Raises:
        RingSpecError: when any Hermitian ring law fails
    """
    if spec.kind not in ("zmod", "quadext"):
        raise RingSpecError(f"unknown ring kind {spec.kind!r}")
    if spec.modulus < 2:
        raise RingSpecError(f"modulus must be >= 2, got {spec.modulus}")
    if spec.involution not in ("id", "conj"):
        raise RingSpecError(f"unknown involution {spec.involution!r}")
    if spec.kind == "zmod" and spec.involution == "conj":
        raise RingSpecError("zmod rings only carry the trivial involution")

    ring = Ring(spec)
    lam, mu = ring.lam, ring.mu
    lam_inv = ring.unit_inverse(lam)
    if lam_inv is None:
        raise RingSpecError(f"lambda={lam} is not a unit")
    if ring.lam_bar != lam_inv:
        raise RingSpecError(f"conj(lambda)={ring.lam_bar} differs from lambda^-1={lam_inv}")
    if ring.involution(ring.one) != ring.one:
        raise RingSpecError("involution does not fix 1")
    for (x,) in _sample(ring, 1):
        if x.conj().conj() != lam * x * ring.lam_bar:
            raise RingSpecError(f"double involution law fails at x={x}")
    for x, y in _sample(ring, 2):
        if (x + y).conj() != x.conj() + y.conj() or (x * y).conj() != y.conj() * x.conj():
            raise RingSpecError(f"involution is not an anti-homomorphism at ({x}, {y})")
    if mu != ring.mu_bar * lam:
        raise RingSpecError(f"mu={mu} violates mu = conj(mu) * lambda")
    logger.debug(f"Validated {ring!r}")
    return ring


def _parse_coeffs(value: Union[None, str, Sequence[int], int], default: Coeffs) -> Coeffs:
    if value is None:
        return default
    if isinstance(value, int):
        return (value,)
    if isinstance(value, str):
        try:
            return tuple(int(v) for v in value.split(",") if v.strip())
        except ValueError as exc:
            raise RingSpecError(f"bad coefficient list {value!r}") from exc
    return tuple(int(v) for v in value)


def parse_ring(
    desc: str,
    involution: Optional[str] = None,
    lam: Union[None, str, Sequence[int], int] = None,
    mu: Union[None, str, Sequence[int], int] = None,
) -> Ring:
    """Build a validated ring from ``zmod:m`` / ``quadext:m:d`` plus Hermitian data."""
    parts = desc.strip().split(":")
    try:
        if parts[0] == "zmod" and len(parts) == 2:
            modulus, defect = int(parts[1]), 0
        elif parts[0] == "quadext" and len(parts) == 3:
            modulus, defect = int(parts[1]), int(parts[2])
        else:
            raise RingSpecError(f"unrecognised ring description {desc!r}")
    except ValueError as exc:
        raise RingSpecError(f"unrecognised ring description {desc!r}") from exc
    if modulus < 2:
        raise RingSpecError(f"modulus must be >= 2, got {modulus}")
    if involution is None:
        involution = "conj" if parts[0] == "quadext" else "id"
    deg = 1 if parts[0] == "zmod" else 2
    lam_c = _parse_coeffs(lam, (1,))
    mu_c = _parse_coeffs(mu, (1,))
    lam_c = tuple(v % modulus for v in lam_c) + (0,) * (deg - len(lam_c))
    mu_c = tuple(v % modulus for v in mu_c) + (0,) * (deg - len(mu_c))
    if len(lam_c) != deg or len(mu_c) != deg:
        raise RingSpecError("lambda/mu coefficient count does not match the ring")
    spec = RingSpec(
        kind=parts[0],
        modulus=modulus,
        defect=defect % modulus if parts[0] == "quadext" else 0,
        involution=involution,
        lam=lam_c,
        mu=mu_c,
    )
    return ring_validate(spec)


def ring_from_json(obj: dict) -> Ring:
    try:
        return parse_ring(obj["desc"], obj["involution"], obj["lambda"], obj["mu"])
    except (KeyError, TypeError) as exc:
        raise RingSpecError(f"bad ring object {obj!r}") from exc


def elements_of(ring: Ring, values: Iterable[Scalar]) -> List[RingElem]:
    return [ring(v) for v in values]
