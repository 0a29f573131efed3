# src/groups/group_context.py
"""Behaviour shared by the orthogonal and unitary group contexts."""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.ring_core import Ring, RingElem
from src.algebra.theta_matrix import ThetaMatrix, ThetaVector, eps, theta, theta_hb
from src.groups.generators import ElemGen, Word
from src.utils.errors import InvalidIndexError

logger = logging.getLogger(__name__)


@dataclass
class MembershipResult:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class MonomialAction:
    """Action of a signed monomial W: W e_a = e_{perm[a]} * scale[a]."""

    perm: Dict[int, int]
    scale: Dict[int, RingElem]


def outer(col: ThetaVector, row: ThetaVector) -> ThetaMatrix:
    """Column times row."""
    ring = col.ring
    data = ring.arr_mul(col.data[:, :, np.newaxis], row.data[:, np.newaxis, :])
    return ThetaMatrix(ring, col.n, data)


def row_times(row: ThetaVector, mat: ThetaMatrix) -> ThetaVector:
    ring = row.ring
    data = ring.arr_mul(row.data[:, np.newaxis, :], mat.data)[:, 0, :]
    return ThetaVector(ring, row.n, data)


class GroupContext(ABC):
    """A classical group over a validated ring with its elementary generators."""

    tag: str = ""

    def __init__(self, ring: Ring, n: int):
        if n < 1:
            raise InvalidIndexError(f"n must be >= 1, got {n}")
        self.ring = ring
        self.n = n
        self._gen_cache: Dict[ElemGen, ThetaMatrix] = {}
        self._p_cache: Dict[Tuple[int, int], ThetaMatrix] = {}

    # indices ------------------------------------------------------------------
    @property
    def theta(self) -> List[int]:
        return theta(self.n)

    @property
    def theta_hb(self) -> List[int]:
        return theta_hb(self.n)

    def check_hb(self, *indices: int) -> None:
        for i in indices:
            if i == 0 or not -self.n <= i <= self.n:
                raise InvalidIndexError(f"index {i} is not in Theta_hb for n={self.n}")

    def check_short(self, i: int, j: int) -> None:
        self.check_hb(i, j)
        if i == j or i == -j:
            raise InvalidIndexError(f"short root needs i != +-j, got ({i}, {j})")

    def short_pairs(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in self.theta_hb for j in self.theta_hb if i != j and i != -j]

    # matrices -----------------------------------------------------------------
    def identity(self) -> ThetaMatrix:
        return ThetaMatrix.identity(self.ring, self.n)

    def entries_matrix(self, entries: Dict[Tuple[int, int], RingElem]) -> ThetaMatrix:
        return ThetaMatrix.from_entries(self.ring, self.n, entries)

    @abstractmethod
    def short_matrix(self, i: int, j: int, x: RingElem) -> ThetaMatrix:
        """T_ij(x) without validation beyond indices."""

    @abstractmethod
    def extra_matrix(self, gen: ElemGen) -> ThetaMatrix:
        """Matrix of an extra short root generator."""

    @abstractmethod
    def validate_gen(self, gen: ElemGen) -> None:
        """Raise when the generator is not a valid elementary generator."""

    @abstractmethod
    def gen_inverse(self, gen: ElemGen) -> ElemGen:
        """Symbolic inverse."""

    @abstractmethod
    def flip_short(self, i: int, j: int, x: RingElem) -> Tuple[int, int, RingElem]:
        """The other name (-j, -i, x') of T_ij(x)."""

    @abstractmethod
    def member(self, sigma: ThetaMatrix) -> MembershipResult:
        """Group membership with a diagnostic."""

    @abstractmethod
    def random_gen(self, rng: np.random.Generator) -> ElemGen:
        """A uniformly drawn generator."""

    @abstractmethod
    def extra_from_matrix(self, mat: ThetaMatrix, k: int) -> ElemGen:
        """Read the parameter of a matrix assumed to be T_k(...)."""

    def gen_matrix(self, gen: ElemGen) -> ThetaMatrix:
        cached = self._gen_cache.get(gen)
        if cached is not None:
            return cached
        self.validate_gen(gen)
        if gen.kind == "S":
            mat = self.short_matrix(gen.i, gen.j, gen.x)
        else:
            mat = self.extra_matrix(gen)
        if len(self._gen_cache) < 200_000:
            self._gen_cache[gen] = mat
        return mat

    def short(self, i: int, j: int, x) -> ElemGen:
        gen = ElemGen.short(i, j, self.ring(x))
        self.validate_gen(gen)
        return gen

    def word_matrix(self, word: Sequence[ElemGen]) -> ThetaMatrix:
        acc = self.identity()
        for g in word:
            acc = acc @ self.gen_matrix(g)
        return acc

    def word_inverse(self, word: Sequence[ElemGen]) -> Word:
        return tuple(self.gen_inverse(g) for g in reversed(word))

    def short_from_matrix(self, mat: ThetaMatrix, i: int, j: int) -> ElemGen:
        return ElemGen.short(i, j, mat[i, j])

    # monomial matrices --------------------------------------------------------
    def p_word(self, i: int, j: int) -> Word:
        """T_ij(1) T_ji(-1) T_ij(1)."""
        self.check_short(i, j)
        one = self.ring.one
        return (ElemGen.short(i, j, one), ElemGen.short(j, i, -one), ElemGen.short(i, j, one))

    def p_perm(self, i: int, j: int) -> ThetaMatrix:
        key = (i, j)
        if key not in self._p_cache:
            self._p_cache[key] = self.word_matrix(self.p_word(i, j))
        return self._p_cache[key]

    def monomial_action(self, mat: ThetaMatrix) -> MonomialAction:
        perm, scale = {}, {}
        for a in self.theta:
            col = mat.column(a)
            hits = [(b, x) for b, x in col.items() if not x.is_zero()]
            if len(hits) != 1:
                raise InvalidIndexError("matrix is not monomial")
            perm[a], scale[a] = hits[0]
        return MonomialAction(perm, scale)

    # random elements ----------------------------------------------------------
    def random_word(self, rng: np.random.Generator, length: int) -> Word:
        return tuple(self.random_gen(rng) for _ in range(length))

    def random_element(self, rng: np.random.Generator, length: int) -> Tuple[Word, ThetaMatrix]:
        word = self.random_word(rng, length)
        return word, self.word_matrix(word)

    def _random_short(self, rng: np.random.Generator) -> ElemGen:
        pairs = self.short_pairs()
        i, j = pairs[int(rng.integers(len(pairs)))]
        return ElemGen.short(i, j, self.ring.random(rng))

    def _random_index(self, rng: np.random.Generator) -> int:
        hb = self.theta_hb
        return hb[int(rng.integers(len(hb)))]

    # JSON ---------------------------------------------------------------------
    def to_json(self) -> dict:
        return {"group": self.tag, "ring": self.ring.to_json(), "n": self.n}

    def matrix_to_json(self, mat: ThetaMatrix) -> List[List[list]]:
        return [[self.ring.encode(x) for x in row] for row in mat.rows()]

    def matrix_from_json(self, rows) -> ThetaMatrix:
        return ThetaMatrix.from_rows(self.ring, self.n, [[self.ring.decode(x) for x in row] for row in rows])

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.ring.describe()}, n={self.n})"


def twist(ring: Ring, i: int, j: int) -> RingElem:
    """lambda^((eps(j)-1)/2) * lambda^((1-eps(i))/2), the S1 factor for T_ij."""
    return ring.lambda_power((eps(j) - 1) // 2 + (1 - eps(i)) // 2)
