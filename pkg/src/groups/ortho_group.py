# src/groups/ortho_group.py
"""The odd orthogonal group O_{2n+1}(R) of the quadratic form
Q(u) = u_1 u_-1 + ... + u_n u_-n + u_0^2."""
import itertools
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.ring_core import Ring, RingElem
from src.algebra.theta_matrix import ThetaMatrix, ThetaVector
from src.groups.generators import ElemGen, Word
from src.groups.group_context import GroupContext, MembershipResult, outer, row_times
from src.utils.errors import FormParameterError, InvalidIndexError

logger = logging.getLogger(__name__)


class RelationTally:
    """Pass/fail bookkeeping for a relation suite."""

    def __init__(self, names: Iterable[str]):
        self.results: Dict[str, dict] = {name: {"passed": True, "checked": 0, "counterexample": None} for name in names}

    def record(self, name: str, ok: bool, witness) -> None:
        entry = self.results[name]
        entry["checked"] += 1
        if not ok and entry["passed"]:
            entry["passed"] = False
            entry["counterexample"] = str(witness)

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.results.values())


def sample_values(ring: Ring, k: int, trials: int, rng: np.random.Generator) -> List[Tuple[RingElem, ...]]:
    """All k-tuples when the ring is tiny, otherwise ``trials`` random ones."""
    if ring.size ** k <= max(trials, 9):
        return list(itertools.product(ring.elements, repeat=k))
    return [tuple(ring.random(rng) for _ in range(k)) for _ in range(trials)]


class OrthoGroup(GroupContext):
    tag = "ortho"

    # generators ---------------------------------------------------------------
    def short_matrix(self, i: int, j: int, x: RingElem) -> ThetaMatrix:
        return self.entries_matrix({(i, j): x, (-j, -i): -x})

    def extra_matrix(self, gen: ElemGen) -> ThetaMatrix:
        i, x = gen.i, gen.x
        return self.entries_matrix({(0, -i): x, (i, 0): -(x * 2), (i, -i): -(x * x)})

    def validate_gen(self, gen: ElemGen) -> None:
        if gen.x.ring != self.ring:
            raise InvalidIndexError("generator parameter from another ring")
        if gen.kind == "S":
            self.check_short(gen.i, gen.j)
        elif gen.kind == "E":
            self.check_hb(gen.i)
            if gen.y is not None or gen.j is not None:
                raise FormParameterError("orthogonal extra short roots take one parameter")
        else:
            raise InvalidIndexError(f"unknown generator kind {gen.kind!r}")

    def gen_inverse(self, gen: ElemGen) -> ElemGen:
        if gen.kind == "S":
            return ElemGen.short(gen.i, gen.j, -gen.x)
        return ElemGen.extra(gen.i, -gen.x)

    def flip_short(self, i: int, j: int, x: RingElem) -> Tuple[int, int, RingElem]:
        return -j, -i, -x

    def t_short(self, i: int, j: int, x) -> ThetaMatrix:
        self.check_short(i, j)
        return self.short_matrix(i, j, self.ring(x))

    def t_extra(self, i: int, x) -> ThetaMatrix:
        self.check_hb(i)
        return self.extra_matrix(ElemGen.extra(i, self.ring(x)))

    def extra(self, i: int, x) -> ElemGen:
        gen = ElemGen.extra(i, self.ring(x))
        self.validate_gen(gen)
        return gen

    def extra_from_matrix(self, mat: ThetaMatrix, k: int) -> ElemGen:
        return ElemGen.extra(k, mat[0, -k])

    def random_gen(self, rng: np.random.Generator) -> ElemGen:
        if int(rng.integers(2)) == 0:
            return self._random_short(rng)
        return ElemGen.extra(self._random_index(rng), self.ring.random(rng))

    # forms ------------------------------------------------------------------
    def quad_Q(self, u: ThetaVector) -> RingElem:
        acc = u[0] * u[0]
        for i in range(1, self.n + 1):
            acc = acc + u[i] * u[-i]
        return acc

    def polarity(self, u: ThetaVector) -> ThetaVector:
        """Row (u_-1, ..., u_-n, 2u_0, u_n, ..., u_1)."""
        entries = {q: u[-q] for q in self.theta_hb}
        entries[0] = u[0] * 2
        return ThetaVector.from_entries(self.ring, self.n, entries)

    # membership -------------------------------------------------------------
    def member(self, sigma: ThetaMatrix) -> MembershipResult:
        """Entry relations between sigma and its inverse, then Q on every column."""
        inv = sigma.inverse_or_none()
        if inv is None:
            return MembershipResult(False, "not invertible")
        hb = self.theta_hb
        for i in hb:
            for j in hb:
                if inv[i, j] != sigma[-j, -i]:
                    return MembershipResult(False, f"inverse entry ({i},{j}) != sigma({-j},{-i})")
        for j in hb:
            if inv[0, j] * 2 != sigma[-j, 0]:
                return MembershipResult(False, f"2*inverse entry (0,{j}) != sigma({-j},0)")
        for i in hb:
            if inv[i, 0] != sigma[0, -i] * 2:
                return MembershipResult(False, f"inverse entry ({i},0) != 2*sigma(0,{-i})")
        if inv[0, 0] * 2 != sigma[0, 0] * 2:
            return MembershipResult(False, "2*inverse entry (0,0) != 2*sigma(0,0)")
        for j in self.theta:
            expected = self.ring.one if j == 0 else self.ring.zero
            if self.quad_Q(sigma.column(j)) != expected:
                return MembershipResult(False, f"Q(column {j}) != {expected}")
        return MembershipResult(True)

    def preserves_Q(self, sigma: ThetaMatrix, vectors: Sequence[ThetaVector]) -> bool:
        return all(self.quad_Q(sigma @ u) == self.quad_Q(u) for u in vectors)

    # T_{*,-1} ---------------------------------------------------------------
    def check_isotropic(self, u: ThetaVector) -> None:
        if not u[-1].is_zero():
            raise FormParameterError("isotropic column needs u_-1 = 0")
        if not self.quad_Q(u).is_zero():
            raise FormParameterError("column is not isotropic")

    def t_star(self, u: ThetaVector) -> ThetaMatrix:
        """e + u e_-1^t - e_1 u~."""
        self.check_isotropic(u)
        e_m1 = ThetaVector.unit(self.ring, self.n, -1)
        e_1 = ThetaVector.unit(self.ring, self.n, 1)
        return self.identity() + outer(u, e_m1) - outer(e_1, self.polarity(u))

    def t_star_factors(self, u: ThetaVector) -> Word:
        self.check_isotropic(u)
        word = [ElemGen.extra(1, u[0])]
        word += [ElemGen.short(i, -1, u[i]) for i in self.theta_hb if i not in (1, -1)]
        return tuple(word)

    def sigma_t_star(self, sigma: ThetaMatrix, u: ThetaVector) -> ThetaMatrix:
        """Closed form of sigma T_{*,-1}(u) sigma^-1 for sigma in O."""
        su = sigma @ u
        s1 = sigma.column(1)
        return self.identity() + outer(su, self.polarity(s1)) - outer(s1, self.polarity(su))

    def polarity_identity(self, sigma: ThetaMatrix, u: ThetaVector) -> bool:
        return self.polarity(sigma @ u) == row_times(self.polarity(u), sigma.inverse())

    # relations --------------------------------------------------------------
    def _comm(self, a: ElemGen, b: ElemGen) -> ThetaMatrix:
        return self.word_matrix((a, b, self.gen_inverse(a), self.gen_inverse(b)))

    def relation_suite(self, trials: int = 20, seed: int = 0) -> Dict[str, dict]:
        """Check the short/extra short root relations over all index combinations."""
        rng = np.random.default_rng(seed)
        names = ["S1", "S2", "S3", "S4", "S5", "E1", "E2", "E3", "SE1", "SE2"]
        tally = RelationTally(names)
        S, E, M = ElemGen.short, ElemGen.extra, self.gen_matrix
        pairs = self.short_pairs()
        hb = self.theta_hb
        singles = sample_values(self.ring, 1, trials, rng)
        doubles = sample_values(self.ring, 2, trials, rng)
        for (i, j) in pairs:
            for (x,) in singles:
                tally.record("S1", M(S(i, j, x)) == M(S(-j, -i, -x)), (i, j, x))
            for x, y in doubles:
                tally.record("S2", M(S(i, j, x)) @ M(S(i, j, y)) == M(S(i, j, x + y)), (i, j, x, y))
                tally.record("S5", self._comm(S(i, j, x), S(j, -i, y)).is_identity(), (i, j, x, y))
                for (k, l) in pairs:
                    if k not in (j, -i) and l not in (i, -j):
                        tally.record("S3", self._comm(S(i, j, x), S(k, l, y)).is_identity(), (i, j, k, l, x, y))
                for k in hb:
                    if k not in (i, -i, j, -j):
                        tally.record("S4", self._comm(S(i, j, x), S(j, k, y)) == M(S(i, k, x * y)), (i, j, k, x, y))
                for k in hb:
                    if k not in (j, -i):
                        tally.record("SE1", self._comm(S(i, j, x), E(k, y)).is_identity(), (i, j, k, x, y))
                rhs = M(S(j, -i, -(x * y * y))) @ M(E(i, x * y))
                tally.record("SE2", self._comm(S(i, j, x), E(j, y)) == rhs, (i, j, x, y))
        for i in hb:
            for x, y in doubles:
                tally.record("E1", M(E(i, x)) @ M(E(i, y)) == M(E(i, x + y)), (i, x, y))
                tally.record("E3", self._comm(E(i, x), E(i, y)).is_identity(), (i, x, y))
                for j in hb:
                    if j not in (i, -i):
                        rhs = M(S(i, -j, -(x * y * 2)))
                        tally.record("E2", self._comm(E(i, x), E(j, y)) == rhs, (i, j, x, y))
        logger.info(f"Orthogonal relation suite over {self.ring.describe()}: passed={tally.passed}")
        return tally.results
