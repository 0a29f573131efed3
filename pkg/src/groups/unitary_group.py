# src/groups/unitary_group.py
"""The odd unitary group U_{2n+1}(R, Delta) of a Hermitian form ring."""
import logging
from typing import Dict, List, Tuple

import numpy as np

from src.algebra.ring_core import Ring, RingElem
from src.algebra.theta_matrix import ThetaMatrix, ThetaVector, eps
from src.groups.generators import ElemGen, Word
from src.groups.group_context import GroupContext, MembershipResult, outer, row_times, twist
from src.groups.hermitian_form import HeisElem, HeisenbergGroup, OddFormParam, ortho_delta
from src.groups.ortho_group import RelationTally, sample_values
from src.utils.errors import FormParameterError, InvalidIndexError

logger = logging.getLogger(__name__)


class UnitaryGroup(GroupContext):
    tag = "unitary"

    def __init__(self, ring: Ring, n: int, delta: OddFormParam):
        super().__init__(ring, n)
        if delta.sign != 1:
            delta = delta.mirror()
        self.delta = delta
        self._mirrors = {1: delta, -1: delta.mirror()}
        self._heis = {1: HeisenbergGroup(ring, 1), -1: HeisenbergGroup(ring, -1)}

    def delta_for(self, sign: int) -> OddFormParam:
        return self._mirrors[sign]

    def heis(self, sign: int = 1) -> HeisenbergGroup:
        return self._heis[sign]

    def lam_pow(self, k: int) -> RingElem:
        return self.ring.lambda_power(k)

    # generators ---------------------------------------------------------------
    def short_matrix(self, i: int, j: int, x: RingElem) -> ThetaMatrix:
        return self.entries_matrix({(i, j): x, (-j, -i): -(twist(self.ring, i, j) * x.conj())})

    def extra_matrix(self, gen: ElemGen) -> ThetaMatrix:
        i, x, y = gen.i, gen.x, gen.y
        coeff = self.lam_pow(-(1 + eps(i)) // 2)
        return self.entries_matrix({(0, -i): x, (i, 0): -(coeff * x.conj() * self.ring.mu), (i, -i): y})

    def validate_gen(self, gen: ElemGen) -> None:
        if gen.x.ring != self.ring:
            raise InvalidIndexError("generator parameter from another ring")
        if gen.kind == "S":
            self.check_short(gen.i, gen.j)
        elif gen.kind == "E":
            self.check_hb(gen.i)
            if gen.y is None or gen.j is not None:
                raise FormParameterError("unitary extra short roots take a pair")
            if HeisElem(gen.x, gen.y) not in self.delta_for(-eps(gen.i)):
                raise FormParameterError(f"({gen.x}, {gen.y}) is not in Delta^{-eps(gen.i)} for index {gen.i}")
        else:
            raise InvalidIndexError(f"unknown generator kind {gen.kind!r}")

    def gen_inverse(self, gen: ElemGen) -> ElemGen:
        if gen.kind == "S":
            return ElemGen.short(gen.i, gen.j, -gen.x)
        h = self.heis(-eps(gen.i)).neg(HeisElem(gen.x, gen.y))
        return ElemGen.extra(gen.i, h.x, h.y)

    def flip_short(self, i: int, j: int, x: RingElem) -> Tuple[int, int, RingElem]:
        return -j, -i, -(twist(self.ring, i, j) * x.conj())

    def u_t_short(self, i: int, j: int, x) -> ThetaMatrix:
        self.check_short(i, j)
        return self.short_matrix(i, j, self.ring(x))

    def extra(self, i: int, x, y) -> ElemGen:
        gen = ElemGen.extra(i, self.ring(x), self.ring(y))
        self.validate_gen(gen)
        return gen

    def u_t_extra(self, i: int, h: HeisElem) -> ThetaMatrix:
        return self.gen_matrix(self.extra(i, h.x, h.y))

    def extra_from_matrix(self, mat: ThetaMatrix, k: int) -> ElemGen:
        return ElemGen.extra(k, mat[0, -k], mat[k, -k])

    def extra_param(self, gen: ElemGen) -> HeisElem:
        return HeisElem(gen.x, gen.y)

    def random_gen(self, rng: np.random.Generator) -> ElemGen:
        if int(rng.integers(2)) == 0:
            return self._random_short(rng)
        i = self._random_index(rng)
        choices = self._sorted_param(-eps(i))
        h = choices[int(rng.integers(len(choices)))]
        return ElemGen.extra(i, h.x, h.y)

    def _sorted_param(self, sign: int) -> List[HeisElem]:
        return self.delta_for(sign).sorted_elements()

    # forms ------------------------------------------------------------------
    def form_b(self, u: ThetaVector, v: ThetaVector) -> RingElem:
        ring = self.ring
        acc = u[0].conj() * ring.mu * v[0]
        for i in range(1, self.n + 1):
            acc = acc + u[i].conj() * v[-i] + u[-i].conj() * ring.lam * v[i]
        return acc

    def form_q(self, u: ThetaVector) -> HeisElem:
        acc = self.ring.zero
        for i in range(1, self.n + 1):
            acc = acc + u[i].conj() * u[-i]
        return HeisElem(u[0], acc)

    def polarity(self, u: ThetaVector) -> ThetaVector:
        """Row (conj(u_-1) lam, ..., conj(u_-n) lam, conj(u_0) mu, conj(u_n), ..., conj(u_1))."""
        ring = self.ring
        entries = {}
        for q in self.theta_hb:
            entries[q] = u[-q].conj() * ring.lam if q > 0 else u[-q].conj()
        entries[0] = u[0].conj() * ring.mu
        return ThetaVector.from_entries(ring, self.n, entries)

    def congruent(self, h1: HeisElem, h2: HeisElem, param: OddFormParam) -> bool:
        """h1 == h2 modulo ``param``, read as h1 + (-h2) in param."""
        hg = self.heis(param.sign)
        return hg.sub(h1, h2) in param

    # membership -------------------------------------------------------------
    def member(self, sigma: ThetaMatrix) -> MembershipResult:
        """Entry relations between sigma and its inverse, then q on every column."""
        inv = sigma.inverse_or_none()
        if inv is None:
            return MembershipResult(False, "not invertible")
        ring, mu = self.ring, self.ring.mu
        hb = self.theta_hb
        lp = self.lam_pow
        for i in hb:
            for j in hb:
                if inv[i, j] != lp(-(eps(i) + 1) // 2) * sigma[-j, -i].conj() * lp((eps(j) + 1) // 2):
                    return MembershipResult(False, f"inverse entry ({i},{j}) relation fails")
        for j in hb:
            if mu * inv[0, j] != sigma[-j, 0].conj() * lp((eps(j) + 1) // 2):
                return MembershipResult(False, f"inverse entry (0,{j}) relation fails")
        for i in hb:
            if inv[i, 0] != lp(-(eps(i) + 1) // 2) * sigma[0, -i].conj() * mu:
                return MembershipResult(False, f"inverse entry ({i},0) relation fails")
        if mu * inv[0, 0] != sigma[0, 0].conj() * mu:
            return MembershipResult(False, "inverse entry (0,0) relation fails")
        for j in self.theta:
            expected = HeisElem(ring.one if j == 0 else ring.zero, ring.zero)
            if not self.congruent(self.form_q(sigma.column(j)), expected, self.delta):
                return MembershipResult(False, f"q(column {j}) is not congruent to {expected}")
        return MembershipResult(True)

    def member_by_definition(self, sigma: ThetaMatrix) -> MembershipResult:
        """b preserved on basis pairs and q preserved mod Delta on basis vectors."""
        if sigma.inverse_or_none() is None:
            return MembershipResult(False, "not invertible")
        basis = {p: ThetaVector.unit(self.ring, self.n, p) for p in self.theta}
        images = {p: sigma @ v for p, v in basis.items()}
        for p in self.theta:
            for q in self.theta:
                if self.form_b(images[p], images[q]) != self.form_b(basis[p], basis[q]):
                    return MembershipResult(False, f"b(sigma e_{p}, sigma e_{q}) != b(e_{p}, e_{q})")
        for p in self.theta:
            if not self.congruent(self.form_q(images[p]), self.form_q(basis[p]), self.delta):
                return MembershipResult(False, f"q(sigma e_{p}) not congruent to q(e_{p})")
        return MembershipResult(True)

    def polarity_identity(self, sigma: ThetaMatrix, u: ThetaVector) -> bool:
        return self.polarity(sigma @ u) == row_times(self.polarity(u), sigma.inverse())

    # T_{*,-1} ---------------------------------------------------------------
    def check_isotropic(self, u: ThetaVector) -> None:
        if not u[-1].is_zero():
            raise FormParameterError("isotropic column needs u_-1 = 0")
        if self.form_q(u) not in self.delta:
            raise FormParameterError("q(u) is not in Delta")

    def u_t_star(self, u: ThetaVector) -> ThetaMatrix:
        """e + u e_-1^t - e_1 conj(lambda) u~."""
        self.check_isotropic(u)
        e_m1 = ThetaVector.unit(self.ring, self.n, -1)
        e_1 = ThetaVector.unit(self.ring, self.n, 1)
        return self.identity() + outer(u, e_m1) - outer(e_1, self.polarity(u)).scale(self.ring.lam_bar)

    def t_star_factors(self, u: ThetaVector) -> Word:
        self.check_isotropic(u)
        q = self.form_q(u)
        ring = self.ring
        y = ring.lam_bar * (q.y - u[1].conj() + ring.lam * u[1])
        word = [ElemGen.extra(1, q.x, y)]
        word += [ElemGen.short(i, -1, u[i]) for i in self.theta_hb if i not in (1, -1)]
        return tuple(word)

    def sigma_t_star(self, sigma: ThetaMatrix, u: ThetaVector) -> ThetaMatrix:
        su = sigma @ u
        s1 = sigma.column(1)
        return (
            self.identity()
            + outer(su, self.polarity(s1))
            - outer(s1, self.polarity(su)).scale(self.ring.lam_bar)
        )

    # conjugation by P_ij ------------------------------------------------------
    def q_permuted(self, sigma: ThetaMatrix, i: int, j: int) -> HeisElem:
        """q of column i of P_ij sigma P_ij^-1, from entries of sigma."""
        self.check_short(i, j)
        q = self.form_q(sigma.column(j))
        correction = self.q_permuted_correction(sigma, i, j)
        return self.heis(1).add(q, HeisElem(self.ring.zero, correction))

    def q_permuted_terms(self, sigma: ThetaMatrix, i: int, j: int) -> List[Tuple[RingElem, RingElem]]:
        """Pairs (a, b) with correction = sum of -(a b) + conj(a b) lambda for each pair."""
        if eps(i) == eps(j):
            return []
        s = sigma
        if eps(i) == 1:
            return [(s[i, j].conj(), s[-i, j]), (s[-j, j].conj(), s[j, j])]
        return [(s[-i, j].conj(), s[i, j]), (s[j, j].conj(), s[-j, j])]

    def q_permuted_correction(self, sigma: ThetaMatrix, i: int, j: int) -> RingElem:
        acc = self.ring.zero
        for a, b in self.q_permuted_terms(sigma, i, j):
            w = a * b
            acc = acc - w + w.conj() * self.ring.lam
        return acc

    def q_permuted_direct(self, sigma: ThetaMatrix, i: int, j: int) -> HeisElem:
        p = self.p_perm(i, j)
        hat = p @ sigma @ self.p_perm(j, i)
        return self.form_q(hat.column(i))

    # relations --------------------------------------------------------------
    def _comm(self, a: ElemGen, b: ElemGen) -> ThetaMatrix:
        return self.word_matrix((a, b, self.gen_inverse(a), self.gen_inverse(b)))

    def _raw_extra(self, i: int, x: RingElem, y: RingElem) -> ThetaMatrix:
        return self.extra_matrix(ElemGen.extra(i, x, y))

    def _param_samples(self, sign: int, trials: int, rng: np.random.Generator) -> List[HeisElem]:
        elems = self._sorted_param(sign)
        if len(elems) <= max(trials, 9):
            return elems
        return [elems[int(rng.integers(len(elems)))] for _ in range(trials)]

    def relation_suite(self, trials: int = 20, seed: int = 0) -> Dict[str, dict]:
        """Check the unitary short/extra short root relations."""
        rng = np.random.default_rng(seed)
        ring, mu = self.ring, self.ring.mu
        names = ["S1", "S2", "S3", "S4", "S5", "E1", "E2", "E3", "SE1", "SE2"]
        tally = RelationTally(names)
        S, M = ElemGen.short, self.gen_matrix
        lp = self.lam_pow
        pairs = self.short_pairs()
        hb = self.theta_hb
        singles = sample_values(ring, 1, trials, rng)
        doubles = sample_values(ring, 2, trials, rng)
        params = {s: self._param_samples(s, trials, rng) for s in (1, -1)}
        extra_pairs = {
            s: [(h1, h2) for h1 in params[s] for h2 in params[s]][: max(trials, 9) ** 2] for s in (1, -1)
        }

        def E(i: int, h: HeisElem) -> ElemGen:
            return ElemGen.extra(i, h.x, h.y)

        for (i, j) in pairs:
            for (x,) in singles:
                tally.record("S1", M(S(i, j, x)) == M(S(*self.flip_short(i, j, x))), (i, j, x))
            for x, y in doubles:
                tally.record("S2", M(S(i, j, x)) @ M(S(i, j, y)) == M(S(i, j, x + y)), (i, j, x, y))
                w = x * y - lp((-1 - eps(i)) // 2) * y.conj() * x.conj() * lp((1 - eps(i)) // 2)
                tally.record("S5", self._comm(S(i, j, x), S(j, -i, y)) == self._raw_extra(i, ring.zero, w), (i, j, x, y))
                for (k, l) in pairs:
                    if k not in (j, -i) and l not in (i, -j):
                        tally.record("S3", self._comm(S(i, j, x), S(k, l, y)).is_identity(), (i, j, k, l, x, y))
                for k in hb:
                    if k not in (i, -i, j, -j):
                        tally.record("S4", self._comm(S(i, j, x), S(j, k, y)) == M(S(i, k, x * y)), (i, j, k, x, y))
            for (x,) in singles:
                for k in hb:
                    if k in (j, -i):
                        continue
                    for h in params[-eps(k)]:
                        tally.record("SE1", self._comm(S(i, j, x), E(k, h)).is_identity(), (i, j, k, x, h))
                for h in params[-eps(j)]:
                    t = lp((eps(j) - 1) // 2) * x.conj() * lp((1 - eps(i)) // 2)
                    rhs = self.short_matrix(j, -i, h.y * t) @ self._raw_extra(i, h.x * t, x * h.y * t)
                    tally.record("SE2", self._comm(S(i, j, x), E(j, h)) == rhs, (i, j, x, h))
        for i in hb:
            sign = -eps(i)
            coeff = lp(-(1 + eps(i)) // 2)
            for h1, h2 in extra_pairs[sign]:
                h12 = self.heis(sign).add(h1, h2)
                tally.record("E1", M(E(i, h1)) @ M(E(i, h2)) == self._raw_extra(i, h12.x, h12.y), (i, h1, h2))
                w = -(coeff * (h1.x.conj() * mu * h2.x - h2.x.conj() * mu * h1.x))
                tally.record("E3", self._comm(E(i, h1), E(i, h2)) == self._raw_extra(i, ring.zero, w), (i, h1, h2))
            for j in hb:
                if j in (i, -i):
                    continue
                for h1 in params[sign]:
                    for h2 in params[-eps(j)]:
                        rhs = self.short_matrix(i, -j, -(coeff * h1.x.conj() * mu * h2.x))
                        tally.record("E2", self._comm(E(i, h1), E(j, h2)) == rhs, (i, j, h1, h2))
        logger.info(f"Unitary relation suite over {ring.describe()}: passed={tally.passed}")
        return tally.results


def ortho_as_unitary_context(ring: Ring, n: int) -> UnitaryGroup:
    """
    The unitary context in which O_{2n+1}(R) appears: trivial involution,
    lambda = 1, mu = 2 and Delta = {(x, -x^2)}.

    Raises:
        FormParameterError: when the ring does not carry that Hermitian data
    """
    if ring.conj_on or ring.lam != ring.one or ring.mu != ring(2):
        raise FormParameterError("needs trivial involution, lambda = 1 and mu = 2")
    return UnitaryGroup(ring, n, ortho_delta(ring))
