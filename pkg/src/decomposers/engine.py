# src/decomposers/engine.py
"""
Machinery shared by the orthogonal and unitary decomposers.

A *view* is a conjugate ^W sigma together with its expression as a product
of sigma-conjugates. An *atom* attaches a ring value v to a view and produces,
for any short root position (a, b) and coefficient c, a certificate whose
value is T_ab(c v). Every realisation is checked against the matrix it
claims before it is handed on.
"""
import itertools
import logging
from abc import ABC, abstractmethod
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra.ring_core import RingElem
from src.algebra.theta_matrix import ThetaMatrix, ThetaVector, eps
from src.certificates.certificate import (
    Cert,
    Certificate,
    check_kind_indices,
    check_param,
    comm_left,
    comm_right,
    concat,
    expected_target,
    kind_bound,
)
from src.groups.generators import ElemGen, Word
from src.groups.group_context import GroupContext, MonomialAction
from src.utils.errors import DecompositionError, FormParameterError, NotInGroupError

logger = logging.getLogger(__name__)

Pos = Tuple[int, int]

# longest chain of P_pq searched when moving a root
MAX_P_STEPS = 6


class Relocator:
    """Breadth-first search for monomial conjugators P_pq ... moving roots."""

    def __init__(self, group: GroupContext):
        self.group = group
        self.ring = group.ring
        self._moves: Optional[List[Tuple[Word, MonomialAction]]] = None
        self._short: Dict[tuple, Tuple[Word, RingElem]] = {}
        self._extra: Dict[tuple, Tuple[Word, RingElem]] = {}

    @property
    def moves(self) -> List[Tuple[Word, MonomialAction]]:
        if self._moves is None:
            group = self.group
            self._moves = [
                (group.p_word(p, q), group.monomial_action(group.p_perm(p, q))) for p, q in group.short_pairs()
            ]
        return self._moves

    def _inv(self, x: RingElem) -> RingElem:
        return self.ring.unit_inverse_strict(x)

    def short_path(self, src: Pos, dst: Pos, exact: bool = False) -> Tuple[Word, RingElem]:
        """
        A word W and a unit s with ^W T_src(x) = T_dst(s x) for all x.

        Args:
            src: Short root position to move
            dst: Wanted position
            exact: Require s == 1

        Raises:
            DecompositionError: when no word of at most MAX_P_STEPS factors exists
        """
        key = (src, dst, exact)
        if key in self._short:
            return self._short[key]
        one = self.ring.one
        if src == dst:
            self._short[key] = ((), one)
            return (), one
        start = (src[0], src[1], one)
        queue = deque([(start, (), 0)])
        seen = {start if exact else src}
        while queue:
            (a, b, s), word, depth = queue.popleft()
            if depth >= MAX_P_STEPS:
                continue
            for pword, act in self.moves:
                na, nb = act.perm[a], act.perm[b]
                ns = act.scale[a] * s * self._inv(act.scale[b])
                nword = pword + word
                if (na, nb) == dst and (ns == one or not exact):
                    self._check_short(nword, src, dst, ns)
                    self._short[key] = (nword, ns)
                    logger.debug(f"Relocation {src} -> {dst}: {depth + 1} P-steps, scale {ns}")
                    return nword, ns
                state = (na, nb, ns)
                marker = state if exact else (na, nb)
                if marker not in seen:
                    seen.add(marker)
                    queue.append((state, nword, depth + 1))
        raise DecompositionError(f"no monomial conjugator moves {src} to {dst}")

    def _check_short(self, word: Word, src: Pos, dst: Pos, s: RingElem) -> None:
        group = self.group
        w = group.word_matrix(word)
        w_inv = group.word_matrix(group.word_inverse(word))
        for x in (self.ring.one, self.ring.elements[-1]):
            moved = w @ group.short_matrix(src[0], src[1], x) @ w_inv
            if moved != group.short_matrix(dst[0], dst[1], s * x):
                raise DecompositionError(f"relocation word {src} -> {dst} fails at x={x}")

    def extra_path(self, src: int, dst: int, want: Optional[RingElem] = None) -> Tuple[Word, RingElem]:
        """
        A word W and a unit t with ^W T_src(x, y) = T_dst(x, t y).

        For the orthogonal group the second component is implied and t is 1.
        ``want`` pins t.
        """
        key = (src, dst, want)
        if key in self._extra:
            return self._extra[key]
        one = self.ring.one
        if src == dst and want in (None, one):
            self._extra[key] = ((), one)
            return (), one
        start = (src, one, one)
        queue = deque([(start, (), 0)])
        seen = {start if want is not None else (src, one)}
        while queue:
            (i, sx, sy), word, depth = queue.popleft()
            if depth >= MAX_P_STEPS:
                continue
            for pword, act in self.moves:
                ni = act.perm[i]
                w_inv = self._inv(act.scale[-i])
                nsx = sx * w_inv
                nsy = act.scale[i] * sy * w_inv
                nword = pword + word
                if ni == dst and nsx == one and (want is None or nsy == want):
                    self._check_extra(nword, src, dst, nsy)
                    self._extra[key] = (nword, nsy)
                    logger.debug(f"Extra relocation {src} -> {dst}: {depth + 1} P-steps")
                    return nword, nsy
                marker = (ni, nsx, nsy) if want is not None else (ni, nsx)
                if marker not in seen:
                    seen.add(marker)
                    queue.append(((ni, nsx, nsy), nword, depth + 1))
        raise DecompositionError(f"no monomial conjugator moves T_{src} to T_{dst}")

    def _check_extra(self, word: Word, src: int, dst: int, t: RingElem) -> None:
        group = self.group
        w = group.word_matrix(word)
        w_inv = group.word_matrix(group.word_inverse(word))
        if group.tag == "unitary":
            samples = group.delta_for(-eps(src)).sorted_elements()[-2:]
            pairs = [(h.x, h.y) for h in samples]
        else:
            pairs = [(x, None) for x in (self.ring.one, self.ring.elements[-1])]
        for x, y in pairs:
            moved = w @ group.extra_matrix(ElemGen.extra(src, x, y)) @ w_inv
            want = group.extra_matrix(ElemGen.extra(dst, x, None if y is None else t * y))
            if moved != want:
                raise DecompositionError(f"extra relocation word {src} -> {dst} fails at ({x}, {y})")


class SigmaView:
    """A conjugate of sigma with its product of sigma-conjugates."""

    def __init__(self, base: Cert, label: str):
        self.base = base
        self.label = label
        self.atoms: Dict[tuple, "Atom"] = {}
        self._children: Dict[Word, "SigmaView"] = {}

    @property
    def value(self) -> ThetaMatrix:
        return self.base.value

    @property
    def inv(self) -> ThetaMatrix:
        return self.base.inv

    def __getitem__(self, ij: Pos) -> RingElem:
        return self.base.value[ij]

    def inv_entry(self, i: int, j: int) -> RingElem:
        return self.base.inv[i, j]

    def conjugated(self, word: Sequence[ElemGen], label: str = "") -> "SigmaView":
        word = tuple(word)
        if not word:
            return self
        child = self._children.get(word)
        if child is None:
            child = SigmaView(self.base.conj(word), label or f"^W{self.label}")
            self._children[word] = child
        return child

    def __repr__(self) -> str:
        return f"SigmaView({self.label}, weight={len(self.base)})"


class Atom(ABC):
    """Recipe for T_ab(c * value) at any short root position."""

    def __init__(self, engine: "Decomposer", value: RingElem, cost: int, label: str):
        self.engine = engine
        self.value = value
        self.cost = cost
        self.label = label

    @abstractmethod
    def build(self, pos: Pos, coeff: RingElem) -> Cert:
        """Unchecked construction of T_pos(coeff * value)."""

    def realize(self, pos: Pos, coeff: RingElem) -> Cert:
        cert = self.build(pos, coeff)
        self.engine.expect_short(cert, pos, coeff * self.value, self.label)
        return cert

    def realize_value(self, pos: Pos, target: RingElem) -> Cert:
        coeff = self.engine.ring.solve(self.value, target)
        if coeff is None:
            raise DecompositionError(f"{target} is not a multiple of {self.label} = {self.value}")
        return self.realize(pos, coeff)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label}, value={self.value}, cost={self.cost})"


class CommutatorAtom(Atom):
    """
    An inner certificate C with [T_outer(y), C] = T_native(y * kappa) for all y.

    kappa is read off the commutator at y = 1; other positions are reached by
    conjugating with a monomial word.
    """

    def __init__(self, engine: "Decomposer", inner: Cert, outer: Pos, native: Pos, label: str):
        self.inner = inner
        self.outer = outer
        self.native = native
        comm = comm_left((engine.gen_short(outer, engine.ring.one),), inner)
        kappa = comm.value[native]
        engine.expect(comm.value, engine.short_matrix(native, kappa), f"{label}: commutator is not T{native}")
        super().__init__(engine, kappa, 2 * len(inner), label)

    def build(self, pos: Pos, coeff: RingElem) -> Cert:
        engine = self.engine
        word, s = engine.relocator.short_path(self.native, pos)
        y = coeff * engine.ring.unit_inverse_strict(s)
        return comm_left((engine.gen_short(self.outer, y),), self.inner).conj(word)


class ConjAtom(Atom):
    """conj(v) from an atom for v, through T_ab(x) = T_{-b,-a}(x')."""

    def __init__(self, engine: "Decomposer", base: Atom):
        self.base = base
        super().__init__(engine, base.value.conj(), base.cost, f"conj {base.label}")

    def build(self, pos: Pos, coeff: RingElem) -> Cert:
        a, b = pos
        fa, fb, x = self.engine.group.flip_short(a, b, coeff)
        return self.base.build((fa, fb), x)


class CorrectedAtom(Atom):
    """
    The part V of an entry K of a conjugated view that is not made of
    off-diagonal entries of the original view: K = V + sum d_t v_t, so
    T(cV) = T(cK) * prod T(-c d_t v_t).
    """

    def __init__(
        self,
        engine: "Decomposer",
        key: Atom,
        key_entry: RingElem,
        corrections: List[Tuple[RingElem, RingElem, Atom]],
        value: RingElem,
        label: str,
    ):
        self.key = key
        self.key_entry = key_entry
        self.corrections = corrections
        cost = key.cost + sum(atom.cost for _, _, atom in corrections)
        super().__init__(engine, value, cost, label)

    def build(self, pos: Pos, coeff: RingElem) -> Cert:
        parts = [self.key.realize_value(pos, coeff * self.key_entry)]
        for d, entry, atom in self.corrections:
            parts.append(atom.realize_value(pos, -(coeff * d * entry)))
        return concat(self.engine.group, parts)


class SumAtom(Atom):
    def __init__(self, engine: "Decomposer", parts: Sequence[Atom], label: str):
        self.parts = list(parts)
        value = engine.ring.zero
        for atom in self.parts:
            value = value + atom.value
        super().__init__(engine, value, sum(a.cost for a in self.parts), label)

    def build(self, pos: Pos, coeff: RingElem) -> Cert:
        return concat(self.engine.group, [atom.realize(pos, coeff) for atom in self.parts])


class Decomposer(ABC):
    """Atoms, views and elementary identities over one sigma."""

    def __init__(self, group: GroupContext, sigma: ThetaMatrix):
        self.group = group
        self.ring = group.ring
        self.n = group.n
        self.sigma = sigma
        self.root = SigmaView(Cert.of_sigma(group, sigma), "sigma")
        self.relocator = Relocator(group)

    # checks -------------------------------------------------------------------
    def expect(self, got: ThetaMatrix, want: ThetaMatrix, what: str) -> None:
        if got != want:
            raise DecompositionError(f"{what}: matrix identity failed")

    def expect_short(self, cert: Cert, pos: Pos, x: RingElem, what: str) -> None:
        self.expect(cert.value, self.short_matrix(pos, x), f"{what} at {pos}")

    def expect_elem(self, got: RingElem, want: RingElem, what: str) -> None:
        if got != want:
            raise DecompositionError(f"{what}: got {got}, expected {want}")

    def check_row_two(self, view: SigmaView, tau: Word, what: str) -> None:
        """xi = view tau^-1 view^-1 fixes row 2 and, off row 0, column -2."""
        group = self.group
        xi = view.value @ group.word_matrix(group.word_inverse(tau)) @ view.inv
        e = group.identity()
        column_moved = any(xi[i, -2] != e[i, -2] for i in group.theta_hb)
        if xi.row(2) != e.row(2) or column_moved:
            raise DecompositionError(f"{what}: xi moves row 2 or column -2")

    # generators ---------------------------------------------------------------
    def gen_short(self, pos: Pos, x) -> ElemGen:
        return self.group.short(pos[0], pos[1], x)

    def short_matrix(self, pos: Pos, x) -> ThetaMatrix:
        return self.group.short_matrix(pos[0], pos[1], self.ring(x))

    def aux_index(self, *avoid: int, sign: Optional[int] = None) -> int:
        """First index of Theta_hb outside +-avoid (with the given sign when asked)."""
        banned = {a for a in avoid} | {-a for a in avoid}
        for p in self.group.theta_hb:
            if p in banned or (sign is not None and eps(p) != sign):
                continue
            return p
        raise DecompositionError(f"no auxiliary index avoiding {avoid}")

    # views --------------------------------------------------------------------
    def entry_view(self, view: SigmaView, pos: Pos) -> SigmaView:
        """A conjugate of ``view`` whose (2, 3) entry is a unit multiple of view[pos]."""
        word, _ = self.relocator.short_path(pos, (2, 3))
        return view.conjugated(word, f"{view.label}@{pos}")

    def column_steps(self, j: int) -> List[Pos]:
        """P_ij conjugations bringing column j to column 1."""
        if j == 1:
            return []
        if j == -1:
            return [(2, -1), (1, 2)]
        return [(1, j)]

    def column_view(self, view: SigmaView, j: int) -> Tuple[SigmaView, List[Tuple[SigmaView, Pos]], RingElem]:
        """
        Conjugate ``view`` so that its column j becomes column 1.

        Returns:
            (moved view, [(view before the step, (i, j)) per step], w) with
            P e_j = w e_1 for the total monomial P
        """
        group = self.group
        steps = []
        cur = view
        total = group.identity()
        for (i, jj) in self.column_steps(j):
            steps.append((cur, (i, jj)))
            cur = cur.conjugated(group.p_word(i, jj), f"{cur.label}|P{i}{jj}")
            total = group.p_perm(i, jj) @ total
        action = group.monomial_action(total)
        if action.perm[j] != 1:
            raise DecompositionError(f"column path for {j} does not end at column 1")
        return cur, steps, action.scale[j]

    # atoms --------------------------------------------------------------------
    @abstractmethod
    def entry_at_23(self, view: SigmaView) -> Atom:
        """Atom for view[2, 3] (kind i core)."""

    def entry(self, view: SigmaView, a: int, b: int) -> Atom:
        """Atom whose value is a unit multiple of view[a, b], a != +-b."""
        key = ("entry", a, b)
        if key not in view.atoms:
            moved = self.entry_view(view, (a, b))
            core = moved.atoms.get(("core",))
            if core is None:
                core = self.entry_at_23(moved)
                moved.atoms[("core",)] = core
            if self.ring.unit_ratio(core.value, view[a, b]) is None:
                raise DecompositionError(f"entry atom for ({a},{b}) does not carry the entry")
            view.atoms[key] = core
        return view.atoms[key]

    def conj_atom(self, atom: Atom) -> Atom:
        cached = getattr(atom, "_conj", None)
        if cached is None:
            cached = ConjAtom(self, atom)
            atom._conj = cached
        return cached

    def corrected_entry(self, view: SigmaView, g_word: Word, key: Pos, label: str) -> CorrectedAtom:
        """
        Atom for the diagonal, anti-diagonal and 0-row/column part of entry
        ``key`` of ^g view, the remaining terms removed with entry atoms of view.
        """
        group = self.group
        g = group.word_matrix(g_word)
        g_inv = group.word_matrix(group.word_inverse(g_word))
        p, q = key
        value = self.ring.zero
        corrections = []
        for a in group.theta:
            ga = g[p, a]
            if ga.is_zero():
                continue
            for b in group.theta:
                gb = g_inv[b, q]
                if gb.is_zero():
                    continue
                d = ga * gb
                if a == 0 or b == 0 or a == b or a == -b:
                    value = value + d * view[a, b]
                else:
                    corrections.append((d, view[a, b], self.entry(view, a, b)))
        moved = view.conjugated(g_word, f"^g{view.label}")
        key_entry = moved[p, q]
        total = value
        for d, entry, _ in corrections:
            total = total + d * entry
        self.expect_elem(total, key_entry, f"{label}: entry expansion")
        return CorrectedAtom(self, self.entry(moved, p, q), key_entry, corrections, value, label)

    def anti_diag(self, view: SigmaView, i: int) -> Atom:
        """view[i, -i] through ^{T_ji(1)} view at (j, -i)."""
        key = ("anti", i)
        if key not in view.atoms:
            j = self.aux_index(i)
            atom = self.corrected_entry(view, (self.gen_short((j, i), 1),), (j, -i), f"{view.label}[{i},{-i}]")
            self.expect_elem(atom.value, view[i, -i], "anti-diagonal value")
            view.atoms[key] = atom
        return view.atoms[key]

    def diag_diff(self, view: SigmaView, i: int, j: int) -> Atom:
        """view[i, i] - view[j, j] through ^{T_ji(1)} view at (j, i)."""
        key = ("diag", i, j)
        if key not in view.atoms:
            atom = self.corrected_entry(view, (self.gen_short((j, i), 1),), (j, i), f"{view.label}[{i}{i}-{j}{j}]")
            self.expect_elem(atom.value, view[i, i] - view[j, j], "diagonal difference")
            view.atoms[key] = atom
        return view.atoms[key]

    def diag_anti(self, view: SigmaView, i: int) -> Atom:
        """view[i, i] - view[-i, -i] as two diagonal differences."""
        key = ("diag_anti", i)
        if key not in view.atoms:
            j = self.aux_index(i)
            parts = [self.diag_diff(view, i, j), self.diag_diff(view, j, -i)]
            view.atoms[key] = SumAtom(self, parts, f"{view.label}[{i}{i}-({-i})({-i})]")
        return view.atoms[key]

    @abstractmethod
    def row_zero(self, view: SigmaView, i: int, a: Optional[RingElem] = None) -> Atom:
        """Atom for the kind iii value at row i."""

    @abstractmethod
    def zero_col(self, view: SigmaView, j: int, a: Optional[RingElem] = None) -> Atom:
        """Atom for the kind iv value at column j."""

    # products of atoms ----------------------------------------------------------
    def realize_combination(self, atoms: Sequence[Atom], pos: Pos, target: RingElem, what: str) -> Cert:
        """T_pos(target) with target in the span of the atom values."""
        coeffs = self.ring.combination([a.value for a in atoms], target)
        if coeffs is None:
            raise DecompositionError(f"{what}: {target} is not in the span of {[a.label for a in atoms]}")
        return concat(self.group, [atom.realize(pos, c) for atom, c in zip(atoms, coeffs)])

    def skew(self, k: int, x: RingElem) -> RingElem:
        """Second component of [T_kp(x), T_{p,-k}(1)]."""
        e = eps(k)
        lp = self.ring.lambda_power
        return x - lp((-1 - e) // 2) * x.conj() * lp((1 - e) // 2)

    def long_root(self, k: int, atoms: Sequence[Atom], target: RingElem, what: str) -> Cert:
        """
        T_k(0, target) as a product of commutators [T_kp(c_t v_t), T_{p,-k}(1)],
        target = sum skew(c_t v_t).

        The coefficients are found by trying all |R|^m tuples for m atoms;
        the search is exponential in m and meant for the small rings used here.
        """
        values = [a.value for a in atoms]
        coeffs = None
        for cand in itertools.product(self.ring.elements, repeat=len(values)):
            y = self.ring.zero
            for c, v in zip(cand, values):
                y = y + c * v
            if self.skew(k, y) == target:
                coeffs = cand
                break
        if coeffs is None:
            raise DecompositionError(f"{what}: (0, {target}) is not reachable at index {k}")
        p = self.aux_index(k)
        closing = (self.gen_short((p, -k), 1),)
        parts = [comm_right(atom.realize((k, p), c), closing) for atom, c in zip(atoms, coeffs)]
        cert = concat(self.group, parts)
        self.expect(cert.value, self.extra_raw(k, self.ring.zero, target), f"{what}: long root")
        return cert

    def extra_raw(self, k: int, x: RingElem, y: Optional[RingElem] = None) -> ThetaMatrix:
        return self.group.extra_matrix(ElemGen.extra(k, x, y))

    def relocate_extra(
        self, cert: Cert, src: int, dst: int, want: Optional[RingElem] = None
    ) -> Tuple[Cert, RingElem]:
        """^W of a T_src certificate, W moving T_src to T_dst; returns the y-scale too."""
        word, t = self.relocator.extra_path(src, dst, want)
        return cert.conj(word), t

    def residual_extra(self, mat: ThetaMatrix, k: int, what: str) -> ElemGen:
        """Read T_k(...) off a matrix that must be one."""
        gen = self.group.extra_from_matrix(mat, k)
        self.expect(mat, self.group.extra_matrix(gen), f"{what}: residual is not T_{k}")
        return gen

    def column_factor(self, mat: ThetaMatrix, k: int) -> Tuple[List[Tuple[int, RingElem]], ThetaMatrix]:
        """
        Split mat = (prod_p T_{p,-k}(v_p)) * R over p outside {0, +-k} in Theta
        order, v_p = mat[p, -k]; returns the coefficients and R.
        """
        group = self.group
        coeffs = [(p, mat[p, -k]) for p in group.theta_hb if p not in (k, -k)]
        rest = mat
        for p, v in coeffs:
            rest = group.short_matrix(p, -k, -v) @ rest
        return coeffs, rest

    # first column reduction -----------------------------------------------------
    @abstractmethod
    def step_one_vector(self, rho: SigmaView) -> ThetaVector:
        """u' with u = rho^-1 u' isotropic and u_-1 = 0."""

    @abstractmethod
    def step_one_atoms(self, rho: SigmaView, p: int) -> List[Atom]:
        """Atoms spanning the (p, -3) entry left over in zeta."""

    @abstractmethod
    def lead_inverse(self, b: RingElem, w: RingElem) -> ThetaMatrix:
        """Inverse of the leading factor of zeta read off row 1."""

    @abstractmethod
    def lead_certs(self, atoms: Sequence[Atom], b: RingElem, w: RingElem) -> List[Cert]:
        """Certificates for the inverse of the leading factor."""

    def step_one_core(self, rho: SigmaView, x: RingElem) -> Tuple[Cert, ElemGen]:
        """
        Certificate for T_3(r) built from column 1 of rho, with r read off
        the matrix it produced.

        Args:
            rho: View whose column 1 is being reduced
            x: Coefficient of the T_{2,-3} commutator

        Returns:
            (certificate, residual generator r)
        """
        group = self.group
        u = rho.inv @ self.step_one_vector(rho)
        try:
            plus = group.t_star_factors(u)
            for g in plus:
                group.gen_matrix(g)
        except FormParameterError as exc:
            raise DecompositionError(f"step one: T*(u) is not elementary: {exc}") from exc
        minus = group.word_inverse(plus)
        xi = rho.value @ group.word_matrix(minus) @ rho.inv

        anchor = self.entry(rho, -3, 1)
        r31 = rho[-3, 1]
        tau = concat(
            group,
            [
                anchor.realize_value((-3, 1), r31 * rho[2, 1]),
                anchor.realize_value((-3, 2), -(r31 * rho[1, 1])),
            ],
        )
        cleared = xi @ tau.value
        if not (cleared[-3, 1].is_zero() and cleared[-3, 2].is_zero()):
            raise DecompositionError("step one: row -3 of xi tau is not cleared")

        zeta = comm_left((self.gen_short((2, -3), -x),), comm_left(plus, rho.base) + tau).conj(minus)
        z = zeta.value
        b, w = z[1, -2], z[1, -1]
        coeffs, rest = self.column_factor(self.lead_inverse(b, w) @ z, 3)
        residual = self.residual_extra(rest, 3, "step one")

        parts = [
            self.realize_combination(self.step_one_atoms(rho, p), (p, -3), -v, f"step one ({p},-3)")
            for p, v in reversed(coeffs)
        ]
        parts += self.lead_certs([self.entry(rho, 2, 3), self.entry(rho, 2, 1)], b, w)
        parts.append(zeta)
        cert = concat(group, parts)
        self.expect(cert.value, group.extra_matrix(residual), "step one product")
        return cert, residual

    # kinds ------------------------------------------------------------------------
    def short_kind_atom(self, kind: str, idx: Dict[str, int], a: Optional[RingElem]) -> Atom:
        root = self.root
        if kind == "i":
            return self.entry(root, idx["i"], idx["j"])
        if kind == "ii":
            return self.anti_diag(root, idx["i"])
        if kind == "iii":
            return self.row_zero(root, idx["i"], a)
        if kind == "iv":
            return self.zero_col(root, idx["j"], a)
        if kind == "v":
            return self.diag_diff(root, idx["i"], idx["j"])
        return self.diag_anti(root, idx["i"])

    @abstractmethod
    def extra_kind(
        self, kind: str, idx: Dict[str, int], a: Optional[RingElem]
    ) -> Tuple[Cert, Optional[RingElem], Dict[str, int]]:
        """(certificate, x_out, sub-counts) for kinds vii and viii."""

    def build(self, kind: str, indices: Dict[str, int], a: Optional[RingElem] = None) -> Certificate:
        """
        Decompose the elementary matrix of one kind.

        Raises:
            DecompositionError: an internal identity failed or the bound was exceeded
        """
        group = self.group
        x_out = None
        sub_counts: Dict[str, int] = {}
        if kind in ("vii", "viii"):
            cert, x_out, sub_counts = self.extra_kind(kind, indices, a)
        else:
            wanted = expected_target(group, self.sigma, kind, indices, a)
            cert = self.short_kind_atom(kind, indices, a).realize_value((indices["k"], indices["l"]), wanted.x)
        target = expected_target(group, self.sigma, kind, indices, a, x_out)
        self.expect(cert.value, group.gen_matrix(target), f"kind {kind} product")
        bound = kind_bound(group.tag, kind, self.n)
        if len(cert) > bound:
            raise DecompositionError(f"kind {kind}: {len(cert)} factors exceed the bound {bound}")
        logger.info(f"{group.tag} kind {kind} {dict(indices)}: {len(cert)} factors (bound {bound})")
        return Certificate(
            group=group,
            sigma=self.sigma,
            kind=kind,
            indices=dict(indices),
            target=target,
            bound=bound,
            factors=cert.factors,
            a=a,
            x_out=x_out,
            sub_counts=sub_counts,
        )


def prepare(group: GroupContext, sigma: ThetaMatrix, kind: str, indices: Dict[str, int], a: Optional[RingElem]) -> None:
    """Input checks shared by both decomposers."""
    check_kind_indices(group, kind, indices)
    check_param(group, kind, a)
    membership = group.member(sigma)
    if not membership.ok:
        raise NotInGroupError(f"sigma is not in the {group.tag} group: {membership.reason}")
