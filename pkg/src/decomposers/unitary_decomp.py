# src/decomposers/unitary_decomp.py
"""
Elementary unitary matrices as short products of elementary
sigma-conjugates, sigma in U_{2n+1}(R, Delta).

The short root core works in four steps. Steps one to three give nested
commutators carrying conj(s23) s21, conj(s23) s2,-1 and conj(s23) s22; step
four conjugates [sigma^-1, T_12(-conj(s23))] so that step three lands on a
value congruent to s23 and removes the difference with the first three.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra.ring_core import Ring, RingElem
from src.algebra.theta_matrix import ThetaMatrix, ThetaVector, eps
from src.certificates.certificate import Cert, Certificate, column_bound, comm_left, comm_right, concat
from src.decomposers.engine import Atom, CommutatorAtom, CorrectedAtom, Decomposer, SigmaView, prepare
from src.groups.generators import ElemGen, Word
from src.groups.group_context import GroupContext
from src.groups.hermitian_form import HeisElem
from src.utils.errors import DecompositionError, FormParameterError, InvalidIndexError

logger = logging.getLogger(__name__)


@dataclass
class ResidueCoefficients:
    """
    d = conj(t12) t11 - s23 written as
    c1 g1 + c2 conj(g1) + c3 g2 + c4 conj(g2) + c5 conj(g3)
    with g1 = conj(s23) s21, g2 = conj(s23) s2,-1, g3 = conj(s23) s22.
    """

    g1: RingElem
    g2: RingElem
    g3: RingElem
    c1: RingElem
    c2: RingElem
    c3: RingElem
    c4: RingElem
    c5: RingElem
    main: RingElem
    d: RingElem

    def combination(self) -> RingElem:
        return (
            self.c1 * self.g1
            + self.c2 * self.g1.conj()
            + self.c3 * self.g2
            + self.c4 * self.g2.conj()
            + self.c5 * self.g3.conj()
        )


def residue_coefficients(ring: Ring, s: ThetaMatrix, s_inv: ThetaMatrix, tau: ThetaMatrix) -> ResidueCoefficients:
    """
    Coefficients expressing the step four residue through the step one to
    three values.

    Args:
        ring: Commutative Hermitian ring
        s: The view sigma
        s_inv: Its inverse
        tau: [sigma^-1, T_12(-conj(s23))]

    Raises:
        DecompositionError: when tau11, tau12 or the combination disagree
    """
    lam, lam_bar = ring.lam, ring.lam_bar
    one = ring.one
    t11, t12 = tau[1, 1], tau[1, 2]
    c23 = s[2, 3].conj()
    g1 = c23 * s[2, 1]
    g2 = c23 * s[2, -1]
    g3 = c23 * s[2, 2]
    p11 = s_inv[1, 1]

    if t11 - one != -(p11 * g1) + lam_bar * g2.conj() * s[-1, 1]:
        raise DecompositionError("tau11 expansion failed")
    if t12 - t11 * c23 != -(p11 * g3) + lam_bar * g2.conj() * s[-1, 2]:
        raise DecompositionError("tau12 expansion failed")

    main = t12.conj() * t11
    out = ResidueCoefficients(
        g1=g1,
        g2=g2,
        g3=g3,
        c1=-(s[2, 3] * t11.conj() * p11),
        c2=-(s[2, 3] * p11.conj()),
        c3=lam * s[-1, 2].conj() * t11 + s[2, 3] * lam * s[-1, 1].conj(),
        c4=s[2, 3] * t11.conj() * lam_bar * s[-1, 1],
        c5=-(p11.conj() * t11),
        main=main,
        d=main - s[2, 3],
    )
    if out.combination() != out.d:
        raise DecompositionError(f"residue {out.d} differs from its expansion {out.combination()}")
    return out


class UnitaryDecomposer(Decomposer):
    """Decompositions over one sigma in U_{2n+1}(R, Delta)."""

    def extra_gen(self, i: int, x: RingElem, y: RingElem) -> ElemGen:
        try:
            return self.group.extra(i, x, y)
        except FormParameterError as exc:
            raise DecompositionError(f"T_{i}({x}, {y}) is not elementary: {exc}") from exc

    # steps one to three ---------------------------------------------------------------
    def _tau_commutator(self, view: SigmaView, tau: Word, pos) -> Cert:
        """^{tau^-1}[T_pos(1), [tau, view]]."""
        inner = comm_left(tau, view.base)
        return comm_left((self.gen_short(pos, 1),), inner).conj(self.group.word_inverse(tau))

    def step_commutator(self, view: SigmaView, step: int) -> Atom:
        key = ("step", step)
        if key in view.atoms:
            return view.atoms[key]
        s = view
        S = ElemGen.short
        zero, lb = self.ring.zero, self.ring.lam_bar
        c23, c22, c2m1 = s[2, 3].conj(), s[2, 2].conj(), s[2, -1].conj()
        label = f"{view.label}:step{step}"
        if step == 1:
            tau = (
                S(1, -2, c23 * s[2, 3]),
                S(3, -2, -(c23 * s[2, 1])),
                S(3, -1, lb * c23 * s[2, 2]),
                self.extra_gen(3, zero, c22 * s[2, 1] - lb * s[2, 1].conj() * s[2, 2]),
            )
            self.check_row_two(view, tau, label)
            zeta = self._tau_commutator(view, tau, (-2, -1))
            inner = comm_left((self.gen_short((-2, 3), 1),), zeta)
            atom = CommutatorAtom(self, inner, outer=(-1, 3), native=(-2, 3), label=label)
            ref = c23 * s[2, 1]
        elif step == 2:
            tau = (
                S(2, 1, c23 * s[2, 3]),
                S(3, 1, -(c23 * s[2, 2])),
                S(3, -2, c23 * s[2, -1]),
                self.extra_gen(3, zero, -(c22 * s[2, -1]) + lb * c2m1 * s[2, 2]),
            )
            self.check_row_two(view, tau, label)
            zeta = self._tau_commutator(view, tau, (-1, 2))
            inner = comm_left((self.gen_short((1, 2), 1),), zeta)
            atom = CommutatorAtom(self, inner, outer=(-1, 3), native=(-1, 2), label=label)
            ref = c23 * s[2, -1]
        else:
            group = self.group
            tau = (
                S(2, 1, -(c22 * s[2, 3])),
                S(3, 1, c22 * s[2, 2]),
                S(2, -3, c22 * s[2, -1]),
                self.extra_gen(2, zero, -(c23 * s[2, -1]) + lb * c2m1 * s[2, 3]),
            )
            self.check_row_two(view, tau, label)
            t32 = (self.gen_short((3, 2), 1),)
            zeta = self._tau_commutator(view, tau, (3, 2))
            psi = group.word_inverse(tau) + t32 + tau + group.word_inverse(t32)
            chi = comm_left((self.gen_short((1, 2), 1),), zeta).conj(group.word_inverse(psi))
            inner = comm_left((self.gen_short((2, -1), 1),), chi)
            atom = CommutatorAtom(self, inner, outer=(-2, 3), native=(-2, -1), label=label)
            ref = (c23 * s[2, 2]).conj()
        if self.ring.unit_ratio(atom.value, ref) is None:
            raise DecompositionError(f"{label}: commutator value {atom.value} is not a unit multiple of {ref}")
        view.atoms[key] = atom
        return atom

    # short root atoms -------------------------------------------------------------------
    def entry_at_23(self, view: SigmaView) -> Atom:
        s = view
        tau = s.base.inverse() + s.base.conj((self.gen_short((1, 2), -s[2, 3].conj()),))
        group = self.group
        zeta_view = SigmaView(tau.conj(group.p_word(1, 3) + group.p_word(2, 1)), f"{view.label}:zeta")
        main = self.conj_atom(self.step_commutator(zeta_view, 3))
        main_value = zeta_view[2, 3].conj() * zeta_view[2, 2]
        self.expect_elem(main_value, tau.value[1, 2].conj() * tau.value[1, 1], "zeta entries")

        rc = residue_coefficients(self.ring, s.value, s.inv, tau.value)
        one, two, three = (self.step_commutator(view, k) for k in (1, 2, 3))
        corrections = [
            (rc.c1, rc.g1, one),
            (rc.c2, rc.g1.conj(), self.conj_atom(one)),
            (rc.c3, rc.g2, two),
            (rc.c4, rc.g2.conj(), self.conj_atom(two)),
            (rc.c5, rc.g3.conj(), three),
        ]
        return CorrectedAtom(self, main, main_value, corrections, s[2, 3], f"{view.label}[2,3]")

    def row_zero(self, view: SigmaView, i: int, a: Optional[RingElem] = None) -> Atom:
        """view[i, 0] a from entry (i, j) of ^{T_-j(-(a, b))} view."""
        key = ("row0", i, a)
        if key not in view.atoms:
            group = self.group
            j = self.aux_index(i, sign=1)
            b = group.delta.complete(a)
            if b is None:
                raise FormParameterError(f"{a} has no completion in Delta")
            h = group.heis(1).neg(HeisElem(a, b))
            atom = self.corrected_entry(view, (group.extra(-j, h.x, h.y),), (i, j), f"{view.label}[{i},0]a")
            self.expect_elem(atom.value, view[i, 0] * a, "row zero value")
            view.atoms[key] = atom
        return view.atoms[key]

    def zero_col(self, view: SigmaView, j: int, a: Optional[RingElem] = None) -> Atom:
        """lambda^-1 conj(a) mu view[0, j] from entry (i, j) of ^{T_i(-(a, b))} view."""
        key = ("col0", j, a)
        if key not in view.atoms:
            group = self.group
            i = self.aux_index(j, sign=1)
            b = group.delta_for(-1).complete(a)
            if b is None:
                raise FormParameterError(f"{a} has no completion in the mirrored Delta")
            h = group.heis(-1).neg(HeisElem(a, b))
            atom = self.corrected_entry(view, (group.extra(i, h.x, h.y),), (i, j), f"{view.label}[0,{j}]a")
            want = group.lam_pow(-1) * a.conj() * self.ring.mu * view[0, j]
            self.expect_elem(atom.value, want, "zero column value")
            view.atoms[key] = atom
        return view.atoms[key]

    # extra short roots ------------------------------------------------------------------
    def extra_from_short(self, k: int, h: HeisElem, atom: Atom, w: RingElem) -> Cert:
        """T_k(h o w) for eps(k) = -1 and h in Delta, w a multiple of the atom value."""
        p = self.aux_index(k, sign=-1)
        first = atom.realize_value((p, -k), -(h.y * w))
        inner = self.conj_atom(atom).realize_value((k, p), w.conj())
        cert = first + comm_right(inner, (self.extra_gen(p, h.x, h.y),))
        hw = self.group.heis(1).scale(h, w)
        self.expect(cert.value, self.extra_raw(k, hw.x, hw.y), f"T_{k}(h o w) from {atom.label}")
        return cert

    def step_one_vector(self, rho: SigmaView) -> ThetaVector:
        return ThetaVector.from_entries(self.ring, self.n, {-2: rho[1, 1].conj(), -1: -rho[2, 1].conj()})

    def step_one_atoms(self, rho: SigmaView, p: int) -> List[Atom]:
        if p == 1:
            return [self.diag_diff(rho, 2, 1), self.entry(rho, 1, 2)]
        if p == -2:
            e = self.entry(rho, -2, 1)
            return [e, self.conj_atom(e), self.conj_atom(self.entry(rho, 3, 1))]
        if p == -1:
            return [self.anti_diag(rho, -1), self.conj_atom(self.entry(rho, 2, 1))]
        return [self.entry(rho, p, 1)]

    def lead_inverse(self, b: RingElem, w: RingElem) -> ThetaMatrix:
        return self.short_matrix((1, -2), -b) @ self.extra_raw(1, self.ring.zero, -w)

    def lead_certs(self, atoms, b: RingElem, w: RingElem) -> List[Cert]:
        return [
            self.realize_combination(atoms, (1, -2), -b, "step one (1,-2)"),
            self.long_root(1, atoms, -w, "step one T_1"),
        ]

    def step_one(self, rho: SigmaView, x: RingElem, k0: int) -> Cert:
        """T_k0(q(rho_*1) o (rho_11 x)), eps(k0) = -1."""
        group = self.group
        q = group.form_q(rho.value.column(1))
        h = group.heis(1).scale(q, rho[1, 1] * x)
        cert, residual = self.step_one_core(rho, x)
        self.expect_elem(residual.x, h.x, "step one residual")
        word, t = self.relocator.extra_path(3, k0)
        y3 = self.ring.unit_inverse_strict(t) * h.y
        fix = self.long_root(3, [self.entry(rho, 3, 1), self.entry(rho, -2, 1)], y3 - residual.y, "step one T_3")
        cert = cert + fix
        self.expect(cert.value, self.extra_raw(3, h.x, y3), "step one corrected")
        moved = cert.conj(word)
        self.expect(moved.value, self.extra_raw(k0, h.x, h.y), "step one relocation")
        return moved

    def _reachable(self, k: int, atom: Atom, target: RingElem) -> bool:
        return any(self.skew(k, c * atom.value) == target for c in self.ring.elements)

    def internal_col(self, rho: SigmaView, c: RingElem, k0: int, extras: Sequence[RingElem] = ()) -> Cert:
        """
        T_k0(q(rho_*1) o c + (0, sum extras)), eps(k0) = -1.

        q o c is split along sum_s rho'_1s rho_s1 = 1; the Heisenberg cross
        terms and the extras go into one long root per r = 1..n.
        """
        group = self.group
        ring = self.ring
        hg = group.heis(1)
        q = group.form_q(rho.value.column(1))
        inv = rho.inv
        parts = []
        xs = []
        acc = HeisElem(ring.zero, ring.zero)
        for s in group.theta:
            x = inv[1, s] * rho[s, 1] * c
            xs.append(x)
            if s == 1:
                parts.append(self.step_one(rho, inv[1, 1] * c, k0))
            elif s == -1:
                parts.append(self.extra_from_short(k0, q, self.anti_diag(rho, -1), x))
            elif s == 0:
                a0 = rho[0, -1]
                if a0 not in group.delta.first_components:
                    raise DecompositionError(f"rho_0,-1 = {a0} is not in J(Delta)")
                parts.append(self.extra_from_short(k0, q, self.zero_col(rho, 1, a0), x))
            else:
                parts.append(self.extra_from_short(k0, q, self.entry(rho, s, 1), x))
            acc = hg.add(acc, hg.scale(q, x))
        want = hg.scale(q, c)
        self.expect_elem(acc.x, want.x, "column first component")

        cross = ring.zero
        for e in range(len(xs)):
            for l in range(e + 1, len(xs)):
                cross = cross + xs[l].conj() * xs[e]
        atoms = {r: self.anti_diag(rho, -1) if r == 1 else self.entry(rho, -r, 1) for r in range(1, self.n + 1)}
        targets = {r: self.skew(k0, cross * rho[r, 1].conj() * rho[-r, 1]) for r in atoms}
        gap = ring.zero
        for r in atoms:
            gap = gap + targets[r]
        self.expect_elem(gap, want.y - acc.y, "column cross terms")

        for extra in extras:
            r = next((r for r in atoms if self._reachable(k0, atoms[r], extra)), None)
            if r is None:
                raise DecompositionError(f"column correction {extra} is not reachable")
            targets[r] = targets[r] + extra
        parts += [self.long_root(k0, [atoms[r]], targets[r], f"column long root {r}") for r in atoms]
        cert = concat(group, parts)
        total = want.y
        for extra in extras:
            total = total + extra
        self.expect(cert.value, self.extra_raw(k0, want.x, total), "column product")
        return cert

    def column_q(self, view: SigmaView, j: int, c: RingElem, k0: int) -> Cert:
        """T_k0(q(view_*j) o c), eps(k0) = -1."""
        group = self.group
        rho, steps, w = self.column_view(view, j)
        if w != self.ring.one:
            raise DecompositionError(f"column {j} moves with scale {w}")
        cc = c.conj() * c
        extras = [
            self.skew(k0, a * b * cc)
            for pre, (i, jj) in steps
            for a, b in group.q_permuted_terms(pre.value, i, jj)
        ]
        cert = self.internal_col(rho, c, k0, extras)
        want = group.heis(1).scale(group.form_q(view.value.column(j)), c)
        self.expect(cert.value, self.extra_raw(k0, want.x, want.y), f"q of column {j}")
        return cert

    def negative_index(self, k: int) -> int:
        return k if eps(k) == -1 else self.aux_index(k, sign=-1)

    def extra_kind(
        self, kind: str, idx: Dict[str, int], a: Optional[RingElem]
    ) -> Tuple[Cert, Optional[RingElem], Dict[str, int]]:
        group = self.group
        j, k = idx["j"], idx["k"]
        one = self.ring.one
        k0 = self.negative_index(k)
        root = self.root

        if kind == "vii":
            cert = self.column_q(root, j, one, k0)
            sub_counts = {"column": len(cert)}
            if len(cert) > column_bound(self.n):
                raise DecompositionError(f"column product has {len(cert)} factors")
            if k0 != k:
                cert, _ = self.relocate_extra(cert, k0, k, want=group.lam_pow(-(eps(k) + 1) // 2))
            return cert, None, sub_counts

        s = self.sigma
        b = group.delta_for(eps(j)).complete(a)
        if b is None:
            raise FormParameterError(f"{a} has no completion in Delta^{eps(j)}")
        g = group.extra(-j, a, b)
        b_prime = group.gen_matrix(group.gen_inverse(g))[-j, j]
        xi = root.conjugated((g,), f"^T-{j}sigma")
        h = HeisElem(a, group.delta.complete(a))
        column = self.column_q(root, j, one, k0)
        parts = [
            self.column_q(xi, j, one, k0),
            column.inverse(),
            self.extra_from_short(k0, h, self.row_zero(root, j, a), s[j, 0] * a),
            self.column_q(root, -j, b_prime, k0).inverse(),
            self.extra_from_short(k0, h, self.anti_diag(root, j), -(s[j, -j] * b_prime)),
        ]
        total = concat(group, parts)
        residual = self.residual_extra(total.value, k0, "five factor product")
        self.expect_elem(residual.x, (s[j, j] - s[0, 0]) * a, "five factor first component")
        cert = total.inverse()
        if k0 != k:
            cert, _ = self.relocate_extra(cert, k0, k)
        return cert, cert.value[k, -k], {"column": len(column)}


def decompose_unitary(
    group: GroupContext,
    sigma: ThetaMatrix,
    kind: str,
    indices: Dict[str, int],
    a: Optional[RingElem] = None,
) -> Certificate:
    """
    Certificate for the elementary unitary matrix of ``kind`` read off sigma.

    Args:
        group: Unitary group context with n >= 3
        sigma: Element of U_{2n+1}(R, Delta)
        kind: One of ``i`` .. ``viii``
        indices: Index names of the kind
        a: Element of J(Delta), required for kinds iii, iv and viii

    Raises:
        InvalidIndexError: bad kind or indices
        FormParameterError: a missing or outside J(Delta)
        NotInGroupError: sigma is not unitary
        DecompositionError: an internal identity failed
    """
    if group.tag != "unitary":
        raise InvalidIndexError(f"decompose_unitary needs the unitary group, got {group.tag}")
    prepare(group, sigma, kind, indices, a)
    return UnitaryDecomposer(group, sigma).build(kind, indices, a)
