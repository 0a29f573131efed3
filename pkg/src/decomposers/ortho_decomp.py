# src/decomposers/ortho_decomp.py
"""
Elementary orthogonal matrices as short products of elementary
sigma-conjugates, sigma in O_{2n+1}(R).

Kinds i-vi produce T_kl(x) for x an entry (or entry difference) of sigma,
kinds vii and viii produce extra short roots T_k(x).
"""
import logging
from typing import Dict, List, Optional, Tuple

from src.algebra.ring_core import RingElem
from src.algebra.theta_matrix import ThetaMatrix, ThetaVector
from src.certificates.certificate import Cert, Certificate, comm_left, comm_right, concat
from src.decomposers.engine import Atom, CommutatorAtom, Decomposer, Pos, Relocator, SigmaView, prepare
from src.groups.generators import ElemGen, Word
from src.groups.group_context import GroupContext
from src.utils.errors import InvalidIndexError

logger = logging.getLogger(__name__)


class OrthoDecomposer(Decomposer):
    """Decompositions over one sigma in O_{2n+1}(R)."""

    # short root atoms -------------------------------------------------------------
    def entry_at_23(self, view: SigmaView) -> Atom:
        """
        [T_12(1), zeta] with zeta = [tau^-1, T_32(1)][T_32(1), xi] is a
        short root at (3, 2) carrying view[2, 3]; 8 conjugates.
        """
        group = self.group
        s = view
        S = ElemGen.short
        tau: Word = (S(2, 1, -s[2, 3]), S(3, 1, s[2, 2]), S(2, -3, s[2, -1]))
        tau_inv = group.word_inverse(tau)

        self.check_row_two(view, tau, view.label)
        t32 = (self.gen_short((3, 2), 1),)
        psi = group.word_matrix(tau_inv + t32 + tau + group.word_inverse(t32))
        self.expect(psi, self.short_matrix((3, 1), -s[2, 3]), f"{view.label}: [tau^-1, T_32(1)]")

        zeta = comm_left(t32, comm_left(tau, view.base)).conj(tau_inv)
        return CommutatorAtom(self, zeta, outer=(1, 2), native=(3, 2), label=f"{view.label}[2,3]")

    def row_zero(self, view: SigmaView, i: int, a: Optional[RingElem] = None) -> Atom:
        """view[i, 0] from entry (i, j) of ^{T_-j(-1)} view."""
        key = ("row0", i)
        if key not in view.atoms:
            j = self.aux_index(i)
            g = (self.group.extra(-j, -self.ring.one),)
            atom = self.corrected_entry(view, g, (i, j), f"{view.label}[{i},0]")
            self.expect_elem(atom.value, view[i, 0], "row zero value")
            view.atoms[key] = atom
        return view.atoms[key]

    def zero_col(self, view: SigmaView, j: int, a: Optional[RingElem] = None) -> Atom:
        """2 view[0, j] from entry (i, j) of ^{T_i(-1)} view."""
        key = ("col0", j)
        if key not in view.atoms:
            i = self.aux_index(j)
            g = (self.group.extra(i, -self.ring.one),)
            atom = self.corrected_entry(view, g, (i, j), f"{view.label}[0,{j}]")
            self.expect_elem(atom.value, view[0, j] * 2, "zero column value")
            view.atoms[key] = atom
        return view.atoms[key]

    # extra short roots ----------------------------------------------------------------
    def extra_from_short(self, k: int, atom: Atom, x: RingElem) -> Cert:
        """T_k(x) = T_{p,-k}(x) [T_kp(x), T_p(1)] for x a multiple of the atom value."""
        p = self.aux_index(k)
        first = atom.realize_value((p, -k), x)
        inner = atom.realize_value((k, p), x)
        cert = first + comm_right(inner, (self.group.extra(p, self.ring.one),))
        self.expect(cert.value, self.extra_raw(k, x), f"T_{k} from {atom.label}")
        return cert

    def step_one_vector(self, rho: SigmaView) -> ThetaVector:
        return ThetaVector.from_entries(self.ring, self.n, {-2: rho[1, 1], -1: -rho[2, 1]})

    def step_one_atoms(self, rho: SigmaView, p: int) -> List[Atom]:
        if p == 1:
            return [self.diag_diff(rho, 2, 1), self.entry(rho, 1, 2)]
        if p == -2:
            return [self.entry(rho, 3, 1)]
        if p == -1:
            return [self.anti_diag(rho, -1), self.entry(rho, 2, 1)]
        return [self.entry(rho, p, 1)]

    def lead_inverse(self, b: RingElem, w: RingElem) -> ThetaMatrix:
        self.expect_elem(w, self.ring.zero, "zeta (1,-1) entry")
        return self.short_matrix((1, -2), -b)

    def lead_certs(self, atoms, b: RingElem, w: RingElem) -> List[Cert]:
        return [self.realize_combination(atoms, (1, -2), -b, "step one (1,-2)")]

    def step_one(self, rho: SigmaView, x: RingElem, k: int) -> Cert:
        """T_k(x rho_01 rho_11)."""
        cert, residual = self.step_one_core(rho, x)
        self.expect_elem(residual.x, x * rho[0, 1] * rho[1, 1], "step one residual")
        moved, _ = self.relocate_extra(cert, 3, k)
        self.expect(moved.value, self.extra_raw(k, residual.x), "step one relocation")
        return moved

    def column_extra(self, view: SigmaView, j: int, k: int, c: RingElem) -> Cert:
        """
        T_k(c view[0, j]).

        Column j is brought to column 1 and view[0, j] is split along
        sum_s rho'_1s rho_s1 = 1, one extra short root per s.
        """
        rho, _, w = self.column_view(view, j)
        cw = c * w
        inv = rho.inv
        parts = []
        for s in self.group.theta:
            x = inv[1, s] * rho[s, 1] * rho[0, 1] * cw
            if s == 1:
                parts.append(self.step_one(rho, inv[1, 1] * cw, k))
            elif s == -1:
                parts.append(self.extra_from_short(k, self.anti_diag(rho, -1), x))
            elif s == 0:
                parts.append(self.extra_from_short(k, self.zero_col(rho, 1), x))
            else:
                parts.append(self.extra_from_short(k, self.entry(rho, s, 1), x))
        cert = concat(self.group, parts)
        self.expect(cert.value, self.extra_raw(k, c * view[0, j]), f"T_{k} from column {j}")
        return cert

    def extra_kind(
        self, kind: str, idx: Dict[str, int], a: Optional[RingElem]
    ) -> Tuple[Cert, Optional[RingElem], Dict[str, int]]:
        j, k = idx["j"], idx["k"]
        one = self.ring.one
        root = self.root
        if kind == "vii":
            return self.column_extra(root, j, k, one), None, {}

        s = self.sigma
        xi = root.conjugated((self.group.extra(-j, one),), f"^T-{j}(1)sigma")
        parts = [
            self.column_extra(xi, j, k, one),
            self.column_extra(root, j, k, -one),
            self.extra_from_short(k, self.row_zero(root, j), s[j, 0]),
            self.column_extra(root, -j, k, one),
            self.extra_from_short(k, self.anti_diag(root, j), s[j, -j]),
        ]
        cert = concat(self.group, parts)
        self.expect(cert.value, self.extra_raw(k, s[j, j] - s[0, 0]), "five factor product")
        return cert.inverse(), None, {}


def decompose_ortho(
    group: GroupContext, sigma: ThetaMatrix, kind: str, indices: Dict[str, int]
) -> Certificate:
    """
    Certificate for the elementary matrix of ``kind`` read off sigma.

    Args:
        group: Orthogonal group context with n >= 3
        sigma: Element of O_{2n+1}(R)
        kind: One of ``i`` .. ``viii``
        indices: Index names of the kind (``i``, ``j``, ``k``, ``l``)

    Raises:
        InvalidIndexError: bad kind or indices
        NotInGroupError: sigma is not orthogonal
        DecompositionError: an internal identity failed
    """
    if group.tag != "ortho":
        raise InvalidIndexError(f"decompose_ortho needs the orthogonal group, got {group.tag}")
    prepare(group, sigma, kind, indices, None)
    return OrthoDecomposer(group, sigma).build(kind, indices)


def relocate(group: GroupContext, src: Pos, dst: Pos) -> Word:
    """Monomial word W with ^W T_src(x) = T_dst(x) for every x."""
    group.check_short(*src)
    group.check_short(*dst)
    word, _ = Relocator(group).short_path(tuple(src), tuple(dst), exact=True)
    return word
