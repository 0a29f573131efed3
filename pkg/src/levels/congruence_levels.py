# src/levels/congruence_levels.py
"""
Levels of elements and the congruence subgroups they fall into.

The orthogonal level is an admissible pair (I, J); the unitary level is an
involution invariant ideal I taken with the largest relative odd form
parameter Omega^I_max. Both are read off the entries of sigma, so they are
the smallest levels whose full congruence subgroup contains sigma.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.algebra.ideals import IdealDesc, ideal_from_set, squares
from src.algebra.ring_core import RingElem
from src.algebra.theta_matrix import ThetaMatrix, eps
from src.groups.generators import ElemGen
from src.groups.group_context import GroupContext
from src.groups.hermitian_form import FormIdealData, HeisElem, OddFormIdeal, OddFormParam, form_ideal_derived
from src.groups.unitary_group import UnitaryGroup
from src.utils.errors import IdealError, InvalidIndexError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdmissiblePair:
    I: IdealDesc
    J: IdealDesc

    def to_json(self) -> dict:
        return {"I": self.I.to_json(), "J": self.J.to_json()}


@dataclass(frozen=True)
class UnitaryLevel:
    I: IdealDesc
    data: FormIdealData

    @property
    def omega(self) -> OddFormParam:
        return self.data.omega_max

    def to_json(self) -> dict:
        return {"I": self.I.to_json(), "omega": "max"}


def admissible_validate(I: IdealDesc, J: IdealDesc) -> Tuple[bool, str]:
    """
    Check 2J and the squares of J lie in I, and I lies in J.

    Returns:
        (valid, diagnostic) where the diagnostic names the first failing
        inclusion and a witness, or is empty
    """
    for x in J.sorted_elements():
        if x * 2 not in I:
            return False, f"2*{x} is not in I"
    for x in J.sorted_elements():
        if x * x not in I:
            return False, f"{x}^2 is not in I"
    for x in I.sorted_elements():
        if x not in J:
            return False, f"{x} is in I but not in J"
    return True, ""


def admissible_completion(I: IdealDesc, J: IdealDesc) -> AdmissiblePair:
    """Smallest admissible pair with I and J inside its components."""
    J = J + I
    I = I + ideal_from_set(J.ring, [x * 2 for x in J.generators] + sorted(squares(J), key=lambda x: x.c))
    return AdmissiblePair(I, J)


def _check_size(group: GroupContext, sigma: ThetaMatrix) -> None:
    if sigma.ring != group.ring or sigma.n != group.n:
        raise InvalidIndexError(f"matrix of size {2 * sigma.n + 1} does not belong to {group!r}")


# orthogonal ------------------------------------------------------------------
def level_of_ortho(group: GroupContext, sigma: ThetaMatrix) -> AdmissiblePair:
    """
    Admissible pair generated by the entries that membership in
    CO_{2n+1}(R, I, J) constrains.

    I gets the off-diagonal hyperbolic rows and the differences of hyperbolic
    diagonal entries, J the row 0 entries and sigma_00 - sigma_jj; the pair
    is then completed to an admissible one.
    """
    _check_size(group, sigma)
    ring = group.ring
    hb = group.theta_hb
    i_gens: List[RingElem] = []
    j_gens: List[RingElem] = []
    for i in hb:
        for j in group.theta:
            if i != j:
                i_gens.append(sigma[i, j])
    for i in hb:
        for j in hb:
            i_gens.append(sigma[i, i] - sigma[j, j])
    for j in hb:
        j_gens.append(sigma[0, j])
        j_gens.append(sigma[0, 0] - sigma[j, j])
    pair = admissible_completion(ideal_from_set(ring, i_gens), ideal_from_set(ring, j_gens))
    ok, why = admissible_validate(pair.I, pair.J)
    if not ok:
        raise IdealError(f"completed level is not admissible: {why}")
    logger.debug(f"Orthogonal level: I={pair.I}, J={pair.J}")
    return pair


def co_member(group: GroupContext, sigma: ThetaMatrix, I: IdealDesc, J: IdealDesc) -> bool:
    """Membership in the full congruence subgroup CO_{2n+1}(R, I, J)."""
    _check_size(group, sigma)
    hb = group.theta_hb
    for i in hb:
        for j in group.theta:
            if i != j and sigma[i, j] not in I:
                return False
    for j in hb:
        if sigma[0, j] not in J:
            return False
        if sigma[0, 0] - sigma[j, j] not in J:
            return False
        if any(sigma[i, i] - sigma[j, j] not in I for i in hb):
            return False
    return True


def o_principal_member(group: GroupContext, sigma: ThetaMatrix, I: IdealDesc, J: IdealDesc) -> bool:
    """Membership in the principal congruence subgroup O_{2n+1}(R, I, J)."""
    _check_size(group, sigma)
    e = group.identity()
    for j in group.theta:
        if any(sigma[i, j] - e[i, j] not in I for i in group.theta_hb):
            return False
        if sigma[0, j] - e[0, j] not in J:
            return False
    return True


def is_level_elementary_ortho(gen: ElemGen, I: IdealDesc, J: IdealDesc) -> bool:
    """Short roots need x in I, extra short roots x in J."""
    if gen.kind == "S":
        return gen.x in I
    return gen.x in J


# unitary ------------------------------------------------------------------------
def level_of_unitary(group: UnitaryGroup, sigma: ThetaMatrix) -> UnitaryLevel:
    """
    Smallest involution invariant I with sigma in CU((R, Delta), (I, Omega^I_max)).

    Every membership condition has the form "fixed element in I", so one
    involution closing pass over these elements is already minimal:

    - sigma_ij (i != j) and sigma_ii - sigma_jj on the hyperbolic part,
    - sigma_i0 * y for y in J(Delta),
    - conj(y) mu sigma_0j for y in J(Delta),
    - conj(y) mu (sigma_00 - sigma_jj) z for y, z in J(Delta).
    """
    _check_size(group, sigma)
    ring = group.ring
    hb = group.theta_hb
    J = group.delta.first_components
    mu = ring.mu
    gens: List[RingElem] = []
    for i in hb:
        for j in hb:
            if i != j:
                gens.append(sigma[i, j])
            gens.append(sigma[i, i] - sigma[j, j])
    for i in hb:
        gens.extend(sigma[i, 0] * y for y in J)
        gens.extend(y.conj() * mu * sigma[0, i] for y in J)
        d = sigma[0, 0] - sigma[i, i]
        gens.extend(y.conj() * mu * d * z for y in J for z in J)
    ideal = ideal_from_set(ring, gens, involutive=True)
    level = UnitaryLevel(ideal, form_ideal_derived(ideal, group.delta))
    logger.debug(f"Unitary level: I={ideal}, |Omega_max|={len(level.omega)}")
    return level


def cu_member_max(group: UnitaryGroup, sigma: ThetaMatrix, I: IdealDesc) -> bool:
    """Membership in CU((R, Delta), (I, Omega^I_max)) through the I, I_0, I~, I~_0 conditions."""
    _check_size(group, sigma)
    data = form_ideal_derived(I, group.delta)
    hb = group.theta_hb
    for i in hb:
        if sigma[i, 0] not in data.I_0:
            return False
        if sigma[0, i] not in data.I_tilde:
            return False
        if sigma[0, 0] - sigma[i, i] not in data.I_tilde_0:
            return False
        for j in hb:
            if i != j and sigma[i, j] not in I:
                return False
            if sigma[i, i] - sigma[j, j] not in I:
                return False
    return True


def u_principal_member(group: UnitaryGroup, sigma: ThetaMatrix, I: IdealDesc, omega: OddFormParam) -> bool:
    """
    Membership in the principal congruence subgroup U((R, Delta), (I, Omega)).

    Raises:
        IdealError: (I, Omega) is not an odd form ideal of (R, Delta)
    """
    _check_size(group, sigma)
    if omega.sign != 1:
        omega = omega.mirror()
    if not OddFormIdeal(I, omega).validate(group.delta):
        raise IdealError(f"({I}, {omega!r}) is not an odd form ideal")
    e = group.identity()
    hb = group.theta_hb
    for i in hb:
        if any(sigma[i, j] - e[i, j] not in I for j in hb):
            return False
    for j in hb:
        if group.form_q(sigma.column(j)) not in omega:
            return False
    hg = group.heis(1)
    shifted = hg.sub(group.form_q(sigma.column(0)), HeisElem(group.ring.one, group.ring.zero))
    return all(hg.scale(shifted, a) in omega for a in group.delta.first_components)


def is_level_elementary_unitary(gen: ElemGen, I: IdealDesc, omega: OddFormParam) -> bool:
    """Short roots need x in I, T_i(x, y) needs (x, y) in Omega^{-eps(i)}."""
    if gen.kind == "S":
        return gen.x in I
    return HeisElem(gen.x, gen.y) in omega.with_sign(-eps(gen.i))


def ideal_derived_report(ideal: IdealDesc, delta: OddFormParam, data: Optional[FormIdealData] = None) -> dict:
    """J(Delta), I~, I_0, I~_0, Omega^I_min and Omega^I_max as JSON."""
    ring = ideal.ring
    data = data or form_ideal_derived(ideal, delta)

    def listed(values) -> list:
        return [ring.encode(x) for x in sorted(values, key=lambda x: x.c)]

    return {
        "I": ideal.to_json(),
        "J_delta": listed(data.J),
        "I_tilde": listed(data.I_tilde),
        "I_0": listed(data.I_0),
        "I_tilde_0": listed(data.I_tilde_0),
        "omega_min": data.omega_min.to_json(),
        "omega_max": data.omega_max.to_json(),
    }
