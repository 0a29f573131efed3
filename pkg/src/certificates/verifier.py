# src/certificates/verifier.py
"""
Independent certificate verification.

Everything is re-derived from the generator words: each conjugator is
multiplied out from its generators, every generator is validated against the
group (including the Delta condition for unitary extra short roots), and the
product of the factors is compared with the target matrix.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from src.algebra.theta_matrix import ThetaMatrix
from src.certificates.certificate import Certificate, certificate_count, check_param, expected_target, kind_bound
from src.groups.generators import ElemGen
from src.groups.group_context import GroupContext
from src.utils.errors import CertError

logger = logging.getLogger(__name__)


@dataclass
class VerifyReport:
    ok: bool
    count: int
    bound: int
    checks: Dict[str, bool] = field(default_factory=dict)
    reason: str = ""

    def to_json(self) -> dict:
        return {"ok": self.ok, "count": self.count, "bound": self.bound, "checks": dict(self.checks), "reason": self.reason}


class PrefixStack:
    """
    Matrices of the prefixes of the last conjugator seen.

    Consecutive factors of a certificate share long conjugator prefixes, so
    only the diverging tail of each word is multiplied out.
    """

    def __init__(self, group: GroupContext):
        self.group = group
        e = group.identity()
        self._gens: List[ElemGen] = []
        self._fwd: List[ThetaMatrix] = [e]
        self._inv: List[ThetaMatrix] = [e]

    def lookup(self, word: Sequence[ElemGen]) -> Tuple[ThetaMatrix, ThetaMatrix]:
        """(W, W^-1) for the word; validates every new generator."""
        common = 0
        limit = min(len(word), len(self._gens))
        while common < limit and self._gens[common] == word[common]:
            common += 1
        del self._gens[common:]
        del self._fwd[common + 1:]
        del self._inv[common + 1:]
        group = self.group
        for g in word[common:]:
            gm = group.gen_matrix(g)
            gi = group.gen_matrix(group.gen_inverse(g))
            self._gens.append(g)
            self._fwd.append(self._fwd[-1] @ gm)
            self._inv.append(gi @ self._inv[-1])
        return self._fwd[-1], self._inv[-1]


def factors_product(group: GroupContext, sigma: ThetaMatrix, sigma_inv: ThetaMatrix, factors) -> ThetaMatrix:
    stack = PrefixStack(group)
    acc = group.identity()
    for f in factors:
        w, w_inv = stack.lookup(f.conj)
        acc = acc @ w @ (sigma if f.exp == 1 else sigma_inv) @ w_inv
    return acc


def verify_certificate(cert: Certificate) -> VerifyReport:
    """
    Check a certificate against its own claims.

    Args:
        cert: Parsed certificate

    Returns:
        Report with one flag per check; ``ok`` only when all of them pass
    """
    group = cert.group
    count = certificate_count(cert)
    report = VerifyReport(ok=False, count=count, bound=cert.bound)
    checks = report.checks

    membership = group.member(cert.sigma)
    checks["sigma_member"] = membership.ok
    if not membership.ok:
        report.reason = f"sigma is not in the group: {membership.reason}"
        return report

    checks["bound_formula"] = cert.bound == kind_bound(group.tag, cert.kind, group.n)
    checks["count_within_bound"] = count <= cert.bound
    try:
        check_param(group, cert.kind, cert.a)
        expected = expected_target(group, cert.sigma, cert.kind, cert.indices, cert.a, cert.x_out)
        checks["target_semantics"] = expected == cert.target
        target_matrix = group.gen_matrix(cert.target)
        checks["target_valid"] = True
    except CertError as exc:
        checks["target_semantics"] = False
        checks["target_valid"] = False
        report.reason = f"target: {exc}"
        return report

    try:
        product = factors_product(group, cert.sigma, cert.sigma.inverse(), cert.factors)
        checks["generators_valid"] = True
    except CertError as exc:
        checks["generators_valid"] = False
        report.reason = f"conjugator: {exc}"
        return report
    checks["product_equals_target"] = product == target_matrix

    report.ok = all(checks.values())
    if not report.ok:
        report.reason = ", ".join(name for name, passed in checks.items() if not passed)
    logger.debug(f"Verified kind {cert.kind} certificate with {count} factors: ok={report.ok}")
    return report
