# src/certificates/certificate.py
"""
Certificates: ordered products of elementary sigma-conjugates.

A factor ``ConjFactor(conj, exp)`` stands for W sigma^exp W^-1, W being the
product of the generator word ``conj``. While a decomposition is built the
factors live in a :class:`Cert`, which also carries the exact value of the
product and of its inverse so every construction step can be checked on the
spot.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.algebra.ring_core import RingElem
from src.algebra.theta_matrix import ThetaMatrix, eps
from src.groups.generators import ElemGen, Word
from src.groups.group_context import GroupContext
from src.utils.errors import FormParameterError, InvalidIndexError, MalformedCertificateError

logger = logging.getLogger(__name__)

KINDS = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")

# index names each kind takes, in canonical order
KIND_INDICES: Dict[str, Tuple[str, ...]] = {
    "i": ("i", "j", "k", "l"),
    "ii": ("i", "k", "l"),
    "iii": ("i", "k", "l"),
    "iv": ("j", "k", "l"),
    "v": ("i", "j", "k", "l"),
    "vi": ("i", "k", "l"),
    "vii": ("j", "k"),
    "viii": ("j", "k"),
}

# kinds whose unitary version takes the J(Delta) parameter a
PARAM_KINDS = ("iii", "iv", "viii")

_ORTHO_FIXED = {"i": 8, "ii": 16, "iii": 24, "iv": 24, "v": 24, "vi": 48}
_UNITARY_FIXED = {"i": 160, "ii": 320, "iii": 480, "iv": 480, "v": 480, "vi": 960}


def kind_bound(tag: str, kind: str, n: int) -> int:
    """
    Factor bound of a decomposition kind.

    Args:
        tag: ``"ortho"`` or ``"unitary"``
        kind: One of :data:`KINDS`
        n: Rank of the group

    Returns:
        The guaranteed maximal number of sigma-conjugates
    """
    if kind not in KINDS:
        raise InvalidIndexError(f"unknown kind {kind!r}")
    if tag == "ortho":
        if kind == "vii":
            return 64 * n + 148
        if kind == "viii":
            return 192 * n + 564
        return _ORTHO_FIXED[kind]
    if tag == "unitary":
        if kind == "vii":
            return 1600 * n + 5764
        if kind == "viii":
            return 4800 * n + 16812
        return _UNITARY_FIXED[kind]
    raise InvalidIndexError(f"unknown group tag {tag!r}")


def column_bound(n: int) -> int:
    """Bound for the unitary T_k(q(sigma_{*1})) sub-product with eps(k) = -1."""
    return 1600 * n + 4804


@dataclass(frozen=True)
class ConjFactor:
    conj: Word
    exp: int

    def to_json(self, ring) -> dict:
        return {"conj": [g.to_json(ring) for g in self.conj], "exp": self.exp}

    @classmethod
    def from_json(cls, obj: dict, ring) -> "ConjFactor":
        try:
            exp = obj["exp"]
            words = obj["conj"]
        except (KeyError, TypeError) as exc:
            raise MalformedCertificateError(f"bad factor {obj!r}") from exc
        if exp not in (1, -1) or isinstance(exp, bool) or not isinstance(words, list) or set(obj) != {"conj", "exp"}:
            raise MalformedCertificateError(f"bad factor {obj!r}")
        return cls(tuple(ElemGen.from_json(g, ring) for g in words), exp)


class Cert:
    """A product of sigma-conjugates together with its value and inverse."""

    def __init__(self, group: GroupContext, factors: Tuple[ConjFactor, ...], value: ThetaMatrix, inv: ThetaMatrix):
        self.group = group
        self.factors = factors
        self.value = value
        self.inv = inv

    @classmethod
    def of_sigma(cls, group: GroupContext, sigma: ThetaMatrix, sigma_inv: Optional[ThetaMatrix] = None) -> "Cert":
        inv = sigma.inverse() if sigma_inv is None else sigma_inv
        return cls(group, (ConjFactor((), 1),), sigma, inv)

    @classmethod
    def empty(cls, group: GroupContext) -> "Cert":
        e = group.identity()
        return cls(group, (), e, e)

    def __len__(self) -> int:
        return len(self.factors)

    def __add__(self, other: "Cert") -> "Cert":
        return Cert(self.group, self.factors + other.factors, self.value @ other.value, other.inv @ self.inv)

    def inverse(self) -> "Cert":
        factors = tuple(ConjFactor(f.conj, -f.exp) for f in reversed(self.factors))
        return Cert(self.group, factors, self.inv, self.value)

    def conj(self, word: Sequence[ElemGen]) -> "Cert":
        """^W of the product: every conjugator gets W prefixed."""
        word = tuple(word)
        if not word:
            return self
        w = self.group.word_matrix(word)
        w_inv = self.group.word_matrix(self.group.word_inverse(word))
        factors = tuple(ConjFactor(word + f.conj, f.exp) for f in self.factors)
        return Cert(self.group, factors, w @ self.value @ w_inv, w @ self.inv @ w_inv)

    def __repr__(self) -> str:
        return f"Cert(len={len(self.factors)})"


def concat(group: GroupContext, parts: Iterable[Cert]) -> Cert:
    """Product of certs in order, joining the factor tuples once."""
    factors: List[ConjFactor] = []
    value = group.identity()
    inv = group.identity()
    for part in parts:
        factors.extend(part.factors)
        value = value @ part.value
        inv = part.inv @ inv
    return Cert(group, tuple(factors), value, inv)


def comm_left(word: Sequence[ElemGen], cert: Cert) -> Cert:
    """[W, C] = W C W^-1 C^-1."""
    return cert.conj(word) + cert.inverse()


def comm_right(cert: Cert, word: Sequence[ElemGen]) -> Cert:
    """[C, W] = C W C^-1 W^-1."""
    return cert + cert.inverse().conj(word)


@dataclass
class Certificate:
    """A finished decomposition: factors whose product is ``target``."""

    group: GroupContext
    sigma: ThetaMatrix
    kind: str
    indices: Dict[str, int]
    target: ElemGen
    bound: int
    factors: Tuple[ConjFactor, ...]
    a: Optional[RingElem] = None
    x_out: Optional[RingElem] = None
    sub_counts: Dict[str, int] = field(default_factory=dict)

    @property
    def tag(self) -> str:
        return self.group.tag


def certificate_count(cert: Certificate) -> int:
    return len(cert.factors)


def check_kind_indices(group: GroupContext, kind: str, indices: Dict[str, int]) -> None:
    """
    Validate the index set of a decomposition request.

    Raises:
        InvalidIndexError: unknown kind, missing or extra names, or indices
            violating the i != +-j / k != +-l constraints
    """
    if kind not in KINDS:
        raise InvalidIndexError(f"unknown kind {kind!r}")
    if group.n < 3:
        raise InvalidIndexError(f"decompositions need n >= 3, got {group.n}")
    names = KIND_INDICES[kind]
    if set(indices) != set(names):
        raise InvalidIndexError(f"kind {kind} takes indices {names}, got {sorted(indices)}")
    for name in names:
        value = indices[name]
        if not isinstance(value, int) or isinstance(value, bool):
            raise InvalidIndexError(f"index {name} must be an integer")
        group.check_hb(value)
    if "l" in names:
        group.check_short(indices["k"], indices["l"])
    if kind in ("i", "v"):
        group.check_short(indices["i"], indices["j"])


def check_param(group: GroupContext, kind: str, a: Optional[RingElem]) -> None:
    """The J(Delta) parameter is required exactly for the unitary kinds iii, iv and viii."""
    if group.tag != "unitary" or kind not in PARAM_KINDS:
        if a is not None:
            raise FormParameterError(f"kind {kind} of the {group.tag} group takes no parameter a")
        return
    if a is None:
        raise FormParameterError(f"unitary kind {kind} needs a parameter a in J(Delta)")
    if a not in group.delta.first_components:
        raise FormParameterError(f"a={a} is not in J(Delta)")


def expected_target(
    group: GroupContext,
    sigma: ThetaMatrix,
    kind: str,
    indices: Dict[str, int],
    a: Optional[RingElem] = None,
    x_out: Optional[RingElem] = None,
) -> ElemGen:
    """
    The elementary matrix a kind promises, read off the entries of sigma.

    For the unitary kind viii the second component is the realised ``x_out``.
    """
    s = sigma
    g = indices
    unitary = group.tag == "unitary"
    if kind == "i":
        x = s[g["i"], g["j"]]
    elif kind == "ii":
        x = s[g["i"], -g["i"]]
    elif kind == "iii":
        x = s[g["i"], 0] * a if unitary else s[g["i"], 0]
    elif kind == "iv":
        x = a.conj() * group.ring.mu * s[0, g["j"]] if unitary else s[0, g["j"]] * 2
    elif kind == "v":
        x = s[g["i"], g["i"]] - s[g["j"], g["j"]]
    elif kind == "vi":
        x = s[g["i"], g["i"]] - s[-g["i"], -g["i"]]
    elif kind == "vii":
        if not unitary:
            return ElemGen.extra(g["k"], s[0, g["j"]])
        q = group.form_q(s.column(g["j"]))
        return ElemGen.extra(g["k"], q.x, group.lam_pow(-(eps(g["k"]) + 1) // 2) * q.y)
    elif kind == "viii":
        diff = s[0, 0] - s[g["j"], g["j"]]
        if not unitary:
            return ElemGen.extra(g["k"], diff)
        return ElemGen.extra(g["k"], diff * a, x_out)
    else:
        raise InvalidIndexError(f"unknown kind {kind!r}")
    return ElemGen.short(g["k"], g["l"], x)
