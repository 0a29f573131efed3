# src/certificates/codec.py
"""Canonical JSON for certificates, group elements and group contexts."""
import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

from src.algebra.ring_core import Ring, ring_from_json
from src.algebra.theta_matrix import ThetaMatrix
from src.certificates.certificate import (
    KINDS,
    Certificate,
    ConjFactor,
    check_kind_indices,
)
from src.groups.generators import ElemGen
from src.groups.group_context import GroupContext
from src.groups.hermitian_form import OddFormParam, delta_from_json
from src.groups.ortho_group import OrthoGroup
from src.groups.unitary_group import UnitaryGroup
from src.utils.errors import CertError, InvalidIndexError, MalformedCertificateError

logger = logging.getLogger(__name__)


def dumps_canonical(obj: Any) -> str:
    """Sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def make_group(tag: str, ring: Ring, n: int, delta: Optional[OddFormParam] = None) -> GroupContext:
    if tag == "ortho":
        return OrthoGroup(ring, n)
    if tag == "unitary":
        if delta is None:
            raise MalformedCertificateError("unitary group needs Delta")
        return UnitaryGroup(ring, n, delta)
    raise InvalidIndexError(f"unknown group {tag!r}")


def group_to_json(group: GroupContext) -> dict:
    out = group.to_json()
    if group.tag == "unitary":
        out["delta"] = group.delta.to_json()
    return out


def group_from_json(obj: dict) -> GroupContext:
    try:
        tag = obj["group"]
        ring = ring_from_json(obj["ring"])
        n = obj["n"]
    except (KeyError, TypeError) as exc:
        raise MalformedCertificateError(f"missing group fields: {exc}") from exc
    if not isinstance(n, int) or isinstance(n, bool):
        raise MalformedCertificateError(f"bad n {n!r}")
    delta = None
    if tag == "unitary":
        if "delta" not in obj:
            raise MalformedCertificateError("unitary object without delta")
        delta = delta_from_json(ring, obj["delta"])
    return make_group(tag, ring, n, delta)


def element_to_json(group: GroupContext, sigma: ThetaMatrix, word=None) -> dict:
    out = group_to_json(group)
    out["sigma"] = group.matrix_to_json(sigma)
    if word is not None:
        out["word"] = [g.to_json(group.ring) for g in word]
    return out


def element_from_json(obj: dict):
    """(group, sigma) from the output of the ``random`` command."""
    group = group_from_json(obj)
    try:
        sigma = group.matrix_from_json(obj["sigma"])
    except (KeyError, TypeError) as exc:
        raise MalformedCertificateError(f"bad sigma: {exc}") from exc
    return group, sigma


def certificate_to_json(cert: Certificate) -> dict:
    group = cert.group
    ring = group.ring
    out = group_to_json(group)
    out.update(
        {
            "sigma": group.matrix_to_json(cert.sigma),
            "kind": cert.kind,
            "indices": dict(cert.indices),
            "target": cert.target.to_json(ring),
            "bound": cert.bound,
            "factors": [f.to_json(ring) for f in cert.factors],
        }
    )
    if cert.a is not None:
        out["a"] = ring.encode(cert.a)
    if cert.x_out is not None:
        out["x_out"] = ring.encode(cert.x_out)
    return out


def certificate_from_json(obj: dict) -> Certificate:
    """
    Parse a certificate object.

    Raises:
        MalformedCertificateError: schema violations
        RingSpecError / FormParameterError: invalid ring or Delta inside the file
    """
    if not isinstance(obj, dict):
        raise MalformedCertificateError("certificate must be a JSON object")
    group = group_from_json(obj)
    ring = group.ring
    try:
        sigma = group.matrix_from_json(obj["sigma"])
        kind = obj["kind"]
        indices = obj["indices"]
        target = ElemGen.from_json(obj["target"], ring)
        bound = obj["bound"]
        raw_factors = obj["factors"]
    except (KeyError, TypeError) as exc:
        raise MalformedCertificateError(f"missing certificate field: {exc}") from exc
    if kind not in KINDS or not isinstance(indices, dict) or not isinstance(raw_factors, list):
        raise MalformedCertificateError("bad kind, indices or factors")
    if not isinstance(bound, int) or isinstance(bound, bool):
        raise MalformedCertificateError(f"bad bound {bound!r}")
    check_kind_indices(group, kind, indices)
    factors = tuple(ConjFactor.from_json(f, ring) for f in raw_factors)
    a = ring.decode(obj["a"]) if "a" in obj else None
    x_out = ring.decode(obj["x_out"]) if "x_out" in obj else None
    return Certificate(group, sigma, kind, dict(indices), target, bound, factors, a=a, x_out=x_out)


def load_json(path: Union[str, Path]) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedCertificateError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificateError(f"{path} is not valid JSON: {exc}") from exc


def write_json(path: Union[str, Path], obj: Any) -> None:
    Path(path).write_text(dumps_canonical(obj) + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")


def load_certificate(path: Union[str, Path]) -> Certificate:
    try:
        return certificate_from_json(load_json(path))
    except CertError:
        raise
    except (ValueError, TypeError) as exc:
        raise MalformedCertificateError(f"bad certificate {path}: {exc}") from exc
