# src/cli/commands.py
"""
Command implementations behind ``main.py``.

Every command returns an exit code: 0 success, 1 a failed verification or
self-test, 2 invalid input. Machine readable output goes to stdout (or
``--out``), logs and tables to stderr.
"""
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
from rich.console import Console

from src.algebra.ring_core import Ring, RingElem, parse_ring
from src.algebra.theta_matrix import ThetaMatrix
from src.certificates.certificate import KIND_INDICES, Certificate
from src.certificates.codec import (
    certificate_from_json,
    certificate_to_json,
    dumps_canonical,
    element_from_json,
    element_to_json,
    load_json,
    make_group,
    write_json,
)
from src.certificates.verifier import verify_certificate
from src.cli.selftest import SelftestSettings, default_configurations, render_table, run_selftest
from src.decomposers.ortho_decomp import decompose_ortho
from src.decomposers.unitary_decomp import decompose_unitary
from src.groups.group_context import GroupContext
from src.groups.hermitian_form import parse_delta
from src.levels.congruence_levels import ideal_derived_report, level_of_ortho, level_of_unitary
from src.utils.errors import INPUT_ERRORS, CertError, InvalidIndexError, NotInGroupError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


@dataclass
class RunConfig:
    """Everything a command needs; built from flags over :class:`Config` defaults."""

    group: str = "ortho"
    ring: str = "zmod:5"
    involution: Optional[str] = None
    lam: Optional[str] = None
    mu: Optional[str] = None
    n: int = 3
    delta: str = "max"
    seed: int = 0
    length: int = 12
    kind: Optional[str] = None
    indices: Dict[str, Optional[int]] = field(default_factory=dict)
    a: Optional[str] = None
    out: Optional[str] = None
    sigma: Optional[str] = None
    trials: int = 3
    explicit_group: bool = False


def build_ring(run: RunConfig) -> Ring:
    return parse_ring(run.ring, run.involution, run.lam, run.mu)


def build_group(run: RunConfig) -> GroupContext:
    ring = build_ring(run)
    if run.n < 1:
        raise InvalidIndexError(f"n must be positive, got {run.n}")
    delta = parse_delta(ring, run.delta) if run.group == "unitary" else None
    return make_group(run.group, ring, run.n, delta)


def parse_elem(ring: Ring, text: str) -> RingElem:
    """Coefficient list such as ``2`` or ``1,2``."""
    try:
        return ring.decode([int(v) for v in text.split(",")])
    except ValueError as exc:
        raise InvalidIndexError(f"bad ring element {text!r}") from exc


def emit(obj, out: Optional[str]) -> None:
    if out:
        write_json(out, obj)
    else:
        sys.stdout.write(dumps_canonical(obj) + "\n")


def random_element(run: RunConfig) -> Tuple[GroupContext, ThetaMatrix, tuple]:
    group = build_group(run)
    if run.length < 0:
        raise InvalidIndexError(f"word length must be >= 0, got {run.length}")
    rng = np.random.default_rng(run.seed)
    word, sigma = group.random_element(rng, run.length)
    return group, sigma, word


def load_sigma(run: RunConfig) -> Tuple[GroupContext, ThetaMatrix]:
    """sigma from ``--sigma FILE`` or from the seeded random word."""
    if run.sigma:
        return element_from_json(load_json(run.sigma))
    group, sigma, _ = random_element(run)
    return group, sigma


def decompose(run: RunConfig) -> Certificate:
    group, sigma = load_sigma(run)
    kind = run.kind
    if kind not in KIND_INDICES:
        raise InvalidIndexError(f"unknown kind {kind!r}")
    indices = {}
    for name in KIND_INDICES[kind]:
        value = run.indices.get(name)
        if value is None:
            raise InvalidIndexError(f"kind {kind} needs --{name}")
        indices[name] = value
    if group.tag == "unitary":
        a = parse_elem(group.ring, run.a) if run.a is not None else None
        return decompose_unitary(group, sigma, kind, indices, a)
    if run.a is not None:
        raise InvalidIndexError("orthogonal kinds take no --a")
    return decompose_ortho(group, sigma, kind, indices)


# commands ----------------------------------------------------------------------
def cmd_random(run: RunConfig) -> int:
    group, sigma, word = random_element(run)
    logger.info(f"Random element of {group!r} from {len(word)} generators (seed {run.seed})")
    emit(element_to_json(group, sigma, word), run.out)
    return EXIT_OK


def cmd_decompose(run: RunConfig) -> int:
    cert = decompose(run)
    report = verify_certificate(cert)
    if not report.ok:
        logger.error(f"Certificate failed its own verification: {report.reason}")
        return EXIT_FAIL
    logger.info(f"Kind {cert.kind} certificate: {report.count} factors (bound {report.bound}), target {cert.target}")
    emit(certificate_to_json(cert), run.out)
    return EXIT_OK


def cmd_verify(path: str) -> int:
    """
    Verify a certificate file.

    A kind whose index names differ from ``indices``, or an ``n`` that does
    not match the size of ``sigma``, is a parse error rather than a failed
    check.

    Returns:
        0 when every check passes, 1 on a failed check, 2 when the file does
        not parse
    """
    obj = load_json(path)
    try:
        cert = certificate_from_json(obj)
    except CertError as exc:
        logger.error(f"{path}: {exc}")
        return EXIT_INPUT
    report = verify_certificate(cert)
    out = report.to_json()
    text = Path(path).read_text(encoding="utf-8").rstrip("\n")
    out["canonical"] = dumps_canonical(certificate_to_json(cert)) == text
    sys.stdout.write(dumps_canonical(out) + "\n")
    if report.ok:
        logger.info(f"{path}: ok ({report.count} factors, bound {report.bound})")
        return EXIT_OK
    logger.error(f"{path}: {report.reason}")
    return EXIT_FAIL


def cmd_selftest(run: RunConfig) -> int:
    groups = [build_group(run)] if run.explicit_group else default_configurations()
    settings = SelftestSettings(trials=run.trials, seed=run.seed, word_length=run.length)
    report = run_selftest(groups, settings)
    render_table(report, Console(stderr=True))
    emit(report.to_json(), run.out)
    if not report.passed:
        logger.error(f"Failing suites: {', '.join(report.failures())}")
        return EXIT_FAIL
    return EXIT_OK


def cmd_level(run: RunConfig) -> int:
    group, sigma = load_sigma(run)
    membership = group.member(sigma)
    if not membership.ok:
        raise NotInGroupError(f"sigma is not in the group: {membership.reason}")
    if group.tag == "unitary":
        level = level_of_unitary(group, sigma)
        out = level.to_json()
        out["derived"] = ideal_derived_report(level.I, group.delta, level.data)
    else:
        out = level_of_ortho(group, sigma).to_json()
    logger.info(f"Level of sigma in {group!r}: {out['I']}")
    emit(out, run.out)
    return EXIT_OK


def run_command(command: str, run: RunConfig, path: Optional[str] = None) -> int:
    """Dispatch with the exit code mapping for package errors."""
    try:
        if command == "random":
            return cmd_random(run)
        if command == "decompose":
            return cmd_decompose(run)
        if command == "verify":
            return cmd_verify(path)
        if command == "selftest":
            return cmd_selftest(run)
        if command == "level":
            return cmd_level(run)
        raise InvalidIndexError(f"unknown command {command!r}")
    except INPUT_ERRORS as exc:
        logger.error(f"Invalid input: {exc}")
        return EXIT_INPUT
    except CertError as exc:
        logger.error(f"{command} failed: {exc}")
        return EXIT_FAIL
