# src/cli/selftest.py
"""
Self-test battery.

Each suite returns ``{check_name: {"passed", "checked", "counterexample"}}``
in the format of :class:`RelationTally`; the runner merges them into one
report keyed by ``<group>/<ring>/<suite>``.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
from rich.table import Table
from tqdm import tqdm

from src.algebra.ring_core import parse_ring
from src.algebra.theta_matrix import ThetaVector, commutator, conjugate, eps
from src.certificates.certificate import KIND_INDICES, KINDS, PARAM_KINDS, Cert, column_bound, comm_left
from src.certificates.verifier import factors_product, verify_certificate
from src.decomposers.ortho_decomp import decompose_ortho
from src.decomposers.unitary_decomp import decompose_unitary
from src.groups.generators import ElemGen
from src.groups.group_context import GroupContext
from src.groups.hermitian_form import HeisenbergGroup, parse_delta, scale_sum_expand
from src.groups.ortho_group import OrthoGroup, RelationTally
from src.groups.unitary_group import UnitaryGroup, ortho_as_unitary_context
from src.levels.congruence_levels import (
    co_member,
    cu_member_max,
    is_level_elementary_ortho,
    is_level_elementary_unitary,
    level_of_ortho,
    level_of_unitary,
    o_principal_member,
    u_principal_member,
)
from src.utils.errors import CertError

logger = logging.getLogger(__name__)

Suite = Callable[[GroupContext, "SelftestSettings"], Dict[str, dict]]


@dataclass
class SelftestSettings:
    trials: int = 3
    seed: int = 0
    word_length: int = 12
    samples: int = 20
    decompose: bool = True


@dataclass
class SelftestReport:
    results: Dict[str, dict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.results.values())

    def failures(self) -> List[str]:
        return [name for name, r in sorted(self.results.items()) if not r["passed"]]

    def to_json(self) -> dict:
        return {"passed": self.passed, "suites": {k: self.results[k] for k in sorted(self.results)}}


def default_configurations() -> List[GroupContext]:
    """Orthogonal over Z/2, Z/3 and the two unitary configurations of the default battery."""
    z3 = parse_ring("zmod:3")
    gaussian = parse_ring("quadext:3:2", "conj")
    return [
        OrthoGroup(parse_ring("zmod:2"), 3),
        OrthoGroup(z3, 3),
        UnitaryGroup(z3, 3, parse_delta(z3, "max")),
        UnitaryGroup(gaussian, 3, parse_delta(gaussian, "min")),
    ]


def valid_indices(group: GroupContext, kind: str) -> List[Dict[str, int]]:
    """Every index assignment the kind accepts."""
    names = KIND_INDICES[kind]
    hb = group.theta_hb
    out = []
    for values in itertools.product(hb, repeat=len(names)):
        idx = dict(zip(names, values))
        if "l" in idx and idx["k"] in (idx["l"], -idx["l"]):
            continue
        if kind in ("i", "v") and idx["i"] in (idx["j"], -idx["j"]):
            continue
        out.append(idx)
    return out


# suites ---------------------------------------------------------------------------
def relations_suite(group: GroupContext, settings: SelftestSettings) -> Dict[str, dict]:
    return group.relation_suite(trials=settings.samples, seed=settings.seed)


def membership_suite(group: GroupContext, settings: SelftestSettings) -> Dict[str, dict]:
    """Random generator products stay in the group and satisfy the polarity identity."""
    rng = np.random.default_rng(settings.seed)
    tally = RelationTally(["member", "inverse_member", "product_member", "polarity"])
    ring = group.ring
    previous = group.identity()
    for t in range(settings.samples):
        word, sigma = group.random_element(rng, settings.word_length)
        tally.record("member", group.member(sigma).ok, (t, [str(g) for g in word]))
        tally.record("inverse_member", group.member(sigma.inverse()).ok, t)
        tally.record("product_member", group.member(sigma @ previous).ok, t)
        u = ThetaVector.from_entries(ring, group.n, {i: ring.random(rng) for i in group.theta})
        tally.record("polarity", group.polarity_identity(sigma, u), (t, u))
        previous = sigma
    return tally.results


def heisenberg_suite(group: GroupContext, settings: SelftestSettings) -> Dict[str, dict]:
    """Group and R-module laws of the Heisenberg groups, the trace and Delta itself."""
    names = ["associative", "inverse", "scale_add", "scale_mul", "trace_add", "trace_scale", "delta_bounds", "sum_expand"]
    tally = RelationTally(names)
    if not isinstance(group, UnitaryGroup):
        return tally.results
    rng = np.random.default_rng(settings.seed)
    ring = group.ring
    for sign in (1, -1):
        hg = group.heis(sign)
        elems = hg.all_elements()

        def pick():
            return elems[int(rng.integers(len(elems)))]

        for _ in range(settings.samples):
            h1, h2, h3 = pick(), pick(), pick()
            a, b = ring.random(rng), ring.random(rng)
            tally.record("associative", hg.add(hg.add(h1, h2), h3) == hg.add(h1, hg.add(h2, h3)), (sign, h1, h2, h3))
            tally.record("inverse", hg.add(h1, hg.neg(h1)) == hg.zero, (sign, h1))
            lhs = hg.scale(hg.add(h1, h2), a)
            tally.record("scale_add", lhs == hg.add(hg.scale(h1, a), hg.scale(h2, a)), (sign, h1, h2, a))
            tally.record("scale_mul", hg.scale(hg.scale(h1, a), b) == hg.scale(h1, a * b), (sign, h1, a, b))
            trace = hg.trace(hg.add(h1, h2))
            tally.record("trace_add", trace == hg.trace(h1) + hg.trace(h2), (sign, h1, h2))
            scaled = hg.trace(hg.scale(h1, a))
            tally.record("trace_scale", scaled == hg.bar(a) * hg.trace(h1) * a, (sign, h1, a))
        param = group.delta_for(sign)
        bounds = hg.delta_min_elements() <= param.elems <= hg.delta_max_elements() and param.is_closed()
        tally.record("delta_bounds", bounds, sign)
    max_elems = sorted(HeisenbergGroup(ring).delta_max_elements(), key=lambda h: h.key())
    for _ in range(settings.samples):
        h = max_elems[int(rng.integers(len(max_elems)))]
        xs = [ring.random(rng) for _ in range(1 + int(rng.integers(3)))]
        lhs, rhs = scale_sum_expand(h, xs, ring)
        tally.record("sum_expand", lhs == rhs, (h, [str(x) for x in xs]))
    return tally.results


def commutator_suite(group: GroupContext, settings: SelftestSettings) -> Dict[str, dict]:
    """Expanded commutator certificates have twice the inner count and the right value; ^{b^-1}[a, bc] = [b^-1, a][a, c]."""
    rng = np.random.default_rng(settings.seed)
    tally = RelationTally(["count", "value", "inverse", "product", "conjugated_commutator"])
    _, sigma = group.random_element(rng, settings.word_length)
    base = Cert.of_sigma(group, sigma)
    for t in range(settings.samples):
        inner = base.conj(group.random_word(rng, 2))
        if t % 2:
            inner = inner + base.inverse().conj(group.random_word(rng, 3))
        word = group.random_word(rng, 1 + int(rng.integers(3)))
        outer = comm_left(word, inner)
        w = group.word_matrix(word)
        expected = w @ inner.value @ w.inverse() @ inner.inv
        tally.record("count", len(outer) == 2 * len(inner), t)
        tally.record("value", outer.value == expected, t)
        tally.record("inverse", (outer.value @ outer.inv).is_identity(), t)
        tally.record("product", factors_product(group, sigma, base.inv, outer.factors) == outer.value, t)
    for t in range(settings.samples):
        a, b, c = (group.random_element(rng, settings.word_length)[1] for _ in range(3))
        b_inv = b.inverse()
        lhs = conjugate(b_inv, commutator(a, b @ c))
        tally.record("conjugated_commutator", lhs == commutator(b_inv, a) @ commutator(a, c), t)
    return tally.results


def crosscheck_suite(group: GroupContext, settings: SelftestSettings) -> Dict[str, dict]:
    """Orthogonal generators and membership inside the unitary context with lambda=1, mu=2."""
    tally = RelationTally(["short", "extra", "member"])
    if not isinstance(group, OrthoGroup) or group.ring.deg != 1 or group.ring.conj_on:
        return tally.results
    rng = np.random.default_rng(settings.seed)
    ring2 = parse_ring(group.ring.describe(), "id", 1, 2)
    uni = ortho_as_unitary_context(ring2, group.n)
    for (i, j) in group.short_pairs():
        x = group.ring.random(rng)
        a = group.gen_matrix(ElemGen.short(i, j, x))
        b = uni.gen_matrix(ElemGen.short(i, j, ring2(x.c)))
        tally.record("short", np.array_equal(a.data, b.data), (i, j, x))
    for i in group.theta_hb:
        for x in group.ring.elements:
            a = group.gen_matrix(group.extra(i, x))
            x2 = ring2(x.c)
            b = uni.gen_matrix(ElemGen.extra(i, x2, -(x2 * x2)))
            tally.record("extra", np.array_equal(a.data, b.data), (i, x))
    for t in range(settings.samples):
        _, sigma = group.random_element(rng, settings.word_length)
        lifted = uni.matrix_from_json(group.matrix_to_json(sigma))
        tally.record("member", uni.member(lifted).ok, t)
    return tally.results


def levels_suite(group: GroupContext, settings: SelftestSettings) -> Dict[str, dict]:
    """Random elements lie in the full congruence subgroup of their level; level generators are principal."""
    rng = np.random.default_rng(settings.seed)
    tally = RelationTally(["full_congruence", "short_generators", "extra_generators"])
    ring = group.ring
    for t in range(settings.trials):
        _, sigma = group.random_element(rng, settings.word_length)
        if isinstance(group, UnitaryGroup):
            level = level_of_unitary(group, sigma)
            tally.record("full_congruence", cu_member_max(group, sigma, level.I), t)
            omega = level.omega
            for x in level.I.sorted_elements()[: settings.samples]:
                gen = group.short(1, 2, x)
                ok = is_level_elementary_unitary(gen, level.I, omega)
                ok = ok and u_principal_member(group, group.gen_matrix(gen), level.I, omega)
                tally.record("short_generators", ok, (t, x))
            for i in (1, -1):
                for h in omega.with_sign(-eps(i)).sorted_elements()[: settings.samples]:
                    gen = ElemGen.extra(i, h.x, h.y)
                    ok = is_level_elementary_unitary(gen, level.I, omega)
                    ok = ok and u_principal_member(group, group.gen_matrix(gen), level.I, omega)
                    tally.record("extra_generators", ok, (t, i, h))
        else:
            pair = level_of_ortho(group, sigma)
            tally.record("full_congruence", co_member(group, sigma, pair.I, pair.J), t)
            for x in pair.I.sorted_elements():
                m = group.gen_matrix(group.short(1, 2, x))
                ok = o_principal_member(group, m, pair.I, pair.J) and co_member(group, m, pair.I, pair.J)
                tally.record("short_generators", ok, (t, x))
            for x in pair.J.sorted_elements():
                m = group.gen_matrix(group.extra(1, x))
                ok = o_principal_member(group, m, pair.I, pair.J) and co_member(group, m, pair.I, pair.J)
                tally.record("extra_generators", ok, (t, x))
    return tally.results


def decomposition_suite(group: GroupContext, settings: SelftestSettings) -> Dict[str, dict]:
    """Every kind on random sigma: certificate verifies, stays in bound and targets the level."""
    rng = np.random.default_rng(settings.seed)
    tally = RelationTally(["verified", "column_bound", "target_level"])
    if not settings.decompose:
        return tally.results
    unitary = isinstance(group, UnitaryGroup)
    for t in range(settings.trials):
        _, sigma = group.random_element(rng, settings.word_length)
        if unitary:
            level = level_of_unitary(group, sigma)
        else:
            pair = level_of_ortho(group, sigma)
        for kind in KINDS:
            choices = valid_indices(group, kind)
            idx = choices[int(rng.integers(len(choices)))]
            witness = (t, kind, idx)
            try:
                if unitary:
                    a = None
                    if kind in PARAM_KINDS:
                        js = group.delta.first_components
                        a = js[int(rng.integers(len(js)))]
                    cert = decompose_unitary(group, sigma, kind, idx, a)
                else:
                    cert = decompose_ortho(group, sigma, kind, idx)
            except CertError as exc:
                tally.record("verified", False, (witness, str(exc)))
                continue
            report = verify_certificate(cert)
            tally.record("verified", report.ok, (witness, report.reason))
            if "column" in cert.sub_counts:
                tally.record("column_bound", cert.sub_counts["column"] <= column_bound(group.n), witness)
            target = group.gen_matrix(cert.target)
            if unitary:
                in_level = cu_member_max(group, target, level.I)
            else:
                in_level = is_level_elementary_ortho(cert.target, pair.I, pair.J)
                in_level = in_level and co_member(group, target, pair.I, pair.J)
            tally.record("target_level", in_level, witness)
    return tally.results


SUITES: Dict[str, Suite] = {
    "commutators": commutator_suite,
    "decompositions": decomposition_suite,
    "heisenberg": heisenberg_suite,
    "levels": levels_suite,
    "membership": membership_suite,
    "ortho_unitary_crosscheck": crosscheck_suite,
    "relations": relations_suite,
}


def merge_suite(name: str, results: Dict[str, dict]) -> dict:
    failed = {k: v for k, v in results.items() if not v["passed"]}
    return {
        "passed": not failed,
        "checked": sum(v["checked"] for v in results.values()),
        "failures": {k: v["counterexample"] for k, v in sorted(failed.items())},
    }


def run_selftest(
    groups: Iterable[GroupContext],
    settings: Optional[SelftestSettings] = None,
    suites: Optional[Dict[str, Suite]] = None,
) -> SelftestReport:
    """
    Run every suite on every group context.

    Args:
        groups: Group contexts to test
        settings: Sample sizes and seed
        suites: Suites by name, :data:`SUITES` when omitted

    Returns:
        Merged report; ``passed`` only when every check passed
    """
    settings = settings or SelftestSettings()
    suites = SUITES if suites is None else suites
    report = SelftestReport()
    jobs: List[Tuple[GroupContext, str]] = [(g, name) for g in groups for name in sorted(suites)]
    for group, name in tqdm(jobs, desc="selftest", unit="suite", leave=False):
        key = f"{group.tag}/{group.ring.describe()}/{name}"
        try:
            results = suites[name](group, settings)
        except CertError as exc:
            logger.error(f"Suite {key} raised {exc!r}")
            results = {"raised": {"passed": False, "checked": 1, "counterexample": str(exc)}}
        report.results[key] = merge_suite(name, results)
        logger.debug(f"Suite {key}: passed={report.results[key]['passed']}")
    logger.info(f"Selftest finished: {len(report.results)} suites, failures={report.failures()}")
    return report


def render_table(report: SelftestReport, console) -> None:
    table = Table(title="selftest")
    table.add_column("suite")
    table.add_column("checks", justify="right")
    table.add_column("result")
    for key in sorted(report.results):
        r = report.results[key]
        table.add_row(key, str(r["checked"]), "[green]pass[/green]" if r["passed"] else "[red]FAIL[/red]")
    console.print(table)
