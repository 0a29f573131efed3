# scripts/make_golden.py
"""
Regenerate the golden certificate set from seeded decompositions.

    python scripts/make_golden.py [--out tests/golden] [--seed 7] [--only ortho]

Each file is the canonical JSON of a verified certificate; reruns with the
same seed are byte-identical.
"""
import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

# Add the parent directory (project root) to sys.path
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from config.config import cfg  # noqa: E402
from src.algebra.ring_core import parse_ring  # noqa: E402
from src.certificates.certificate import KINDS, PARAM_KINDS  # noqa: E402
from src.certificates.codec import certificate_to_json, dumps_canonical  # noqa: E402
from src.certificates.verifier import verify_certificate  # noqa: E402
from src.cli.selftest import valid_indices  # noqa: E402
from src.decomposers.ortho_decomp import decompose_ortho  # noqa: E402
from src.decomposers.unitary_decomp import decompose_unitary  # noqa: E402
from src.groups.group_context import GroupContext  # noqa: E402
from src.groups.hermitian_form import parse_delta  # noqa: E402
from src.groups.ortho_group import OrthoGroup  # noqa: E402
from src.groups.unitary_group import UnitaryGroup  # noqa: E402
from src.utils.errors import VerificationError  # noqa: E402

logger = logging.getLogger(__name__)


def golden_groups(only: Optional[str] = None) -> List[Tuple[str, GroupContext]]:
    z3 = parse_ring("zmod:3")
    groups = [
        ("ortho_zmod5", OrthoGroup(parse_ring("zmod:5"), 3)),
        ("ortho_zmod8", OrthoGroup(parse_ring("zmod:8"), 3)),
        ("unitary_zmod3", UnitaryGroup(z3, 3, parse_delta(z3, "max"))),
    ]
    return [(name, g) for name, g in groups if only is None or g.tag == only]


def build_golden_set(seed: int, only: Optional[str] = None, kinds=KINDS, length: int = 12) -> Dict[str, str]:
    """
    File name -> canonical certificate text, one per group and kind.

    Raises:
        VerificationError: a freshly built certificate does not verify
    """
    out: Dict[str, str] = {}
    for name, group in golden_groups(only):
        rng = np.random.default_rng(seed)
        _, sigma = group.random_element(rng, length)
        for kind in tqdm(kinds, desc=name, leave=False):
            choices = valid_indices(group, kind)
            idx = choices[int(rng.integers(len(choices)))]
            if group.tag == "unitary":
                a = group.delta.first_components[-1] if kind in PARAM_KINDS else None
                cert = decompose_unitary(group, sigma, kind, idx, a)
            else:
                cert = decompose_ortho(group, sigma, kind, idx)
            report = verify_certificate(cert)
            if not report.ok:
                raise VerificationError(f"{name} kind {kind}: {report.reason}")
            out[f"{name}_seeded_{kind}.json"] = dumps_canonical(certificate_to_json(cert)) + "\n"
            logger.info(f"{name} kind {kind}: {report.count} factors")
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description="Regenerate golden certificates")
    parser.add_argument("--out", default=cfg.golden_dir)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--only", choices=("ortho", "unitary"))
    args = parser.parse_args()

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()],
    )
    target = Path(args.out)
    target.mkdir(parents=True, exist_ok=True)
    for fname, text in build_golden_set(args.seed, args.only).items():
        (target / fname).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {target / fname}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
