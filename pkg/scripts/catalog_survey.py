"""Survey the catalog: minimal polynomial, matched template and degree-n kernel sizes per entry.

    python3 scripts/catalog_survey.py --seeds 0 1 2 --degree 3
"""

from __future__ import annotations

import argparse
import json
import random
from collections import defaultdict
from dataclasses import asdict, dataclass

from dehnkit.catalog import entries, match_catalog, random_params, synthesize
from dehnkit.funceq import constraint_kernel, symmetry_filter
from dehnkit.linalg import min_poly
from dehnkit.spectral import infer_cusp_shapes, primary_matrix

GENERIC_FIELD = -7


@dataclass
class SurveyConfig:
    seeds: tuple[int, ...] = (0, 1, 2, 3)
    degree: int = 3
    filter_a: int = 1
    prefix: str = ""


@dataclass
class EntrySummary:
    template: str
    type: str
    min_poly: str
    rematched: bool
    kernel_dims: list[tuple[int, int]]


def survey(cfg: SurveyConfig) -> list[EntrySummary]:
    dims: dict[str, set] = defaultdict(set)
    rematch: dict[str, bool] = defaultdict(lambda: True)
    chosen = [e for e in entries() if e.template_id.startswith(cfg.prefix)]
    for seed in cfg.seeds:
        rng = random.Random(seed)
        for e in chosen:
            D = e.field_D if e.field_D is not None else GENERIC_FIELD
            B = synthesize(e.template_id, *random_params(e.template_id, rng))
            m = match_catalog(B)
            rematch[e.template_id] &= m is not None and m.entry.template_id == e.template_id
            P = primary_matrix(B, *infer_cusp_shapes(B, D))
            k = constraint_kernel(P, cfg.degree)
            dims[e.template_id].add((len(k), len(symmetry_filter(k, cfg.filter_a))))
    return [
        EntrySummary(e.template_id, e.type.label, str(e.min_poly), rematch[e.template_id], sorted(dims[e.template_id]))
        for e in chosen
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=list(SurveyConfig.seeds))
    ap.add_argument("--degree", type=int, default=SurveyConfig.degree)
    ap.add_argument("--prefix", default="", help="only templates whose id starts with this")
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    cfg = SurveyConfig(seeds=tuple(a.seeds), degree=a.degree, prefix=a.prefix)
    rows = survey(cfg)
    if a.json:
        print(json.dumps({"config": asdict(cfg), "entries": [asdict(r) for r in rows]}, indent=2))
        return
    for r in rows:
        varying = "  (parameter dependent)" if len(r.kernel_dims) > 1 else ""
        flag = "" if r.rematched else "  MATCH MISMATCH"
        print(f"{r.template:<18}{r.type:<5}{r.min_poly:<22}{r.kernel_dims}{varying}{flag}")


if __name__ == "__main__":
    main()
