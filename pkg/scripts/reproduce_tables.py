"""Print group orders, type censuses and slope-symmetry counts for every canonical scenario.

    python3 scripts/reproduce_tables.py --pair "5/7,3/11"
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

from dehnkit.fillings import UntypedInput, parse_pair, symmetry_set
from dehnkit.groups import SCENARIOS, ScenarioMismatch, closure, kind_for_scenario, maximal_group, type_census, verify_presentation

FIELDS = (-1, -2, -3, -7)


@dataclass
class TableConfig:
    pair: str = "5/7,3/11"
    fields: tuple[int, ...] = FIELDS
    scenarios: tuple[str, ...] = SCENARIOS
    presentations: bool = True
    c22_nonzero: bool = False


@dataclass
class Row:
    D: int
    scenario: str
    order: int
    census: dict[str, int]
    symmetries: int | None = None
    symmetries_filtered: int | None = None
    compatible: int | None = None
    presentation: dict[str, str] = field(default_factory=dict)


def build_rows(cfg: TableConfig) -> list[Row]:
    pair = parse_pair(cfg.pair)
    rows = []
    for D in cfg.fields:
        for sc in cfg.scenarios:
            try:
                G = closure(maximal_group(D, sc))
            except ScenarioMismatch:
                continue
            row = Row(D, sc, G.order, type_census(G))
            try:
                plain = symmetry_set(G, pair)
                filt = symmetry_set(G, pair, apply_filters=True, c22_nonzero=cfg.c22_nonzero)
                row.symmetries, row.symmetries_filtered = plain.count, filt.count
                row.compatible = len(plain.compatible_images)
            except UntypedInput:
                pass
            kind = kind_for_scenario(sc)
            if cfg.presentations and kind is not None:
                row.presentation = verify_presentation(G, kind).to_json()["checks"]
            rows.append(row)
    return rows


def _fmt(v: int | None) -> str:
    return "-" if v is None else str(v)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pair", default=TableConfig.pair)
    ap.add_argument("--field", type=int, action="append", help="restrict to these D (repeatable)")
    ap.add_argument("--c22-nonzero", action="store_true")
    ap.add_argument("--no-presentations", action="store_true")
    ap.add_argument("--json", action="store_true", help="emit JSON instead of a text table")
    a = ap.parse_args()
    cfg = TableConfig(
        pair=a.pair,
        fields=tuple(a.field) if a.field else FIELDS,
        presentations=not a.no_presentations,
        c22_nonzero=a.c22_nonzero,
    )
    rows = build_rows(cfg)
    if a.json:
        print(json.dumps({"config": asdict(cfg), "rows": [asdict(r) for r in rows]}, indent=2, sort_keys=True))
        return
    print(f"{'D':>3}  {'scenario':<17}{'order':>6}  {'I/II/III':<12}{'sym':>5}{'filt':>6}{'compat':>8}  presentation")
    for r in rows:
        census = "/".join(str(r.census.get(t, 0)) for t in ("I", "II", "III"))
        failed = [k for k, v in r.presentation.items() if v != "pass"]
        pres = "" if not r.presentation else ("all pass" if not failed else "fails: " + "; ".join(failed))
        print(f"{r.D:>3}  {r.scenario:<17}{r.order:>6}  {census:<12}{_fmt(r.symmetries):>5}"
              f"{_fmt(r.symmetries_filtered):>6}{_fmt(r.compatible):>8}  {pres}")


if __name__ == "__main__":
    main()
