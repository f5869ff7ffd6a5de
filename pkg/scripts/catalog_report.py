"""Invariants, complex classes and default verdicts for the manifold catalog."""

import argparse
import json
from dataclasses import asdict, dataclass

from singfol.catalog import standard_test_set
from singfol.existence import (
    achiral_exists,
    enumerate_complex_classes,
    find_splittings,
    foliation_exists,
    infinite_splittings_witness,
)
from singfol.lattice import SearchTooLarge


@dataclass
class Config:
    bound: int = 3
    large_rank: int = 6  # use bound 1 above this rank
    json: bool = False


def row(inv, cfg: Config) -> dict:
    bound = cfg.bound if inv.b2 <= cfg.large_rank else 1
    out = {"name": inv.name, "b1": inv.b1, "b2": inv.b2, "chi": inv.chi, "sigma": inv.sigma,
           "parity": inv.form.parity, "bound": bound}
    try:
        cs = enumerate_complex_classes(inv, bound)
    except SearchTooLarge:
        cs = None
    out["complex_classes"] = None if cs is None else [str(c) for c in cs]
    if cs:
        c = cs[-1]
        out["foliation"] = foliation_exists(inv, inv.zero(), c).status.value
        out["splittings_in_box"] = len(find_splittings(inv, c, bound if inv.b2 <= cfg.large_rank else 0))
        w = infinite_splittings_witness(inv, c)
        out["infinitude_witness"] = w.to_dict() if w else None
    if all(b == 0 for b in inv.form.w2):
        v = achiral_exists(inv, inv.zero(), inv.zero())
        out["achiral_zero"] = v.status.value
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    cfg = Config(bound=a.bound, json=a.json)
    rows = [row(inv, cfg) for inv in standard_test_set()]
    if cfg.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    for r in rows:
        cs = r["complex_classes"]
        shown = "search too large" if cs is None else (", ".join(cs) if len(cs) <= 4 else f"{len(cs)} classes")
        print(f"{r['name']:<12} b1={r['b1']} b2={r['b2']:<2} chi={r['chi']:<3} sigma={r['sigma']:<4} "
              f"{r['parity']:<4} c: {shown or '-'}")
        for key in ("foliation", "splittings_in_box", "infinitude_witness", "achiral_zero"):
            if key in r:
                print(f"    {key}: {r[key]}")


if __name__ == "__main__":
    main()
