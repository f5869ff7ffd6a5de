"""Hopf degrees of polynomial singularities, exact vs. root-counting oracle."""

import argparse
import time
from dataclasses import dataclass

from singfol.singularities import hopf_degree, hopf_degree_oracle


@dataclass
class Config:
    max_p: int = 4
    max_q: int = 4
    radius: float = 0.5
    trials: int = 7
    seed: int = 0
    extra: tuple[str, ...] = ("z1^3 - z2^2", "z1*z2", "z1^2*z2 + z2^4", "z1^3 + z1*z2^3", "z1^3 + z2^5")


def families(cfg: Config):
    for p in range(1, cfg.max_p + 1):
        for q in range(1, cfg.max_q + 1):
            yield f"z1^{p + 1} + z2^{q + 1}", p * q
            yield f"z1^{p}*z2^{q}", 1
    for text in cfg.extra:
        yield text, None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-p", type=int, default=4)
    ap.add_argument("--max-q", type=int, default=4)
    ap.add_argument("--radius", type=float, default=0.5)
    ap.add_argument("--trials", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = Config(a.max_p, a.max_q, a.radius, a.trials, a.seed)
    print(f"{'polynomial':<22} {'expected':>8} {'exact':>6} {'oracle':>7} {'secs':>6}")
    mismatches = 0
    for text, want in families(cfg):
        t = time.perf_counter()
        d = hopf_degree(text)
        o = hopf_degree_oracle(text, cfg.radius, cfg.trials, seed=cfg.seed)
        dt = time.perf_counter() - t
        bad = d != o or (want is not None and d != want)
        mismatches += bad
        print(f"{text:<22} {'-' if want is None else want:>8} {d:>6} {o:>7} {dt:6.2f}{'  MISMATCH' if bad else ''}")
    print(f"{mismatches} mismatches")


if __name__ == "__main__":
    main()
