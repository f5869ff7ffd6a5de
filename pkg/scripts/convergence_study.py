"""Finite-difference convergence of the d omega(x, Jx, z) identity.

Prints the max residual over random interior points for a ladder of step
sizes, with halving ratios. Second order stencils should give ratios near 4
until round-off takes over at small h; order 4 gives ratios near 16.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from singfol.geometry import orthogonal_j_from_frame, random_smooth_data, verify_domega


@dataclass
class Config:
    seed: int = 1
    points: int = 50
    h0: float = 4e-2
    levels: int = 7
    order: int = 2
    amplitude: float = 0.1


def run(cfg: Config) -> list[tuple[float, float]]:
    data = random_smooth_data(cfg.seed, cfg.amplitude)
    J = orthogonal_j_from_frame(data.g)
    pts = data.box.sample(np.random.default_rng(cfg.seed), cfg.points)
    rows = []
    for i in range(cfg.levels):
        h = cfg.h0 / 2**i
        r = max(verify_domega(data.g, J, data.x, data.z, p, h, data.box, cfg.order).residual for p in pts)
        rows.append((h, r))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = Config(**vars(ap.parse_args()))
    rows = run(cfg)
    print(f"{'h':>10} {'max residual':>14} {'ratio':>8}")
    prev = None
    for h, r in rows:
        ratio = f"{prev / r:8.3f}" if prev else " " * 8
        print(f"{h:10.3e} {r:14.4e} {ratio}")
        prev = r


if __name__ == "__main__":
    main()
