"""Sweep alpha, beta and the aspect-ratio bound; report the minimiser."""
import argparse
from dataclasses import dataclass

import numpy as np

from moebiuskit.bound import SQRT3, T0, alpha, beta, crossing_point, minimize_bound


@dataclass
class SweepConfig:
    t_min: float = 0.0
    t_max: float = 2.0
    steps: int = 2001


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-min", type=float, default=SweepConfig.t_min)
    ap.add_argument("--t-max", type=float, default=SweepConfig.t_max)
    ap.add_argument("--steps", type=int, default=SweepConfig.steps)
    cfg = SweepConfig(**{k.replace("-", "_"): v for k, v in vars(ap.parse_args()).items()})

    ts = np.linspace(cfg.t_min, cfg.t_max, cfg.steps)
    lb = np.maximum(alpha(ts), beta(ts)) / 2
    i = int(np.argmin(lb))
    t_star, value = minimize_bound(cfg.t_min, cfg.t_max)
    print(f"grid minimum      t={ts[i]:.6f} bound={lb[i]:.10f}")
    print(f"golden section    t={t_star:.12f} bound={value:.12f}")
    print(f"closed form       t={T0:.12f} bound={SQRT3:.12f}")
    roots = ", ".join(f"{r:.12f}" for r in crossing_point(-10, 10))
    print(f"sign changes of alpha-beta on [-10, 10]: {roots}")


if __name__ == "__main__":
    main()
