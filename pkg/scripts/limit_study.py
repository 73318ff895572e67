"""Smoothed triangular bands: T-pattern lengths and distance to the PL limit."""
import argparse
import time
from dataclasses import dataclass, field

from moebiuskit.bound import SQRT3
from moebiuskit.constructions import convergence_record, smooth_family


@dataclass
class StudyConfig:
    eps: list = field(default_factory=lambda: [0.2, 0.1, 0.05, 0.025])
    samples: int = 512


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", default="0.2,0.1,0.05,0.025")
    ap.add_argument("--samples", type=int, default=512)
    args = ap.parse_args()
    cfg = StudyConfig([float(v) for v in args.eps.split(",")], args.samples)

    print(f"{'eps':>7} {'lambda':>9} {'t':>9} {'H1':>9} {'H2':>9} {'D1':>9} {'D2':>9} "
          f"{'sup':>8} {'diag':>8} {'lb-sqrt3':>9} {'sec':>5}")
    for eps in cfg.eps:
        start = time.perf_counter()
        rec = convergence_record(smooth_family(eps, cfg.samples), eps)
        sec = time.perf_counter() - start
        print(f"{eps:7.4f} {rec.lam:9.6f} {rec.t:9.6f} {rec.H1:9.6f} {rec.H2:9.6f} {rec.D1:9.6f} {rec.D2:9.6f} "
              f"{rec.sup_distance:8.5f} {rec.diagonal_distance:8.5f} {rec.lower_bound - SQRT3:9.2e} {sec:5.2f}")
    print(f"limits: H -> {1 / SQRT3:.6f}, D -> {2 / SQRT3:.6f}, lambda -> {SQRT3:.6f}")


if __name__ == "__main__":
    main()
