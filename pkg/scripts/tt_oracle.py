"""Compare the perpendicular-meeting-pair solver with a dense grid oracle."""
import argparse
import time

import numpy as np

from moebiuskit.t_pattern import FunctionLineField, LineFamily, grid_oracle, lemma_tt_solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20, help="families per kind")
    ap.add_argument("--grid", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    for kind in ("screw", "pencil", "generic"):
        res_s, res_o, methods, sec = [], [], {}, 0.0
        for _ in range(args.n):
            fam = LineFamily.random(rng, kind)
            start = time.perf_counter()
            r = lemma_tt_solve(fam)
            sec += time.perf_counter() - start
            _, _, best, _ = grid_oracle(FunctionLineField(fam, fam.vectorized), n=args.grid)
            res_s.append(r.residual)
            res_o.append(best)
            methods[r.method] = methods.get(r.method, 0) + 1
        res_s, res_o = np.array(res_s), np.array(res_o)
        print(f"{kind:8s} solver max={res_s.max():.1e} oracle median={np.median(res_o):.1e} "
              f"solver<=oracle: {int(np.sum(res_s <= res_o + 1e-12))}/{args.n} methods={methods} "
              f"mean solve {sec / args.n:.3f}s")


if __name__ == "__main__":
    main()
