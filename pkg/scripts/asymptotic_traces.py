"""Straightness of asymptotic traces and connector expansion versus delta."""
import argparse
import math

import numpy as np

from moebiuskit.asymptotic import (connector_experiment, cone, parabolic_cylinder, random_developable, sphere,
                                   trace_asymptotic)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--patches", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    dev, spread = [], []
    for _ in range(args.patches):
        patch = random_developable(rng)
        r, a = 0.4 * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi)
        tr = trace_asymptotic(patch, (r * math.cos(a), r * math.sin(a)), step=0.01, max_len=0.4)
        dev.append(tr.chord_deviation())
        spread.append(tr.normal_spread())
    print(f"developable: max chord deviation {max(dev):.2e}, max normal spread {max(spread):.2e}")
    sph = trace_asymptotic(sphere(), (0.1, 0.2), 0.01, 0.5)
    print(f"sphere control: chord deviation {sph.chord_deviation():.3e}")
    print(f"{'delta':>6} {'cone max':>10} {'cone L-d/L-1':>13} {'cylinder max':>13}")
    for delta in (0.5, 0.2, 0.1, 0.05, 0.01):
        c = connector_experiment(cone(), delta=delta)
        y = connector_experiment(parabolic_cylinder(0.15), delta=delta)
        print(f"{delta:6.2f} {c.max_ratio:10.6f} {(6 - delta) / 5:13.6f} {y.max_ratio:13.6f}")


if __name__ == "__main__":
    main()
