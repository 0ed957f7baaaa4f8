"""Monte Carlo pins for E s0 at beta = 1, where no closed form is published.

Prints the 10^7-sample estimates used as regression constants in
tests/test_angle_sums.py together with the quadrature values.

    python scripts/pin_beta_one.py [--samples 10000000] [--seed 20261019]
"""

import argparse

from betasimplex.angle_sums import expected_s0_d3, expected_s0_d4
from betasimplex.estimators import mc_angle_sum_direct, mc_projection_simplex_prob


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=10_000_000)
    ap.add_argument("--seed", type=int, default=20261019)
    args = ap.parse_args()

    d3 = mc_angle_sum_direct(3, 1.0, args.samples, seed=args.seed)
    d4 = mc_projection_simplex_prob(4, 1.0, args.samples, seed=args.seed).scaled(0.5)
    for label, est, exact in (("d=3 direct", d3, expected_s0_d3(1.0)),
                              ("d=4 projection/2", d4, expected_s0_d4(1.0))):
        print(f"{label:18s} mean={est.mean!r} se={est.std_error!r} "
              f"rejected={est.rejections} quadrature={exact!r} z={est.z_score(exact):+.2f}")


if __name__ == "__main__":
    main()
