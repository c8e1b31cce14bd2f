"""Exact-pulse spectrum at w0/2 against the monochromatic closed form, for growing w0 tau."""
import argparse

from dce_mirror import MirrorParams
from dce_mirror.verify import convergence_deviations


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mu0", type=float, default=1.0)
    ap.add_argument("--chi0", type=float, default=0.0)
    ap.add_argument("--lambda0", type=float, default=0.0)
    ap.add_argument("--omega0-tau", type=float, nargs="+", default=[5, 10, 20, 50, 100, 200, 500, 1000, 5000])
    args = ap.parse_args()

    params = MirrorParams(args.mu0, args.chi0, args.lambda0, 0.01)
    print("omega0_tau,relative_deviation")
    for q, dev in convergence_deviations(args.omega0_tau, params=params).items():
        print(f"{q:g},{dev:.6e}")


if __name__ == "__main__":
    main()
