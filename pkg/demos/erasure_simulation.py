"""Monte Carlo erasure-channel simulation around the decoding threshold.

Sweeps the channel erasure probability across the threshold of a finite
code and prints frame and bit erasure rates from the peeling decoder.
Below threshold the decoder should clear almost every frame; above it,
almost none.
"""
import argparse

from scldpc.channel import run_monte_carlo
from scldpc.lifting import make_code
from scldpc.protograph import CodeParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dl", type=int, default=3)
    ap.add_argument("--dr", type=int, default=6)
    ap.add_argument("-L", type=int, default=9)
    ap.add_argument("-M", type=int, default=256, help="lifting size")
    ap.add_argument("--modified", action="store_true")
    ap.add_argument("--eps", type=float, nargs="+",
                    default=[0.40, 0.45, 0.50, 0.55])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    params = CodeParams(args.dl, args.dr, args.L, modified=args.modified)
    code = make_code(params, args.M, args.seed)
    n = params.n_cols * args.M
    print(f"{'modified' if args.modified else 'original'} code, "
          f"n = {n} bits, {args.trials} trials per point\n")
    print(f"{'eps':>6} {'FER':>8} {'BER':>10} {'95% CI on FER':>22}")
    for eps in args.eps:
        rep = run_monte_carlo(code, eps, trials=args.trials, seed=args.seed)
        lo, hi = rep.ci
        print(f"{eps:>6.3f} {rep.fer:>8.3f} {rep.ber:>10.3e} "
              f"[{lo:.3f}, {hi:.3f}]")


if __name__ == "__main__":
    main()
