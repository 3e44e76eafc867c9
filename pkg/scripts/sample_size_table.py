#!/usr/bin/env python3
"""Print the minimum sampling budget that keeps the quantized design
invertible with a target probability, over a grid of problem sizes.

Example:
    python3 scripts/sample_size_table.py --eta 0.9 --sigma-min 0.05 0.1 0.2
"""

import argparse
import sys

from gsample import design


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--eta", type=float, default=0.9)
    parser.add_argument("--sigma-min", type=float, nargs="+",
                        default=[0.05, 0.1, 0.2, 0.5])
    parser.add_argument("--n", type=int, nargs="+",
                        default=[10, 50, 100, 500, 1000])
    args = parser.parse_args(argv)

    header = "sigma_min".rjust(10) + "".join(f"N={n}".rjust(9) for n in args.n)
    print(f"minimum budget M for invertibility probability >= {args.eta}")
    print(header)
    for s in args.sigma_min:
        cells = [
            str(design.min_sample_size(s, n, args.eta)).rjust(9) for n in args.n
        ]
        print(f"{s:10.3f}" + "".join(cells))
    return 0


if __name__ == "__main__":
    sys.exit(main())
