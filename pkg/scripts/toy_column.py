"""Print the barycentric coding of the seven-value toy column for n = 3 and n = 5."""

import argparse

import numpy as np

from mixhclust.coding import discretize, encode_ordinal

TOY = [40, 33, 32.5, 32, 55.2, 60.1, 32]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--digits", type=int, default=3)
    args = ap.parse_args()

    levels, scale = discretize(TOY)
    print(f"mu={scale.mu}  M={scale.max}  d0={scale.d0}  m={scale.m}")
    blocks = [encode_ordinal(levels, scale.m, n) for n in args.n]
    header = ["x", "level"] + [f"n{n}_{j + 1}" for n in args.n for j in range(n)]
    print("\t".join(header))
    for i, x in enumerate(TOY):
        vals = np.concatenate([b[i] for b in blocks])
        print("\t".join([f"{x:g}", str(levels[i])] + [f"{v:.{args.digits}f}" for v in vals]))


if __name__ == "__main__":
    main()
