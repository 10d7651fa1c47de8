"""How often the inertia-gain ratio rule recovers the true number of clusters."""

import argparse
from collections import Counter

from mixhclust.pipeline import hierarchical
from mixhclust.simgen import SimDesign, generate
from mixhclust.ward import inertia_gains, select_k


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--clusters", type=int, default=3)
    ap.add_argument("--rows", type=int, default=500)
    ap.add_argument("--overlap", type=float, default=0.001)
    ap.add_argument("--runs", type=int, default=25)
    ap.add_argument("--coding", default="barycentric")
    args = ap.parse_args()

    picks = Counter()
    for seed in range(args.runs):
        data = generate(SimDesign(K=args.clusters, N=args.rows, overlap=args.overlap,
                                  seed=seed))
        d = hierarchical(data.table, data.schema, coding=args.coding).dendrogram
        picks[select_k(inertia_gains(d))] += 1
    hits = picks[args.clusters]
    print(f"selected K counts: {dict(sorted(picks.items()))}")
    print(f"true K={args.clusters} recovered in {hits}/{args.runs} runs "
          f"({100 * hits / args.runs:.0f}%)")


if __name__ == "__main__":
    main()
