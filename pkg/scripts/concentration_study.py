"""Posterior concentration of a single learning agent over many seeds.

One player picks a0 or a1 to make C=1.  Under both candidate models do(a0)
gives P(C=1)=0.5, so only a1 is informative; do(a1) gives 0.7 in model 0 and
0.3 in model 1.  The true model alternates with the seed.

    python3 scripts/concentration_study.py --seeds 20 --rounds 5000 --epsilon 0.1 --csv runs.csv
"""

import argparse
import csv
import sys

import numpy as np

from causalgames import BeliefState, CausalGame, CausalModel, PlayerSpec
from causalgames.sim import SimConfig, run_simulation


def learning_game(p0=0.7, p1=0.3):
    def make(p):
        return CausalModel.build(
            {"A": ("a0", "a1"), "C": (0, 1)},
            parents={"C": ("A",)},
            cpts={"A": (0.5, 0.5), "C": {"a0": (0.5, 0.5), "a1": (1 - p, p)}},
        )

    player = PlayerSpec("A", {0: 0.0, 1: 1.0}, BeliefState((0.5, 0.5)))
    return CausalGame.from_models([make(p0), make(p1)], "C", [player])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--rounds", type=int, default=5000)
    ap.add_argument("--epsilon", type=float, default=0.1)
    ap.add_argument("--threshold", type=float, default=0.95)
    ap.add_argument("--csv", help="per-seed results")
    args = ap.parse_args(argv)

    game = learning_game()
    rows = []
    for seed in range(args.seeds):
        truth = seed % 2
        trace = run_simulation(game, SimConfig(truth, args.rounds, args.epsilon, seed))
        informative = sum(r.profile == ("a1",) for r in trace.records)
        rows.append((seed, truth, trace.final_beliefs[0][truth], informative))

    posts = np.array([r[2] for r in rows])
    hits = int((posts >= args.threshold).sum())
    print(f"{'seed':>4} {'true':>4} {'posterior':>12} {'a1 rounds':>9}")
    for seed, truth, post, informative in rows:
        print(f"{seed:>4} {truth:>4} {post:>12.6f} {informative:>9}")
    print(f"\nposterior on true model >= {args.threshold}: {hits}/{args.seeds} seeds; "
          f"median {np.median(posts):.6f}, min {posts.min():.6f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["seed", "true_model", "final_posterior", "informative_rounds"])
            w.writerows([s, t, repr(p), k] for s, t, p, k in rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
