"""Random normal-form games encoded as one-model causal games.

Reports how the equilibrium count is distributed and times the enumeration.
With ``--compare`` every game is also solved by a plain numpy best-response
scan and mismatches are listed.

    python3 scripts/reduction_check.py --games 500 --max-players 3 --max-actions 4 --compare
"""

import argparse
import itertools
import sys
import time
from collections import Counter

import numpy as np

from causalgames import enumerate_equilibria
from causalgames.generators import game_from_payoffs


def numpy_pure_nash(payoffs, tol=1e-9):
    n = payoffs.shape[0]
    out = []
    for profile in itertools.product(*(range(m) for m in payoffs.shape[1:])):
        if all(
            payoffs[i][profile[:i] + (slice(None),) + profile[i + 1:]].max() <= payoffs[i][profile] + tol
            for i in range(n)
        ):
            out.append(profile)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--games", type=int, default=200)
    ap.add_argument("--max-players", type=int, default=3)
    ap.add_argument("--max-actions", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--integer", action="store_true", help="small integer payoffs (many ties)")
    ap.add_argument("--compare", action="store_true")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    counts = Counter()
    mismatches = []
    start = time.perf_counter()
    for k in range(args.games):
        n = int(rng.integers(2, args.max_players + 1))
        shape = tuple(int(m) for m in rng.integers(1, args.max_actions + 1, size=n))
        payoffs = rng.integers(0, 4, size=(n, *shape)).astype(float) if args.integer else rng.normal(size=(n, *shape))
        found = sorted(tuple(int(a) for a in p) for p in enumerate_equilibria(game_from_payoffs(payoffs)).profiles)
        counts[len(found)] += 1
        if args.compare and found != sorted(numpy_pure_nash(payoffs)):
            mismatches.append(k)
    elapsed = time.perf_counter() - start

    print(f"{args.games} games in {elapsed:.2f}s")
    for c in sorted(counts):
        print(f"  {c} pure equilibria: {counts[c]}")
    if args.compare:
        print(f"mismatches: {mismatches or 'none'}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
