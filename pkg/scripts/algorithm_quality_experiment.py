#!/usr/bin/env python3
"""Edge-count quality of the undirected construction.

For random point sets the construction loop is compared against

  * the exhaustive social optimum (small n, where it is affordable),
  * the routing-degree lower bound (all n),

and its outputs are re-verified: navigable, and stable up to the
additive slack the construction is supposed to guarantee (+2 edges per
agent in the plane; one full extra strategy in higher dimensions).

Run:  python3 scripts/algorithm_quality_experiment.py [--trials 5]
"""

import argparse
import statistics
from fractions import Fraction
import time

from navgame import (
    AdditiveSlack,
    MultiplicativeSlack,
    StrategyProfile,
    UniformSquare,
    brute_force_social_optimum,
    compute_approximate_ne,
    is_navigable,
    so_lower_bound,
    verify_equilibrium,
)


def owned_profile(net):
    strategies = [set() for _ in range(net.n)]
    for (u, v), owner in net.ownership.items():
        strategies[owner].add(v if owner == u else u)
    return StrategyProfile(
        net.variant, tuple(frozenset(s) for s in strategies)
    )


def one_case(n, dim, seed, do_brute):
    space = UniformSquare(n=n, seed=seed, dimension=dim, side=10**6).build()
    t0 = time.monotonic()
    net, trace = compute_approximate_ne(space)
    elapsed = time.monotonic() - t0

    row = {
        "n": n,
        "dim": dim,
        "seed": seed,
        "edges": net.edge_count(),
        "iters": trace.iterations,
        "time": elapsed,
        "navigable": is_navigable(net, space),
        "lower": so_lower_bound(space),
    }
    if do_brute:
        row["brute"] = brute_force_social_optimum(space, "undirected").cost
    crit = (AdditiveSlack(2) if dim == 2
            else MultiplicativeSlack(Fraction(2)))
    rep = verify_equilibrium(space, owned_profile(net), crit)
    row["stable"] = rep.stable
    return row


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=5)
    args = ap.parse_args()

    plan = [
        # (n, dim, brute-force affordable?)
        (6, 2, True),
        (8, 2, True),
        (12, 2, False),
        (20, 2, False),
        (40, 2, False),
        (8, 3, False),
        (16, 3, False),
    ]
    print(f"{'n':>4} {'D':>2} {'edges':>12} {'lower':>6} {'brute':>6}"
          f" {'iters':>6} {'stable':>6} {'sec':>6}")
    for n, dim, do_brute in plan:
        rows = [one_case(n, dim, 1000 + s, do_brute)
                for s in range(args.trials)]
        assert all(r["navigable"] for r in rows), "construction not navigable"
        edges = [r["edges"] for r in rows]
        mean_e = statistics.mean(edges)
        lower = statistics.mean(r["lower"] for r in rows)
        brute = (statistics.mean(r["brute"] for r in rows)
                 if do_brute else float("nan"))
        iters = max(r["iters"] for r in rows)
        stable = sum(r["stable"] for r in rows)
        secs = max(r["time"] for r in rows)
        print(f"{n:>4} {dim:>2} {mean_e:>7.1f} (max {max(edges):>3})"
              f" {lower:>6.1f} {brute:>6.1f} {iters:>6} "
              f"{stable:>3}/{len(rows):<2} {secs:>6.2f}")

    print()
    print("'lower' is the per-agent routing-degree bound, which also")
    print("lower-bounds the social optimum; 'brute' is the exhaustive")
    print("optimum where affordable.  'stable' counts runs whose output")
    print("passed the slack re-verification (additive +2 in the plane,")
    print("multiplicative 2 otherwise).")


if __name__ == "__main__":
    main()
