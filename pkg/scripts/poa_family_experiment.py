#!/usr/bin/env python3
"""Measure the cost ratio of the two-profile ring family.

For each component count k the family yields a shared profile (everyone
relies on one cluster member's cross edges) and a selfish profile (both
cluster members buy their own copies).  This script checks, per k and
layout:

  * both profiles are navigable (they should be for the tangential
    layout; the radial layout degenerates and is reported as such),
  * the selfish/shared edge-count ratio, which tends to 7/4 from below
    as k grows (exact at every k for the tangential layout),
  * whether the selfish profile is actually stable under exact best
    responses -- reported, not assumed.

Run:  python3 scripts/poa_family_experiment.py [--max-k 16]
"""

import argparse
from fractions import Fraction

from navgame import (
    ExactStability,
    PoaLowerBoundFamily,
    GameError,
    induce_network,
    is_navigable,
    social_cost,
    verify_equilibrium,
)


def inspect(k, layout):
    fam = PoaLowerBoundFamily(components=k, layout=layout)
    inst = fam.build()
    space = inst.space
    row = {"k": k, "layout": layout, "n": space.n}

    nav_shared = is_navigable(induce_network(inst.shared), space)
    nav_selfish = is_navigable(induce_network(inst.selfish), space)
    row["nav_shared"] = nav_shared
    row["nav_selfish"] = nav_selfish
    if not (nav_shared and nav_selfish):
        return row

    c_shared = int(social_cost(inst.shared, space))
    c_selfish = int(social_cost(inst.selfish, space))
    row["shared"] = c_shared
    row["selfish"] = c_selfish
    row["ratio"] = Fraction(c_selfish, c_shared)

    report = verify_equilibrium(space, inst.selfish, ExactStability())
    row["selfish_is_ne"] = report.stable
    if not report.stable:
        w = next(x for x in report.witnesses if x.improving)
        row["witness"] = (w.agent, w.current_cost, w.best_cost)
    return row


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-k", type=int, default=16)
    args = ap.parse_args()

    print(f"{'k':>3} {'layout':>10} {'n':>4} {'shared':>7} {'selfish':>8}"
          f" {'ratio':>7}  notes")
    for layout in ("tangential", "radial"):
        for k in range(7, args.max_k + 1):
            try:
                row = inspect(k, layout)
            except GameError as exc:
                print(f"{k:>3} {layout:>10}  -- rejected: {exc}")
                continue
            if not (row["nav_shared"] and row["nav_selfish"]):
                print(f"{k:>3} {layout:>10} {row['n']:>4} "
                      f"-- not navigable (shared={row['nav_shared']}, "
                      f"selfish={row['nav_selfish']})")
                continue
            notes = []
            if row["selfish_is_ne"]:
                notes.append("selfish profile is an exact NE")
            else:
                a, cur, best = row["witness"]
                notes.append(f"selfish NOT an NE (agent {a}: "
                             f"{cur} -> {best})")
            print(f"{row['k']:>3} {row['layout']:>10} {row['n']:>4}"
                  f" {row['shared']:>7} {row['selfish']:>8}"
                  f" {str(row['ratio']):>7}  {'; '.join(notes)}")

    print()
    print("The tangential layout keeps both profiles navigable and the")
    print("edge-count ratio pinned at 7/4.  Stability of the selfish")
    print("profile is a separate question: ring chords make backward")
    print("copies redundant for the inner pair member, so exact best")
    print("responses typically find a cheaper deviation.  The ratio is")
    print("therefore a comparison of two navigable configurations, not")
    print("a certified equilibrium gap.")


if __name__ == "__main__":
    main()
