"""Exhaustive ordinal feasibility scan for the six-move best-response cycle
template, with engine verification of every realizable hit.

Agents w=0, y=1, z=2, a=3, b=4.  Script (w, z, a, w, z, a): w builds then
drops, z drops then rebuilds, a builds then drops.  F is the permanent
background (helper-owned edges plus optional mover permanents -- ownership
does not change any of the six network states), z toggles {z,zp}, w toggles
{w,ew}, a toggles {a,ea}.  The states and conditions:

  net0 = F + z~   w disconnected (A1 fails somewhere), a connected (A2)
  net1 = net0+w~  w connected (A3)
  net2 = F + w~   z connected (A4), a disconnected (A5 fails somewhere)
  net3 = net2+a~  a connected (A6)
  net4 = F + a~   w connected (A7), z disconnected (A8 fails somewhere)
  net5 = net4+z~  z connected (A9)

A greedy route toward target t only ever compares distances to t, so each
condition splits over the five distance columns.  Per column we enumerate
every weak order of the other four nodes (75 ordered set partitions; tied
nodes cannot hop to each other, which is extra blocking power strict orders
lack).  An order is admissible if the column's share of A2 A3 A4 A6 A7 A9
all hold; across columns the three disconnection witnesses (not A1, not A5,
not A8) must be coverable.  A surviving selection of per-column orders is
realizable iff merging tied pairs and chaining the strict steps leaves the
constraint graph on the ten symmetric pair values acyclic; values then come
from a band (all in [51, 99]) so the triangle inequality is automatic.
Each realized matrix is handed to the actual dynamics engine, whose own
best-response minimality and tie-breaking decide; only a genuine six-move
cycle back to the start counts.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
from collections import deque

W, Y, Z, A, B = range(5)
NODES = (W, Y, Z, A, B)
NAMES = "wyzab"
SCRIPT = (W, Z, A, W, Z, A)
DELTAS = [(W, 1), (Z, -1), (A, 1), (W, -1), (Z, 1), (A, -1)]

F_EDGES = (
    (Y, W), (Y, Z), (Y, A), (Y, B),   # helper y's edges
    (B, W), (B, Z), (B, A),           # helper b's edges
    (W, Z), (W, A), (Z, A),           # mover permanents
)

PAIR_INDEX = {}
for _i, _p in enumerate(itertools.combinations(range(5), 2)):
    PAIR_INDEX[_p] = _i
    PAIR_INDEX[_p[::-1]] = _i


def ordered_set_partitions(items):
    if not items:
        yield ()
        return
    first = items[0]
    rest = items[1:]
    n = len(rest)
    for pick in range(1 << n):
        block = (first,) + tuple(rest[i] for i in range(n) if pick >> i & 1)
        remain = tuple(rest[i] for i in range(n) if not pick >> i & 1)
        for tail in ordered_set_partitions(remain):
            yield (block,) + tail


def adjacency(edges):
    adj = [0] * 5
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def reach_set(order, adj, t):
    """Nodes with a greedy route to t; tied nodes cannot serve each other."""
    reached = 1 << t
    for block in order:
        add = 0
        for x in block:
            if adj[x] & reached:
                add |= 1 << x
        reached |= add
    return reached


def graph_connected(adj):
    seen = 1
    frontier = [0]
    while frontier:
        u = frontier.pop()
        rest = adj[u] & ~seen
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            seen |= 1 << v
            frontier.append(v)
    return seen == 31


class UnionFind:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, x, y):
        self.p[self.find(x)] = self.find(y)


def realize(picks):
    """Merge tied pairs, chain strict steps, return per-pair depth levels
    (topological) or None on a cycle."""
    uf = UnionFind(10)
    strict = []
    for t, order in zip(NODES, picks):
        for block in order:
            for x, y2 in zip(block, block[1:]):
                uf.union(PAIR_INDEX[(x, t)], PAIR_INDEX[(y2, t)])
        for blk_a, blk_b in zip(order, order[1:]):
            strict.append((PAIR_INDEX[(blk_a[0], t)], PAIR_INDEX[(blk_b[0], t)]))
    adj = [[] for _ in range(10)]
    indeg = [0] * 10
    for pa, pb in strict:
        ra, rb = uf.find(pa), uf.find(pb)
        if ra == rb:
            return None
        adj[ra].append(rb)
        indeg[rb] += 1
    reps = {uf.find(i) for i in range(10)}
    dq = deque(r for r in reps if indeg[r] == 0)
    depth = [0] * 10
    seen = 0
    while dq:
        x = dq.popleft()
        seen += 1
        for y2 in adj[x]:
            depth[y2] = max(depth[y2], depth[x] + 1)
            indeg[y2] -= 1
            if indeg[y2] == 0:
                dq.append(y2)
    if seen != len(reps):
        return None
    return [depth[uf.find(i)] for i in range(10)]


def matrix_from_levels(levels, base=51):
    d = [[0] * 5 for _ in range(5)]
    for (u, v), idx in PAIR_INDEX.items():
        d[u][v] = base + levels[idx]
    return tuple(tuple(row) for row in d)


def initial_profile(fmask, zp, swap_owner, Variant, StrategyProfile):
    strat = [set() for _ in range(5)]
    for i in range(10):
        if fmask >> i & 1:
            owner, partner = F_EDGES[i]
            if i >= 7 and i in swap_owner:
                owner, partner = partner, owner
            strat[owner].add(partner)
    strat[Z].add(zp)
    return StrategyProfile(
        Variant.UNDIRECTED, tuple(frozenset(s) for s in strat)
    )


def engine_check(d, fmask, zp, swap_owner):
    from navgame import (
        DynamicsStatus,
        GeneralMetric,
        Scripted,
        StrategyProfile,
        Variant,
        run_dynamics,
    )

    space = GeneralMetric(d)
    initial = initial_profile(fmask, zp, swap_owner, Variant, StrategyProfile)
    trace = run_dynamics(space, initial, Scripted(SCRIPT), max_steps=10)
    ok = (
        trace.status is DynamicsStatus.CYCLE_DETECTED
        and trace.first_repeat == 0
        and len(trace.steps) == 6
        and all(s.action == "move" for s in trace.steps)
        and [(s.agent, s.new_size - s.old_size) for s in trace.steps] == DELTAS
    )
    return ok, initial, trace


def owner_variants(fmask):
    perm = [i for i in (7, 8, 9) if fmask >> i & 1]
    for pick in range(1 << len(perm)):
        yield frozenset(p for j, p in enumerate(perm) if pick >> j & 1)


ATOM_AGENTS = (W, A, W, Z, A, A, W, Z, Z)  # A1..A9


def scan(orders_by_col, fbits, verify, stop_after, rng):
    n_masks = 1 << fbits
    stats = {"combos": 0, "gate_hits": 0, "realizable": 0, "confirmed": 0}
    results = []
    for fmask in range(n_masks):
        base_edges = [F_EDGES[i] for i in range(fbits) if fmask >> i & 1]
        base = adjacency(base_edges)
        for zp in (W, Y, A, B):
            if base[Z] >> zp & 1:
                continue
            e0 = base_edges + [(Z, zp)]
            net0 = adjacency(e0)
            if not graph_connected(net0):
                continue
            for ew in (Y, Z, A, B):
                if net0[W] >> ew & 1:
                    continue
                net1 = adjacency(e0 + [(W, ew)])
                net2 = adjacency(base_edges + [(W, ew)])
                if not graph_connected(net2):
                    continue
                for ea in (W, Y, Z, B):
                    if net2[A] >> ea & 1:
                        continue
                    if zp == A and ea == Z:
                        continue  # a's toggle would equal z's toggle
                    net4 = adjacency(base_edges + [(A, ea)])
                    if not graph_connected(net4):
                        continue
                    net3 = adjacency(base_edges + [(W, ew), (A, ea)])
                    net5 = adjacency(base_edges + [(A, ea), (Z, zp)])
                    nets = (net0, net1, net2, net3, net4, net5)
                    stats["combos"] += 1
                    per_col = []
                    dead = False
                    for t in NODES:
                        bit = 1 << t
                        good = []
                        for order in orders_by_col[t]:
                            r = [reach_set(order, net, t) for net in nets]
                            if t != W and not r[1] & 1:  # A3 (w is bit 0)
                                continue
                            if t != A and not r[0] >> A & 1:  # A2
                                continue
                            if t != Z and not r[2] >> Z & 1:  # A4
                                continue
                            if t != A and not r[3] >> A & 1:  # A6
                                continue
                            if t != W and not r[4] & 1:  # A7
                                continue
                            if t != Z and not r[5] >> Z & 1:  # A9
                                continue
                            kills = 0
                            if t != W and not r[0] & 1:  # not A1
                                kills |= 1
                            if t != A and not r[2] >> A & 1:  # not A5
                                kills |= 2
                            if t != Z and not r[4] >> Z & 1:  # not A8
                                kills |= 4
                            good.append((kills, order))
                        if not good:
                            dead = True
                            break
                        per_col.append(good)
                    if dead:
                        continue
                    cover = [0] * 6
                    for ci in range(4, -1, -1):
                        m = 0
                        for k, _ in per_col[ci]:
                            m |= k
                        cover[ci] = cover[ci + 1] | m
                    if cover[0] != 7:
                        continue
                    stats["gate_hits"] += 1
                    found = process_hit(
                        fmask, zp, ew, ea, per_col, cover, verify, stats, rng
                    )
                    results.extend(found)
                    if stats["confirmed"] >= stop_after:
                        return results, stats
    return results, stats


def process_hit(fmask, zp, ew, ea, per_col, cover, verify, stats, rng,
                leaf_budget=40000, max_real=40):
    """DFS per-column order choices; realize; engine-verify."""
    confirmed = []
    state = {"leaves": 0, "real": 0}

    def dfs(ci, kills, picks):
        if stats["confirmed"] and confirmed:
            return
        if state["leaves"] >= leaf_budget or state["real"] >= max_real:
            return
        if ci == 5:
            state["leaves"] += 1
            if kills != 7:
                return
            levels = realize(picks)
            if levels is None:
                return
            stats["realizable"] += 1
            state["real"] += 1
            report_realizable(fmask, zp, ew, ea, picks, levels)
            if verify:
                d = matrix_from_levels(levels)
                for swap in owner_variants(fmask):
                    ok, initial, trace = engine_check(d, fmask, zp, swap)
                    if ok:
                        stats["confirmed"] += 1
                        confirmed.append((d, fmask, zp, swap, initial, trace))
                        report_confirmed(d, fmask, zp, ew, ea, swap)
                        return
            return
        if (kills | cover[ci]) != 7:
            return
        for k, order in per_col[ci]:
            dfs(ci + 1, kills | k, picks + [order])

    dfs(0, 0, [])
    return confirmed


def report_realizable(fmask, zp, ew, ea, picks, levels):
    fl = ",".join(
        NAMES[u] + NAMES[v] for i, (u, v) in enumerate(F_EDGES) if fmask >> i & 1
    )
    print(
        f"[realizable] F={{{fl}}} z~={NAMES[Z]}{NAMES[zp]} "
        f"w~={NAMES[W]}{NAMES[ew]} a~={NAMES[A]}{NAMES[ea]}"
    )
    for t, order in zip(NODES, picks):
        txt = " < ".join(
            "=".join(NAMES[x] for x in block) for block in order
        )
        print(f"    col {NAMES[t]}: {txt}")
    print(f"    levels {levels}")


def report_confirmed(d, fmask, zp, ew, ea, swap):
    print("[CONFIRMED by engine]")
    for row in d:
        print("   ", list(row))
    print(f"    fmask={fmask:010b} zp={zp} ew={ew} ea={ea} swap={sorted(swap)}")


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--strict", action="store_true", help="strict orders only")
    ap.add_argument("--fbits", type=int, default=10, choices=(7, 10))
    ap.add_argument("--no-verify", action="store_true")
    ap.add_argument("--stop-after", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    orders_by_col = {}
    for t in NODES:
        others = tuple(x for x in NODES if x != t)
        if args.strict:
            orders_by_col[t] = [
                tuple((x,) for x in perm)
                for perm in itertools.permutations(others)
            ]
        else:
            orders_by_col[t] = list(ordered_set_partitions(others))

    results, stats = scan(
        orders_by_col, args.fbits, not args.no_verify, args.stop_after, rng
    )
    print(
        f"[stats] combos={stats['combos']} gate_hits={stats['gate_hits']} "
        f"realizable={stats['realizable']} confirmed={stats['confirmed']}"
    )
    return 0 if results or stats["realizable"] else 1


if __name__ == "__main__":
    sys.exit(main())
