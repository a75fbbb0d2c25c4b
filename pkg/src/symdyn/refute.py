"""Backtracking search for extensions of a pattern that avoid forbidden patterns.

A :class:`Problem` is a finite region of cells listed in a fixed order, a
domain of allowed symbol indices per cell, and a list of constraints.  A
constraint is a translate of a forbidden pattern lying inside the region; it is
violated when every one of its cells carries the listed symbol.

The search assigns cells in order and checks each constraint as soon as its
last cell is assigned.  Whatever happens after position ``i`` depends only on
the symbols at the *frontier* of ``i`` (assigned cells that still share an
unchecked constraint), so failed frontier states are memoised.  The memo table
doubles as a refutation: one node per failed state, each child either naming a
violated constraint or pointing at another failed state.  Checking a refutation
is a linear pass with no search.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass


@dataclass
class Problem:
    cells: list
    domains: list[tuple[int, ...]]
    constraints: list[tuple[tuple[int, int], ...]]

    def __post_init__(self):
        n = len(self.cells)
        self.by_last: list[list[int]] = [[] for _ in range(n)]
        need_until = [-1] * n
        for k, con in enumerate(self.constraints):
            last = max(p for p, _ in con)
            self.by_last[last].append(k)
            for p, _ in con:
                need_until[p] = max(need_until[p], last)
        self.frontier: list[tuple[int, ...]] = [
            tuple(j for j in range(i) if need_until[j] >= i) for i in range(n + 1)
        ]

    def __len__(self):
        return len(self.cells)


def build_problem(ctx, alphabet, forbidden, fixed: dict, region: list) -> Problem:
    """Constraints are all translates g·f of forbidden patterns with g·supp(f) inside ``region``.

    Translates that disagree with a fixed cell can never be violated and are dropped.
    """
    index = {s: i for i, s in enumerate(alphabet)}
    pos = {g: i for i, g in enumerate(region)}
    domains = []
    for g in region:
        if g in fixed:
            domains.append((index[fixed[g]],))
        else:
            domains.append(tuple(range(len(alphabet))))
    found = set()
    for f in forbidden:
        e0 = f.support[0]
        ie0 = ctx.inv(e0)
        for x in region:
            g = ctx.mul(x, ie0)
            con = []
            for e, s in f.cells:
                p = pos.get(ctx.mul(g, e))
                if p is None or index[s] not in domains[p]:
                    break
                con.append((p, index[s]))
            else:
                found.add(tuple(sorted(con)))
    return Problem(list(region), domains, sorted(found))


def _key_values(problem: Problem, i: int, assign: list) -> tuple[int, ...]:
    return tuple(assign[j] for j in problem.frontier[i])


def search(problem: Problem):
    """Find the first extension in enumeration order.

    Returns ``(assignment, None)`` on success, ``(None, refutation)`` if none exists.
    """
    n = len(problem)
    assign: list = [None] * n
    failed: dict[tuple, list] = {}
    cons = problem.constraints

    def violated(i):
        for k in problem.by_last[i]:
            if all(assign[p] == s for p, s in cons[k]):
                return k
        return None

    def dfs(i):
        if i == n:
            return True
        key = (i, _key_values(problem, i, assign))
        if key in failed:
            return False
        children = []
        for s in problem.domains[i]:
            assign[i] = s
            k = violated(i)
            if k is not None:
                children.append(["x", k])
                continue
            if dfs(i + 1):
                return True
            children.append(["n", list(_key_values(problem, i + 1, assign))])
        assign[i] = None
        failed[key] = children
        return False

    limit = sys.getrecursionlimit()
    if n + 200 > limit:
        sys.setrecursionlimit(n + 200)
    try:
        ok = dfs(0)
    finally:
        sys.setrecursionlimit(limit)
    if ok:
        return list(assign), None
    nodes = [[i, list(vals), failed[(i, vals)]] for i, vals in sorted(failed)]
    return None, nodes


def solutions(problem: Problem):
    """Every assignment satisfying all constraints, in enumeration order."""
    n = len(problem)
    assign: list = [None] * n
    cons = problem.constraints

    def rec(i):
        if i == n:
            yield list(assign)
            return
        for s in problem.domains[i]:
            assign[i] = s
            if any(all(assign[p] == t for p, t in cons[k]) for k in problem.by_last[i]):
                continue
            yield from rec(i + 1)
        assign[i] = None

    yield from rec(0)


def check_refutation(problem: Problem, nodes) -> None:
    """Raise ValueError unless ``nodes`` proves that ``problem`` has no solution."""
    n = len(problem)
    if not isinstance(nodes, list):
        raise ValueError("refutation must be a list of nodes")
    table: dict[tuple, list] = {}
    for node in nodes:
        if not (isinstance(node, list) and len(node) == 3):
            raise ValueError(f"malformed node {node!r}")
        i, vals, children = node
        if not isinstance(i, int) or not 0 <= i < n:
            raise ValueError(f"node position {i!r} out of range")
        if not isinstance(vals, list) or len(vals) != len(problem.frontier[i]):
            raise ValueError(f"node {i}: frontier has the wrong size")
        key = (i, tuple(vals))
        if key in table:
            raise ValueError(f"duplicate node {key}")
        table[key] = children
    if (0, ()) not in table:
        raise ValueError("refutation has no root node")
    for (i, vals), children in table.items():
        frontier = problem.frontier[i]
        for j, v in zip(frontier, vals):
            if v not in problem.domains[j]:
                raise ValueError(f"node {i}: symbol {v!r} outside the domain of cell {j}")
        known = dict(zip(frontier, vals))
        domain = problem.domains[i]
        if not isinstance(children, list) or len(children) != len(domain):
            raise ValueError(f"node {i}: expected {len(domain)} branches")
        for s, child in zip(domain, children):
            if not (isinstance(child, list) and len(child) == 2):
                raise ValueError(f"node {i}: malformed branch {child!r}")
            tag, arg = child
            here = dict(known)
            here[i] = s
            if tag == "x":
                if not isinstance(arg, int) or arg not in problem.by_last[i]:
                    raise ValueError(f"node {i}: constraint {arg!r} does not end at this cell")
                for p, t in problem.constraints[arg]:
                    if here.get(p) != t:
                        raise ValueError(f"node {i}: constraint {arg} is not violated")
            elif tag == "n":
                if i + 1 >= n:
                    raise ValueError(f"node {i}: branch {s} completes an extension")
                expect = [here[j] for j in problem.frontier[i + 1]]
                if arg != expect:
                    raise ValueError(f"node {i}: branch {s} points at the wrong state")
                if (i + 1, tuple(arg)) not in table:
                    raise ValueError(f"node {i}: branch {s} points at a missing node")
            else:
                raise ValueError(f"node {i}: unknown branch tag {tag!r}")
