"""Exact digraph isomorphism testing and automorphism counting by
individualization and refinement over canonically colored pair matrices.

Isomorphisms of two digraphs are exactly the bijections that carry the
canonical stable pair coloring of one onto that of the other (the canonical
names make the colorings of different graphs comparable, and the arc
relation is a union of color classes).  The search therefore works on the
stable colorings: a vertex partition is maintained on both sides in
lockstep, refined by structural signatures against the fixed pair colors,
and a vertex of the first graph is individualized against each compatible
vertex of the second when refinement stalls.

Per node the refinement recolors a vertex x by the multiset over all w of
(cell(w), color(x, w), color(w, x)); only vertices in splittable cells are
recomputed.  Candidate leaves are verified color-exactly, and every emitted
isomorphism witness is re-verified arc-exactly before return, so the engine
never reports a false positive; negatives come from exhausted search.

Automorphism group orders use the orbit-stabilizer chain: the order is the
orbit length of the first individualized vertex times the order of its
stabilizer, with found generators closing orbits to skip searches.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coherent import CoherentConfiguration, wl_close
from .digraph import Digraph

NODE_BUDGET_DEFAULT = 10_000_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class IsoCertificate:
    kind: str                              # "isomorphic" | "non-isomorphic" | "undetermined"
    mapping: np.ndarray | None = None      # vertex bijection g1 -> g2 when isomorphic
    invariant_diff: dict | None = None     # refinement-based distinguisher
    nodes: int = 0
    detail: str = ""

    @property
    def isomorphic(self) -> bool:
        return self.kind == "isomorphic"

    def to_json(self) -> dict:
        out: dict = {"type": self.kind}
        if self.mapping is not None:
            out["mapping"] = [int(v) for v in self.mapping]
        if self.invariant_diff is not None:
            out["invariant_diff"] = self.invariant_diff
        return out


class _PartitionSearch:
    """Backtracking search for color-preserving bijections between two
    pair-colored vertex sets with a common canonical palette."""

    def __init__(self, c1: np.ndarray, c2: np.ndarray, node_budget: int):
        if c1.shape != c2.shape or c1.shape[0] != c1.shape[1]:
            raise ValueError("colorings must be square and of equal order")
        self.c1 = c1.astype(np.int64)
        self.c2 = c2.astype(np.int64)
        self.n = c1.shape[0]
        self.budget = node_budget
        self.nodes = 0
        self.mult = max(int(self.c1.max()), int(self.c2.max())) + 2 + 2 * self.n
        self._root_gens_factory = None
        self._root_pending = False

        d1, d2 = self.c1.diagonal(), self.c2.diagonal()
        vals = np.unique(np.concatenate([d1, d2]))
        self.pi1_0 = np.searchsorted(vals, d1).astype(np.int64)
        self.pi2_0 = np.searchsorted(vals, d2).astype(np.int64)
        self.ncells_0 = len(vals)

    # -- partition refinement -------------------------------------------------

    def _signatures(self, c, pi, active):
        rows = np.empty((len(active), self.n + 1), dtype=np.int64)
        rows[:, 0] = pi[active]
        codes = (pi[None, :] * self.mult + c[active, :]) * self.mult + c[:, active].T
        rows[:, 1:] = np.sort(codes, axis=1)
        return rows

    def _refine(self, pi1, pi2, ncells):
        """Refine both sides to joint stability; None when sides disagree."""
        while True:
            s1 = np.bincount(pi1, minlength=ncells)
            s2 = np.bincount(pi2, minlength=ncells)
            if not np.array_equal(s1, s2):
                return None
            splittable = np.flatnonzero(s1 >= 2)
            if splittable.size == 0:
                return pi1, pi2, ncells
            active1 = np.flatnonzero(np.isin(pi1, splittable))
            active2 = np.flatnonzero(np.isin(pi2, splittable))
            rows = np.vstack(
                [
                    self._signatures(self.c1, pi1, active1),
                    self._signatures(self.c2, pi2, active2),
                ]
            )
            _, inverse = np.unique(rows, axis=0, return_inverse=True)
            inverse = inverse.ravel()
            new1, new2 = pi1.copy(), pi2.copy()
            new1[active1] = ncells + inverse[: len(active1)]
            new2[active2] = ncells + inverse[len(active1):]
            vals = np.unique(np.concatenate([new1, new2]))
            new1 = np.searchsorted(vals, new1)
            new2 = np.searchsorted(vals, new2)
            if len(vals) == ncells:
                return pi1, pi2, ncells
            pi1, pi2, ncells = new1, new2, len(vals)

    # -- search ----------------------------------------------------------------

    def search(self, forced: tuple[tuple[int, int], ...], root_gens_factory=None):
        """A bijection f with c2[f(u), f(v)] = c1[u, v] respecting the forced
        pairs, or None when none exists.

        root_gens_factory, when given, supplies automorphism generators of
        the second coloring; at the first branching node the candidates are
        then cut to orbit representatives (composing a witness with an
        automorphism of the second graph reaches every orbit member, so this
        loses no solutions).
        """
        pi1 = self.pi1_0.copy()
        pi2 = self.pi2_0.copy()
        ncells = self.ncells_0
        for k, (u, v) in enumerate(forced):
            pi1[u] = ncells + k
            pi2[v] = ncells + k
        self._root_gens_factory = root_gens_factory
        self._root_pending = root_gens_factory is not None
        return self._descend(pi1, pi2, ncells + len(forced))

    def _descend(self, pi1, pi2, ncells):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exhausted")
        state = self._refine(pi1, pi2, ncells)
        if state is None:
            return None
        pi1, pi2, ncells = state
        sizes = np.bincount(pi1, minlength=ncells)
        if sizes.max() <= 1:
            f = np.empty(self.n, dtype=np.int64)
            f[np.argsort(pi1)] = np.argsort(pi2)
            if np.array_equal(self.c2[np.ix_(f, f)], self.c1):
                return f
            return None
        # smallest splittable cell, ties by lowest id; branch vertices ascending
        target = int(np.flatnonzero(sizes == sizes[sizes >= 2].min())[0])
        u = int(np.flatnonzero(pi1 == target)[0])
        candidates = np.flatnonzero(pi2 == target)
        if self._root_pending:
            self._root_pending = False  # prune only the outermost branching
            if len(candidates) > 8:
                gens = self._root_gens_factory()
                if gens:
                    candidates = _orbit_representatives(candidates, gens)
        for v in candidates:
            b1, b2 = pi1.copy(), pi2.copy()
            b1[u] = ncells
            b2[v] = ncells
            f = self._descend(b1, b2, ncells + 1)
            if f is not None:
                return f
        return None

    def refined_cells(self, forced: tuple[tuple[int, int], ...]):
        pi1 = self.pi1_0.copy()
        pi2 = self.pi2_0.copy()
        ncells = self.ncells_0
        for k, (u, v) in enumerate(forced):
            pi1[u] = ncells + k
            pi2[v] = ncells + k
        return self._refine(pi1, pi2, ncells + len(forced))


def _orbit_representatives(candidates: np.ndarray, gens: list[np.ndarray]) -> np.ndarray:
    """Lowest member of each orbit of the group generated by gens, among candidates."""
    seen: set[int] = set()
    reps = []
    for v in candidates:
        vi = int(v)
        if vi in seen:
            continue
        reps.append(vi)
        orbit = {vi}
        frontier = [vi]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = int(g[x])
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        seen |= orbit
    return np.array(reps, dtype=np.int64)


# -- invariants -----------------------------------------------------------------


def _closure_invariants(g: Digraph, cc: CoherentConfiguration) -> dict:
    arc_colors = sorted(int(c) for c in np.unique(cc.color[g.arcs])) if g.arcs.any() else []
    return {
        "rank": cc.rank,
        "color_multiset": tuple(int(x) for x in cc.color_multiset()),
        "tensor": tuple(sorted((r, s, t, c) for (r, s, t), c in cc.tensor.items())),
        "arc_colors": tuple(arc_colors),
    }


def are_isomorphic(
    g1: Digraph,
    g2: Digraph,
    cc1: CoherentConfiguration | None = None,
    cc2: CoherentConfiguration | None = None,
    node_budget: int = NODE_BUDGET_DEFAULT,
    g2_aut_gens: list[np.ndarray] | None = None,
) -> IsoCertificate:
    """Exact isomorphism test with a verified witness either way."""
    if g1.n != g2.n:
        raise ValueError("graphs must have the same number of vertices")
    cc1 = cc1 if cc1 is not None else wl_close(g1)
    cc2 = cc2 if cc2 is not None else wl_close(g2)
    inv1 = _closure_invariants(g1, cc1)
    inv2 = _closure_invariants(g2, cc2)
    if inv1 != inv2:
        keys = sorted(k for k in inv1 if inv1[k] != inv2[k])
        return IsoCertificate(
            "non-isomorphic",
            invariant_diff={
                "fields": keys,
                "rank": {"left": inv1["rank"], "right": inv2["rank"]},
            },
            detail=f"canonical closure invariants differ: {keys}",
        )
    search = _PartitionSearch(cc1.color, cc2.color, node_budget)

    def root_gens():
        if g2_aut_gens is not None:
            return g2_aut_gens
        return _automorphism_group(cc2.color, node_budget)[1]

    try:
        f = search.search((), root_gens_factory=root_gens)
    except BudgetExceeded:
        return IsoCertificate("undetermined", nodes=search.nodes, detail="node budget exhausted")
    if f is None:
        return IsoCertificate(
            "non-isomorphic",
            nodes=search.nodes,
            detail="exhaustive individualization-refinement found no bijection",
        )
    if not np.array_equal(g2.arcs[np.ix_(f, f)], g1.arcs):
        raise RuntimeError("witness failed the arc-exact check")  # engine bug
    return IsoCertificate("isomorphic", mapping=f, nodes=search.nodes)


# -- automorphism groups -----------------------------------------------------------


def _orbit_close(orbit: set[int], gens: list[np.ndarray]) -> set[int]:
    frontier = list(orbit)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = int(g[x])
            if y not in orbit:
                orbit.add(y)
                frontier.append(y)
    return orbit


def _automorphism_group(
    color: np.ndarray, node_budget: int, fixed: tuple[int, ...] = ()
) -> tuple[int, list[np.ndarray]]:
    search = _PartitionSearch(color, color, node_budget)

    def rec(forced: tuple[tuple[int, int], ...]) -> tuple[int, list[np.ndarray]]:
        state = search.refined_cells(forced)
        if state is None:
            raise RuntimeError("self-refinement disagreed with itself")  # engine bug
        pi1, _, ncells = state
        sizes = np.bincount(pi1, minlength=ncells)
        if sizes.max() <= 1:
            return 1, []
        target = int(np.flatnonzero(sizes == sizes[sizes >= 2].min())[0])
        members = np.flatnonzero(pi1 == target)
        u = int(members[0])
        sub_order, gens = rec(forced + ((u, u),))
        orbit = {u}
        for v in members[1:]:
            if int(v) in orbit:
                continue
            f = search.search(forced + ((u, int(v)),))
            if f is not None:
                gens.append(f)
                _orbit_close(orbit, gens)
        return len(orbit & set(int(m) for m in members)) * sub_order, gens

    base = tuple((w, w) for w in fixed)
    order, gens = rec(base)
    return order, gens


def automorphism_order(
    g: Digraph,
    cc: CoherentConfiguration | None = None,
    node_budget: int = NODE_BUDGET_DEFAULT,
    fixed: tuple[int, ...] = (),
) -> int:
    """Order of the automorphism group (of the stabilizer of the fixed
    vertices, when given); raises BudgetExceeded when the search cap is hit."""
    cc = cc if cc is not None else wl_close(g)
    order, gens = _automorphism_group(cc.color, node_budget, fixed)
    for f in gens:
        if not np.array_equal(g.arcs[np.ix_(f, f)], g.arcs):
            raise RuntimeError("generator failed the arc-exact check")  # engine bug
    return order


def automorphism_generators(
    g: Digraph,
    cc: CoherentConfiguration | None = None,
    node_budget: int = NODE_BUDGET_DEFAULT,
    fixed: tuple[int, ...] = (),
) -> tuple[int, list[np.ndarray]]:
    cc = cc if cc is not None else wl_close(g)
    return _automorphism_group(cc.color, node_budget, fixed)


# -- class counting ------------------------------------------------------------------


@dataclass
class IsoClassResult:
    count: int
    exact: bool
    pair_results: dict = field(default_factory=dict)   # (i, j) -> kind or "iso/non-iso via ..."
    certificates: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "exact": self.exact,
            "pairs": {f"{i},{j}": v for (i, j), v in sorted(self.pair_results.items())},
        }


def iso_class_count(
    graphs: list[Digraph],
    ccs: list[CoherentConfiguration] | None = None,
    node_budget: int = NODE_BUDGET_DEFAULT,
) -> IsoClassResult:
    """Number of isomorphism classes by pairwise testing with transitivity
    shortcuts; an undetermined pair demotes the answer to a lower bound."""
    m = len(graphs)
    if m == 0:
        return IsoClassResult(0, True)
    if ccs is None:
        ccs = [wl_close(g) for g in graphs]
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    noniso: set[tuple[int, int]] = set()

    def proven_noniso(a, b) -> bool:
        ra, rb = find(a), find(b)
        return any({find(x), find(y)} == {ra, rb} for x, y in noniso)

    pair_results: dict = {}
    certificates: dict = {}
    undetermined = False
    aut_gens: dict[int, list[np.ndarray]] = {}

    def gens_for(j: int) -> list[np.ndarray]:
        if j not in aut_gens:
            try:
                aut_gens[j] = _automorphism_group(ccs[j].color, node_budget)[1]
            except BudgetExceeded:
                aut_gens[j] = []  # pruning is optional; the pair search keeps its own cap
        return aut_gens[j]

    for i in range(m):
        for j in range(i + 1, m):
            if find(i) == find(j):
                pair_results[(i, j)] = "isomorphic (via transitivity)"
                continue
            if proven_noniso(i, j):
                pair_results[(i, j)] = "non-isomorphic (via transitivity)"
                continue
            cert = are_isomorphic(
                graphs[i], graphs[j], ccs[i], ccs[j], node_budget, g2_aut_gens=gens_for(j)
            )
            certificates[(i, j)] = cert
            pair_results[(i, j)] = cert.kind
            if cert.kind == "isomorphic":
                parent[find(i)] = find(j)
            elif cert.kind == "non-isomorphic":
                noniso.add((i, j))
            else:
                undetermined = True

    reps = {find(i) for i in range(m)}
    if not undetermined:
        return IsoClassResult(len(reps), True, pair_results, certificates)
    # lower bound: the largest set of components that are pairwise proven distinct
    rep_list = sorted(reps)
    best = 1
    for mask in range(1, 1 << len(rep_list)):
        chosen = [rep_list[k] for k in range(len(rep_list)) if mask >> k & 1]
        if all(
            proven_noniso(a, b) for ai, a in enumerate(chosen) for b in chosen[ai + 1:]
        ):
            best = max(best, len(chosen))
    return IsoClassResult(best, False, pair_results, certificates)
