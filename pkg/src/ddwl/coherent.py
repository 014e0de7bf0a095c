"""Two-dimensional color refinement of vertex pairs, to a stable
coherent configuration with canonical color names.

The initial coloring separates looped diagonal entries, loop-free diagonal
entries, off-diagonal arcs and off-diagonal non-arcs (when loops are uniform
this is the familiar diagonal / arc / non-arc split).  One round recolors a
pair (u, v) by its old color together with the multiset over all w of the
code pairs (color(u, w), color(w, v)); rounds repeat until the partition
stops splitting, and one extra round confirms stability.

Canonical renaming.  After each round the new colors are numbered 0, 1, ...
in the order of (old color, signature multiset), where multisets are ordered
by their ascending sorted vectors.  Signatures are compared structurally,
never hashed, so color names agree between runs and between graphs of equal
order; that is what makes tensor and multiset comparisons across graphs
meaningful.

Two interchangeable signature encodings realise the same order:

  * count mode (small color count): the vector of code multiplicities,
    stored as (n - count) so that lexicographic comparison of the encoded
    rows equals sorted-vector comparison of the multisets;
  * sort mode (large color count): the sorted code vector itself.

A round uses one mode throughout, chosen from the current rank, and work is
blocked over rows to bound scratch memory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import Digraph
from .heisenberg import GroupTable

_MODE_A_MAX_CODES = 8192       # count mode while rank**2 stays at most this
_BLOCK_ELEMENT_BUDGET = 8_000_000


@dataclass
class PairColoring:
    n: int
    color: np.ndarray  # (n, n) int32, contiguous ids 0..rank-1
    round: int         # refinement rounds executed, including the confirming one


class CoherentConfiguration:
    """Stable pair coloring with fibers, valencies and intersection numbers.

    The tensor is kept sparse: a dict mapping (r, s, t) to the count of
    middle vertices w with color(u, w) = r, color(w, v) = s for any pair
    (u, v) of color t.
    """

    def __init__(self, coloring: PairColoring, tensor_check: str, seed: int):
        self.coloring = coloring
        self.n = coloring.n
        color = coloring.color
        self.rank = int(color.max()) + 1 if self.n else 0

        diag = color.diagonal()
        fiber_colors = np.unique(diag)
        self.fiber_colors = [int(c) for c in fiber_colors]
        self.fibers = [np.flatnonzero(diag == c) for c in fiber_colors]
        fiber_of = np.empty(self.n, dtype=np.int32)
        for k, verts in enumerate(self.fibers):
            fiber_of[verts] = k
        self.fiber_of = fiber_of

        self._row_counts_check(color)
        self._build_tensor(color, tensor_check, seed)

    # -- structure ----------------------------------------------------------

    def _row_counts_check(self, color):
        """Valencies: each color occurs equally often in every row of its left fiber."""
        n, rank = self.n, self.rank
        counts = np.zeros((n, rank), dtype=np.int64)
        ar = np.arange(n)
        for u in ar:
            counts[u] = np.bincount(color[u], minlength=rank)
        valencies = np.zeros(rank, dtype=np.int64)
        left = np.full(rank, -1, dtype=np.int64)
        right = np.full(rank, -1, dtype=np.int64)
        for k, verts in enumerate(self.fibers):
            block = counts[verts]
            if block.size and not (block == block[0]).all():
                raise RuntimeError("row counts vary inside a fiber; coloring unstable")
            present = np.flatnonzero(block[0]) if block.size else []
            for s in present:
                if left[s] != -1:
                    raise RuntimeError("color occurs in two distinct left fibers")
                left[s] = k
                valencies[s] = block[0, s]
        for s in range(rank):
            u = np.flatnonzero(color[int(self.fibers[left[s]][0])] == s)[0]
            right[s] = self.fiber_of[u]
        # row sums: colors inside one fiber product account for the whole block
        for k, verts in enumerate(self.fibers):
            for k2, verts2 in enumerate(self.fibers):
                sel = (left == k) & (right == k2)
                if valencies[sel].sum() != len(verts2):
                    raise RuntimeError("fiber-block row sum mismatch")
        self.valencies = valencies
        self.left_fiber = left
        self.right_fiber = right

    def _build_tensor(self, color, tensor_check, seed):
        n, rank = self.n, self.rank
        flat = color.ravel()
        order = np.argsort(flat, kind="stable")
        sorted_flat = flat[order]
        bounds = np.searchsorted(sorted_flat, np.arange(rank + 1))
        reps = order[bounds[:-1]]
        c64 = color.astype(np.int64)

        def sorted_codes(u, v):
            return np.sort(c64[u] * rank + c64[:, v])

        tensor: dict[tuple[int, int, int], int] = {}
        converse = np.empty(rank, dtype=np.int64)
        rep_pairs = []
        for t in range(rank):
            u, v = divmod(int(reps[t]), n)
            rep_pairs.append((u, v))
            converse[t] = color[v, u]
            codes, counts = np.unique(c64[u] * rank + c64[:, v], return_counts=True)
            for code, count in zip(codes, counts):
                tensor[(int(code) // rank, int(code) % rank, t)] = int(count)
        self.tensor = tensor
        self.converse = converse
        self.rep_pairs = rep_pairs

        # equal sorted code vectors <=> equal count vectors per pair
        rng = np.random.default_rng(seed)
        for t in range(rank):
            lo, hi = int(bounds[t]), int(bounds[t + 1])
            if tensor_check == "full":
                picks = np.arange(lo, hi)
            else:
                k = min(100, hi - lo)
                picks = lo + rng.choice(hi - lo, size=k, replace=False)
            base = sorted_codes(*rep_pairs[t])
            for p in picks:
                u, v = divmod(int(order[p]), n)
                if not np.array_equal(sorted_codes(u, v), base):
                    raise RuntimeError(
                        f"intersection number not well defined on color {t}"
                    )

    # -- views ---------------------------------------------------------------

    @property
    def color(self) -> np.ndarray:
        return self.coloring.color

    @property
    def rounds(self) -> int:
        return self.coloring.round

    def color_multiset(self) -> np.ndarray:
        return np.bincount(self.color.ravel(), minlength=self.rank)

    def dense_tensor(self) -> np.ndarray:
        t = np.zeros((self.rank, self.rank, self.rank), dtype=np.int64)
        for (r, s, u), c in self.tensor.items():
            t[r, s, u] = c
        return t

    def tensor_json(self) -> dict:
        entries = sorted((r, s, t, c) for (r, s, t), c in self.tensor.items())
        return {
            "rank": self.rank,
            "valencies": [int(v) for v in self.valencies],
            "tensor": [list(e) for e in entries],
        }

    def refines(self, other: "CoherentConfiguration") -> bool:
        """True if every color class of self lies inside one class of other."""
        pairs = np.stack([self.color.ravel(), other.color.ravel()], axis=1)
        uniq = np.unique(pairs, axis=0)
        return len(np.unique(uniq[:, 0])) == len(uniq)

    def __repr__(self) -> str:
        return f"CoherentConfiguration(n={self.n}, rank={self.rank}, rounds={self.rounds})"


# -- refinement core ----------------------------------------------------------


def _renumber(color: np.ndarray) -> tuple[np.ndarray, int]:
    vals, inv = np.unique(color, return_inverse=True)
    return inv.reshape(color.shape).astype(np.int32), len(vals)


def _initial_coloring(g: Digraph) -> tuple[np.ndarray, int]:
    n = g.n
    color = np.full((n, n), 3, dtype=np.int32)
    color[g.arcs] = 2
    d = np.arange(n)
    color[d, d] = np.where(g.arcs.diagonal(), 0, 1)
    return _renumber(color)


def _refine_round(color: np.ndarray, rank: int) -> tuple[np.ndarray, int]:
    n = color.shape[0]
    if n >= 65536:
        raise ValueError("refinement supports fewer than 2**16 vertices")
    c64 = color.astype(np.int64)
    ncodes = rank * rank
    count_mode = ncodes <= _MODE_A_MAX_CODES
    per_row = n * max(n, ncodes) if count_mode else n * n
    block = max(1, min(n, _BLOCK_ELEMENT_BUDGET // max(1, per_row)))

    keys: set[bytes] = set()
    pieces = []
    for start in range(0, n, block):
        stop = min(n, start + block)
        nb = stop - start
        old = color[start:stop].reshape(nb * n).astype(np.int64)
        if count_mode:
            # nb * n * ncodes stays below the block budget, so int32 suffices
            codes = color[start:stop, :, None] * np.int32(rank) + color[None, :, :]
            offs = (
                np.arange(nb, dtype=np.int32)[:, None, None] * np.int32(n)
                + np.arange(n, dtype=np.int32)[None, None, :]
            ) * np.int32(ncodes)
            codes += offs
            counts = np.bincount(codes.ravel(), minlength=nb * n * ncodes)
            counts = counts.reshape(nb * n, ncodes)
            rows = np.empty((nb * n, ncodes + 2), dtype=np.uint16)
            rows[:, 0] = old >> 16
            rows[:, 1] = old & 0xFFFF
            rows[:, 2:] = n - counts  # encodes ascending sorted-vector order
            local, inv = np.unique(rows, axis=0, return_inverse=True)
            enc = local.astype(">u2")
        else:
            codes = c64[start:stop, :, None] * rank + c64[None, :, :]  # axis 1 = w
            srt = np.sort(codes, axis=1)
            rows = np.empty((nb * n, n + 1), dtype=np.int64)
            rows[:, 0] = old
            rows[:, 1:] = srt.transpose(0, 2, 1).reshape(nb * n, n)
            local, inv = np.unique(rows, axis=0, return_inverse=True)
            enc = local.astype(">i8")
        key_bytes = [enc[k].tobytes() for k in range(len(local))]
        keys.update(key_bytes)
        pieces.append((start, stop, inv.astype(np.int64), key_bytes))

    order = {k: i for i, k in enumerate(sorted(keys))}
    new = np.empty((n, n), dtype=np.int32)
    for start, stop, inv, key_bytes in pieces:
        lmap = np.array([order[k] for k in key_bytes], dtype=np.int32)
        new[start:stop] = lmap[inv].reshape(stop - start, n)
    return new, len(order)


def _stable_coloring(color: np.ndarray, rank: int) -> tuple[np.ndarray, int, int]:
    rounds = 0
    while True:
        new, rank2 = _refine_round(color, rank)
        rounds += 1
        if rank2 == rank:
            if not np.array_equal(new, color):
                raise RuntimeError("renaming not canonical at the stable point")
            return color, rank, rounds
        color, rank = new, rank2


# -- public operations ---------------------------------------------------------


def wl_close(g: Digraph, tensor_check: str = "spot", seed: int = 0) -> CoherentConfiguration:
    """Smallest coherent configuration whose colors refine the arc relation."""
    if g.n < 1:
        raise ValueError("need at least one vertex")
    color0, rank0 = _initial_coloring(g)
    color, rank, rounds = _stable_coloring(color0, rank0)
    return CoherentConfiguration(PairColoring(g.n, color, rounds), tensor_check, seed)


def one_point_extension(
    cc: CoherentConfiguration, v: int, tensor_check: str = "spot", seed: int = 0
) -> CoherentConfiguration:
    """Re-refine with vertex v given a fresh diagonal color; {v} becomes a fiber."""
    seeded = cc.color.copy()
    seeded[v, v] = cc.rank
    color0, rank0 = _renumber(seeded)
    color, rank, rounds = _stable_coloring(color0, rank0)
    out = CoherentConfiguration(PairColoring(cc.n, color, rounds), tensor_check, seed)
    if not out.refines(cc):
        raise RuntimeError("extension does not refine the base configuration")
    if not any(len(f) == 1 and f[0] == v for f in out.fibers):
        raise RuntimeError("extension did not isolate the chosen vertex")
    return out


def as_sring_partition(cc: CoherentConfiguration, table: GroupTable) -> list[np.ndarray]:
    """Cells {g : color(e, g) = c}, one per color in the identity row.

    For the closure of a Cayley digraph over the indexed group this is the
    basic-set partition of the closure's group-ring structure.
    """
    row = cc.color[table.identity]
    return [np.flatnonzero(row == c) for c in np.unique(row)]


def wl_equivalent(g1: Digraph, g2: Digraph) -> bool:
    """Disjoint-union criterion: refine both graphs together (arc relations
    identically colored) and compare the stable color multisets of the two
    vertex-set blocks."""
    if g1.n != g2.n:
        raise ValueError("graphs must have the same number of vertices")
    n = g1.n
    arcs = np.zeros((2 * n, 2 * n), dtype=bool)
    arcs[:n, :n] = g1.arcs
    arcs[n:, n:] = g2.arcs
    color0, rank0 = _initial_coloring(Digraph(arcs))
    color, rank, _ = _stable_coloring(color0, rank0)
    m1 = np.bincount(color[:n, :n].ravel(), minlength=rank)
    m2 = np.bincount(color[n:, n:].ravel(), minlength=rank)
    return bool(np.array_equal(m1, m2))


def verify_algebraic_map(
    cc1: CoherentConfiguration, cc2: CoherentConfiguration, sigma
) -> bool:
    """True iff the color bijection sigma transports the full intersection tensor."""
    if cc1.rank != cc2.rank:
        raise ValueError("rank mismatch")
    sigma = np.asarray(sigma, dtype=np.int64)
    if sorted(sigma.tolist()) != list(range(cc1.rank)):
        raise ValueError("sigma is not a bijection on colors")
    if len(cc1.tensor) != len(cc2.tensor):
        return False
    for (r, s, t), c in cc1.tensor.items():
        if cc2.tensor.get((int(sigma[r]), int(sigma[s]), int(sigma[t]))) != c:
            return False
    return True


def tensor_identities_hold(cc: CoherentConfiguration) -> bool:
    """Mass conservation and the triangle identity on the sparse tensor."""
    val, left, right = cc.valencies, cc.left_fiber, cc.right_fiber
    sums: dict[tuple[int, int], int] = {}
    for (r, s, t), c in cc.tensor.items():
        if right[r] != left[s] or left[r] != left[t] or right[s] != right[t]:
            return False
        sums[(r, s)] = sums.get((r, s), 0) + c * int(val[t])
    for r in range(cc.rank):
        for s in range(cc.rank):
            if right[r] != left[s]:
                continue
            if sums.get((r, s), 0) != int(val[r]) * int(val[s]):
                return False
    conv = cc.converse
    for (r, s, t), c in cc.tensor.items():
        other = cc.tensor.get((t, int(conv[s]), r), 0)
        if int(val[t]) * c != int(val[r]) * other:
            return False
    return True
