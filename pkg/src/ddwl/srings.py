"""Group-ring structure over H3(q): basic-set partitions, structure constants
by convolution, closed-form checks, and algebraic automorphisms.

The partition {e}, Y_0, ..., Y_{q-1}, Z# of the group (cells in that fixed
order) spans a subring of the group ring: the product of two cell indicator
sums expands over cells with nonnegative integer coefficients

    c[X][Y][Z] = #{(x, y) in X x Y : x*y = z},   independent of z in Z.

The tensor is computed by full convolution over the multiplication table, so
representative independence is verified for every z as a side effect; a
violation means the partition is not closed and raises NotAnSRing.

A cell bijection sigma is an algebraic automorphism when it preserves the
whole tensor.  The power maps i -> i**m of the extended index group induce
such bijections (tau_hat); backtracking enumeration finds all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .construction import INFINITY, Construction


class NotAnSRing(ValueError):
    pass


class SearchCapExceeded(RuntimeError):
    pass


@dataclass
class StructureConstantTensor:
    c: np.ndarray                  # (r, r, r) int64, c[X, Y, Z]
    sizes: np.ndarray              # (r,) cell sizes
    inv_cell: np.ndarray           # (r,) cell of elementwise inverses
    names: list[str]

    @property
    def rank(self) -> int:
        return len(self.sizes)

    def to_json(self, q: int) -> dict:
        entries = [
            [int(x), int(y), int(z), int(self.c[x, y, z])]
            for x, y, z in np.argwhere(self.c)
        ]
        return {
            "q": q,
            "cells": [
                {"name": n, "size": int(s)} for n, s in zip(self.names, self.sizes)
            ],
            "constants": entries,
        }


class SRing:
    """An inverse-closed partition of the group with {e} as a cell."""

    def __init__(self, cons: Construction, cells: list[np.ndarray], names: list[str]):
        self.cons = cons
        self.table = cons.table
        n = cons.n
        self.cells = [np.asarray(c, dtype=np.int64) for c in cells]
        self.names = list(names)
        self.r = len(cells)

        cell_of = np.full(n, -1, dtype=np.int32)
        for k, members in enumerate(self.cells):
            if (cell_of[members] != -1).any():
                raise NotAnSRing("cells overlap")
            cell_of[members] = k
        if (cell_of == -1).any():
            raise NotAnSRing("cells do not cover the group")
        self.cell_of = cell_of
        self.sizes = np.array([len(c) for c in self.cells], dtype=np.int64)

        if self.cells[self.cell_of[cons.table.identity]].size != 1:
            raise NotAnSRing("the identity is not a singleton cell")

        inv_cell = np.empty(self.r, dtype=np.int64)
        for k, members in enumerate(self.cells):
            images = np.unique(cell_of[self.table.inv[members]])
            if len(images) != 1:
                raise NotAnSRing(f"cell {self.names[k]} is not inverse-closed")
            inv_cell[k] = images[0]
        self.inv_cell = inv_cell

    @classmethod
    def from_construction(cls, cons: Construction) -> "SRing":
        cells = [np.array([0], dtype=np.int64)]
        names = ["e"]
        for i in range(cons.q):
            cells.append(cons.build_Y(i))
            names.append(f"Y_{i}")
        cells.append(cons.punctured_center())
        names.append("Z#")
        ring = cls(cons, cells, names)
        # the cells must coincide with the orbit partition of K
        orbit_keys = {o.tobytes() for o in cons.k_orbits()}
        cell_keys = {c.tobytes() for c in ring.cells}
        if orbit_keys != cell_keys:
            raise RuntimeError("analytic cells disagree with the K-orbits")
        return ring

    def y_cell(self, i: int) -> int:
        return 1 + i

    @property
    def center_cell(self) -> int:
        return self.r - 1

    def scheme_coloring(self) -> np.ndarray:
        """Pair coloring color(u, v) = cell of v * u**-1."""
        t = self.table
        prod = t.mult[:, t.inv]          # prod[v, u] = v * u**-1
        return self.cell_of[prod].T.copy()

    def __repr__(self) -> str:
        return f"SRing(q={self.cons.q}, cells={self.r})"


def structure_constants(ring: SRing) -> StructureConstantTensor:
    """Full convolution tensor; every representative z is checked."""
    cons, r, n = ring.cons, ring.r, ring.cons.n
    cu = ring.cell_of.astype(np.int64)
    counts = np.zeros((r, r, n), dtype=np.int64)
    left = np.broadcast_to(cu[:, None], (n, n))
    right = np.broadcast_to(cu[None, :], (n, n))
    np.add.at(counts, (left.ravel(), right.ravel(), cons.table.mult.ravel()), 1)

    c = np.zeros((r, r, r), dtype=np.int64)
    for z_cell, members in enumerate(ring.cells):
        block = counts[:, :, members]
        if not (block == block[:, :, :1]).all():
            x, y = np.argwhere((block != block[:, :, :1]).any(axis=2))[0]
            raise NotAnSRing(
                f"product {ring.names[x]}*{ring.names[y]} is not constant on "
                f"{ring.names[z_cell]}"
            )
        c[:, :, z_cell] = block[:, :, 0]

    tensor = StructureConstantTensor(c, ring.sizes.copy(), ring.inv_cell.copy(), list(ring.names))
    if not triangle_identity_holds(tensor) or not mass_conservation_holds(tensor):
        raise RuntimeError("tensor fails a group-counting identity")
    return tensor


def triangle_identity_holds(t: StructureConstantTensor) -> bool:
    """|Z| c[X,Y,Z*] = |X| c[Y,Z,X*] = |Y| c[Z,X,Y*] for all cell triples."""
    c, sizes, inv = t.c, t.sizes, t.inv_cell
    m = c[:, :, inv]  # m[X, Y, Z] = c[X, Y, Z*]
    a = sizes[None, None, :] * m
    b = sizes[:, None, None] * m.transpose(2, 0, 1)  # |X| c[Y, Z, X*]
    d = sizes[None, :, None] * m.transpose(1, 2, 0)  # |Y| c[Z, X, Y*]
    return bool((a == b).all() and (a == d).all())


def mass_conservation_holds(t: StructureConstantTensor) -> bool:
    """sum_Z c[X,Y,Z] |Z| = |X| |Y| for all X, Y."""
    lhs = (t.c * t.sizes[None, None, :]).sum(axis=2)
    rhs = t.sizes[:, None] * t.sizes[None, :]
    return bool((lhs == rhs).all())


@dataclass
class ConstsReport:
    q: int
    checked: int
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _expected_const(cons: Construction, i: int, j: int, k) -> int:
    """Closed form for the coefficient of cell k (a Y index or 'Z#') in Y_i * Y_j."""
    q = cons.q
    f = cons.field
    neg_i = int(f.neg(i))
    if k == "Z#":
        return 0 if j == neg_i else q + 1
    if j == neg_i:
        if k not in (i, neg_i):
            return q
        return q - 2 if i == 0 else q - 1
    if k == cons.psi(i, j):
        return 1
    if i != j and k in (i, j):
        return q
    if k == i == j:
        return q - 1
    return q + 1


def verify_consts(ring: SRing, tensor: StructureConstantTensor | None = None) -> ConstsReport:
    """Compare every computed c[Y_i, Y_j, Y_k] and c[Y_i, Y_j, Z#] to the closed forms."""
    cons = ring.cons
    if tensor is None:
        tensor = structure_constants(ring)
    q = cons.q
    report = ConstsReport(q=q, checked=0)
    for i in range(q):
        for j in range(q):
            for k in list(range(q)) + ["Z#"]:
                z_cell = ring.center_cell if k == "Z#" else ring.y_cell(k)
                got = int(tensor.c[ring.y_cell(i), ring.y_cell(j), z_cell])
                want = _expected_const(cons, i, j, k)
                report.checked += 1
                if got != want:
                    report.mismatches.append(
                        {"i": i, "j": j, "k": k, "expected": want, "got": got}
                    )
    return report


def constants_report(ring: SRing, tensor: StructureConstantTensor | None = None) -> dict:
    """Full JSON report: cells, nonzero constants, closed-form mismatches."""
    if tensor is None:
        tensor = structure_constants(ring)
    out = tensor.to_json(ring.cons.q)
    out["closed_form_mismatches"] = verify_consts(ring, tensor).mismatches
    return out


@dataclass
class TransversalReport:
    q: int
    i: int
    at_identity: int
    on_center: set
    elsewhere: set
    mirrored_at_identity: int
    mirrored_on_center: set
    mirrored_elsewhere: set

    @property
    def ok(self) -> bool:
        q = self.q
        fwd = (
            self.at_identity == q * q
            and self.on_center <= {0}
            and self.elsewhere == {q}
        )
        mir = (
            self.mirrored_at_identity == q * q
            and self.mirrored_on_center <= {0}
            and self.mirrored_elsewhere == {q}
        )
        return fwd and mir


def _difference_multiset(cons: Construction, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Counts of the products u * v for u in left, v in right."""
    t = cons.table
    conv = np.zeros(cons.n, dtype=np.int64)
    chunk = max(1, 4_000_000 // max(1, len(right)))
    for s in range(0, len(left), chunk):
        block = t.mult[np.ix_(left[s : s + chunk], right)]
        conv += np.bincount(block.ravel(), minlength=cons.n)
    return conv


def verify_transversal(ring: SRing, i: int) -> TransversalReport:
    """Coefficients of X_i * X_i^(-1) (and the mirrored product) over the group."""
    cons = ring.cons
    t = cons.table
    x = cons.build_X(i)
    x_inv = np.sort(t.inv[x]).astype(np.int64)
    center_rest = cons.punctured_center()
    outside = np.ones(cons.n, dtype=bool)
    outside[0] = False
    outside[center_rest] = False

    fwd = _difference_multiset(cons, x, x_inv)
    mir = _difference_multiset(cons, x_inv, x)
    return TransversalReport(
        q=cons.q,
        i=i,
        at_identity=int(fwd[0]),
        on_center=set(fwd[center_rest].tolist()),
        elsewhere=set(fwd[outside].tolist()),
        mirrored_at_identity=int(mir[0]),
        mirrored_on_center=set(mir[center_rest].tolist()),
        mirrored_elsewhere=set(mir[outside].tolist()),
    )


def tau_hat(ring: SRing, m: int) -> np.ndarray:
    """Cell bijection induced by the power map i -> i**m of the extended
    index group; requires gcd(m, q+1) = 1.  The center cell plays the role
    of the infinity label."""
    cons = ring.cons
    if math.gcd(m, cons.q + 1) != 1:
        raise ValueError(f"gcd({m}, {cons.q + 1}) != 1")
    sigma = np.empty(ring.r, dtype=np.int64)
    sigma[0] = 0
    for i in range(cons.q):
        image = cons.psi_pow(i, m)
        if image is INFINITY:
            raise RuntimeError("power map moved a finite index to infinity")
        sigma[ring.y_cell(i)] = ring.y_cell(int(image))
    sigma[ring.center_cell] = ring.center_cell  # infinity is fixed by any power map
    return sigma


def transports_tensor(t: StructureConstantTensor, sigma) -> bool:
    sigma = np.asarray(sigma, dtype=np.int64)
    moved = t.c[np.ix_(sigma, sigma, sigma)]
    return bool(np.array_equal(t.c, moved))


def algebraic_automorphisms(t: StructureConstantTensor, cap: int = 32) -> list[np.ndarray]:
    """All cell bijections preserving the tensor, by backtracking.

    Pruning: images must preserve cell sizes and the inverse pairing, and
    every fully assigned triple must transport its constant.
    """
    r = t.rank
    if r > cap:
        raise SearchCapExceeded(f"rank {r} exceeds the search cap {cap}")
    c, sizes, inv = t.c, t.sizes, t.inv_cell
    sigma = np.full(r, -1, dtype=np.int64)
    used = np.zeros(r, dtype=bool)
    found: list[np.ndarray] = []

    def consistent() -> bool:
        assigned = np.flatnonzero(sigma >= 0)
        im = sigma[assigned]
        sub = c[np.ix_(assigned, assigned, assigned)]
        moved = c[np.ix_(im, im, im)]
        return bool(np.array_equal(sub, moved))

    def extend(pos: int):
        if pos == r:
            found.append(sigma.copy())
            return
        for image in range(r):
            if used[image] or sizes[image] != sizes[pos]:
                continue
            inv_pos = inv[pos]
            if sigma[inv_pos] >= 0 and sigma[inv_pos] != inv[image]:
                continue
            sigma[pos] = image
            used[image] = True
            if consistent():
                extend(pos + 1)
            sigma[pos] = -1
            used[image] = False

    extend(0)
    return found


def is_group_closed(perms: list[np.ndarray]) -> bool:
    keys = {p.tobytes() for p in perms}
    for a in perms:
        for b in perms:
            if a[b].tobytes() not in keys:
                return False
    return True


@dataclass
class InducednessResult:
    status: str                 # "induced" | "not_induced" | "undetermined"
    mapping: np.ndarray | None = None


def is_induced(ring: SRing, sigma, node_budget: int = 2_000_000) -> InducednessResult:
    """Search for a vertex bijection f with cell(f(v) f(u)^-1) = sigma(cell(v u^-1)).

    A timeout is reported as undetermined, never as a negative answer.
    """
    from .isotest import BudgetExceeded, _PartitionSearch

    sigma = np.asarray(sigma, dtype=np.int64)
    scheme = ring.scheme_coloring()
    recolored = sigma[scheme].astype(np.int32)
    search = _PartitionSearch(recolored, scheme, node_budget)
    try:
        f = search.search(())
    except BudgetExceeded:
        return InducednessResult("undetermined")
    if f is None:
        return InducednessResult("not_induced")
    return InducednessResult("induced", mapping=f)
