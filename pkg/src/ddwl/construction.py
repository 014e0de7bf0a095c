"""Connection sets and Cayley digraphs over H3(q), plus the companion
cyclic group law on GF(q) extended by an infinity point.

Fix a nonsquare eps in GF(q).  The 2x2 matrices

    M(a, b) = (a, b; eps*b, a),   (a, b) != (0, 0)

form a cyclic group of order q**2 - 1, and each induces an automorphism
of H3(q):

    (x, y, z) |-> (a*x + eps*b*y,  b*x + a*y,  F_ab(x, y, z))
    F_ab(x, y, z) = a*b*(x**2/2 + eps*y**2/2) + eps*b**2*x*y + (a**2 - eps*b**2)*z

The orbits of the resulting group K on H3(q) are {e}, the nontrivial center,
and q sets Y_i (one per i in GF(q)), where

    Y_i = {(a, b, gamma_i(a, b)) : (a, b) != (0, 0)},
    gamma_i(a, b) = a*b/2 + (a**2 - eps*b**2)*i.

X_i = Y_i + {e} meets every center coset exactly once, and the Cayley
digraph on arcs (g, x*g), x in X_i, is the divisible design digraph studied
here (it has a loop at every vertex; the loopless companion is available
via include_identity=False).

On the index set GF(q) + {inf} the operation

    psi(i, j) = (i*j + delta) / (i + j),   delta = 1/(16*eps)

(with the obvious conventions at inf and at j = -i) is a cyclic group of
order q + 1 with identity inf and inverse chi(i) = -i.  The generators of
that group single out the digraph labels i for which the family is studied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arith import prime_power
from .digraph import Digraph
from .gf import MAX_Q_DEFAULT, FieldElement, field_create
from .heisenberg import MAX_VERTICES_DEFAULT, GroupElement, GroupTable


class _Infinity:
    """The identity of the extended index group; a dedicated tag, not a field value."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "inf"


INFINITY = _Infinity()

# an extended index is either a field element index (int) or INFINITY
ExtendedIndex = int | _Infinity


@dataclass(frozen=True)
class MatrixM:
    """A matrix (alpha, beta; eps*beta, alpha) with (alpha, beta) != (0, 0)."""

    alpha: FieldElement
    beta: FieldElement
    epsilon: FieldElement

    def __post_init__(self):
        if self.alpha.index == 0 and self.beta.index == 0:
            raise ValueError("(alpha, beta) = (0, 0) is excluded")


@dataclass(frozen=True)
class KAutomorphism:
    alpha: int
    beta: int
    perm: np.ndarray  # vertex permutation of length q**3

    def __repr__(self) -> str:
        return f"KAutomorphism(alpha={self.alpha}, beta={self.beta})"


def rho_apply(m: MatrixM, g: GroupElement) -> GroupElement:
    """Image of g under the automorphism induced by m."""
    f = g.field
    a, b, eps = m.alpha.index, m.beta.index, m.epsilon.index
    x, y, z = g.x.index, g.y.index, g.z.index
    half = f.inv(f.from_int(2))
    x2 = f.add(f.mul(a, x), f.mul(eps, f.mul(b, y)))
    y2 = f.add(f.mul(b, x), f.mul(a, y))
    ab = f.mul(a, b)
    quad = f.mul(half, f.add(f.mul(x, x), f.mul(eps, f.mul(y, y))))
    cross = f.mul(f.mul(eps, f.mul(b, b)), f.mul(x, y))
    norm = f.sub(f.mul(a, a), f.mul(eps, f.mul(b, b)))
    z2 = f.add(f.add(f.mul(ab, quad), cross), f.mul(norm, z))
    return GroupElement(f.element(x2), f.element(y2), f.element(z2))


class Construction:
    """All of the above for one odd prime power q, with heavy parts cached."""

    def __init__(
        self,
        q: int,
        max_q: int = MAX_Q_DEFAULT,
        max_vertices: int = MAX_VERTICES_DEFAULT,
    ):
        pp = prime_power(q)
        if pp is None:
            raise ValueError(f"q = {q} is not a prime power")
        p, l = pp
        self.field = field_create(p, l, max_q=max_q)
        self.table = GroupTable(self.field, max_vertices=max_vertices)
        f = self.field
        self.q = q
        self.n = self.table.n
        self.epsilon = f.nonsquare()
        self.half = f.inv(f.from_int(2))
        # the coupling constant of psi: 1/(16*eps), a nonsquare.  It is the
        # unique value for which the singleton structure constant of the
        # cell products Y_i * Y_j lands at the cell labelled psi(i, j).
        self.delta = f.inv(f.mul(f.from_int(16), self.epsilon))
        self._K: list[KAutomorphism] | None = None
        self._orbits: list[np.ndarray] | None = None
        self._X: dict[int, np.ndarray] = {}
        self._graphs: dict[tuple[int, bool], Digraph] = {}

    # -- the automorphism group K ------------------------------------------

    def rho_perm(self, a: int, b: int) -> np.ndarray:
        """Vertex permutation of the automorphism induced by (a, b; eps*b, a)."""
        f, t = self.field, self.table
        eps = self.epsilon
        x, y, z = t.ix, t.iy, t.iz
        x2 = f.add(f.mul(a, x), f.mul(eps, f.mul(b, y)))
        y2 = f.add(f.mul(b, x), f.mul(a, y))
        ab = f.mul(a, b)
        s_x2 = f.mul(ab, self.half)                    # coefficient of x**2
        s_y2 = f.mul(f.mul(ab, eps), self.half)        # coefficient of y**2
        s_xy = f.mul(eps, f.mul(b, b))                 # coefficient of x*y
        norm = f.sub(f.mul(a, a), f.mul(eps, f.mul(b, b)))
        z2 = f.add(
            f.add(f.mul(s_x2, f.mul(x, x)), f.mul(s_y2, f.mul(y, y))),
            f.add(f.mul(s_xy, f.mul(x, y)), f.mul(norm, z)),
        )
        return t._pack(x2, y2, z2)

    def build_K(self) -> list[KAutomorphism]:
        """All q**2 - 1 automorphisms, each checked to be one before return."""
        if self._K is not None:
            return self._K
        t = self.table
        mult = t.mult
        out = []
        for a in range(self.q):
            for b in range(self.q):
                if a == 0 and b == 0:
                    continue
                perm = self.rho_perm(a, b)
                if not np.array_equal(np.sort(perm), np.arange(self.n)):
                    raise RuntimeError(f"rho({a},{b}) is not a bijection")
                if not np.array_equal(perm[mult], mult[np.ix_(perm, perm)]):
                    raise RuntimeError(f"rho({a},{b}) is not a homomorphism")
                out.append(KAutomorphism(a, b, perm))
        self._K = out
        return out

    def k_orbits(self) -> list[np.ndarray]:
        """Orbit partition of K on the group; exactly q + 2 cells."""
        if self._orbits is not None:
            return self._orbits
        perms = np.stack([k.perm for k in self.build_K()])
        seen = np.zeros(self.n, dtype=bool)
        orbits = []
        for start in range(self.n):
            if seen[start]:
                continue
            frontier = np.array([start])
            members = {start}
            seen[start] = True
            while frontier.size:
                nxt = np.unique(perms[:, frontier])
                fresh = nxt[~seen[nxt]]
                seen[fresh] = True
                members.update(fresh.tolist())
                frontier = fresh
            orbits.append(np.array(sorted(members), dtype=np.int64))
        expected = [np.array([0], dtype=np.int64), self.punctured_center()] + [
            self.build_Y(i) for i in range(self.q)
        ]
        got = {arr.tobytes() for arr in orbits}
        want = {arr.tobytes() for arr in expected}
        if got != want or len(orbits) != self.q + 2:
            raise RuntimeError("K-orbits do not match the analytic cell list")
        self._orbits = orbits
        return orbits

    def punctured_center(self) -> np.ndarray:
        """The q - 1 central vertices other than the identity."""
        t = self.table
        return np.flatnonzero(t.center_mask & (np.arange(self.n) != 0)).astype(np.int64)

    # -- connection sets and digraphs --------------------------------------

    def gamma(self, i: int, a: int, b: int):
        """a*b/2 + (a**2 - eps*b**2)*i; accepts scalars or index arrays."""
        f = self.field
        quad = f.sub(f.mul(a, a), f.mul(self.epsilon, f.mul(b, b)))
        return f.add(f.mul(f.mul(a, b), self.half), f.mul(quad, i))

    def build_X(self, i: int) -> np.ndarray:
        """The q**2 vertices (a, b, gamma_i(a, b)); meets every coset of Z once."""
        if i not in self._X:
            q = self.q
            a = np.repeat(np.arange(q, dtype=np.int32), q)
            b = np.tile(np.arange(q, dtype=np.int32), q)
            z = self.gamma(i, a, b)
            verts = a.astype(np.int64) * q * q + b.astype(np.int64) * q + z
            self._X[i] = np.sort(verts)
        return self._X[i]

    def build_Y(self, i: int) -> np.ndarray:
        """X_i minus the identity; the K-orbit of size q**2 - 1 labelled by i."""
        x = self.build_X(i)
        return x[x != 0]

    def build_cayley(self, i: int, include_identity: bool = True) -> Digraph:
        """Cayley digraph with arcs (g, x*g); loops at every vertex iff e is kept."""
        key = (i, include_identity)
        if key not in self._graphs:
            t = self.table
            conn = self.build_X(i) if include_identity else self.build_Y(i)
            mask = np.zeros(self.n, dtype=bool)
            mask[conn] = True
            prod = t.mult[:, t.inv]  # prod[v, g] = v * g**-1
            arcs = mask[prod].T      # arc (g, v) iff v * g**-1 in the connection set
            suffix = "" if include_identity else ", loopless"
            self._graphs[key] = Digraph(arcs, label=f"Cay(q={self.q}, i={i}{suffix})")
        return self._graphs[key]

    # -- the extended index group ------------------------------------------

    def chi(self, i):
        if i is INFINITY:
            return INFINITY
        return int(self.field.neg(i))

    def psi(self, i, j):
        if i is INFINITY:
            return j if j is not INFINITY else INFINITY
        if j is INFINITY:
            return i
        f = self.field
        if j == f.neg(i):
            return INFINITY
        num = f.add(f.mul(i, j), self.delta)
        return int(f.mul(num, f.inv(f.add(i, j))))

    def psi_pow(self, i, m: int):
        if m < 0:
            raise ValueError("exponent must be nonnegative")
        result, base = INFINITY, i
        while m:
            if m & 1:
                result = self.psi(result, base)
            base = self.psi(base, base)
            m >>= 1
        return result

    def psi_order(self, i) -> int:
        order, acc = 1, i
        while acc is not INFINITY:
            acc = self.psi(acc, i)
            order += 1
            if order > self.q + 2:
                raise RuntimeError("order exceeded group size")  # psi is broken
        return order

    def generators_I(self) -> list[int]:
        """Indices of full order q + 1, ascending; there are phi(q+1) of them."""
        return [i for i in range(self.q) if self.psi_order(i) == self.q + 1]

    def __repr__(self) -> str:
        return f"Construction(q={self.q}, eps={self.epsilon}, delta={self.delta})"
