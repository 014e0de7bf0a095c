"""Arithmetic in GF(q) for odd prime powers q = p**l.

Elements are polynomials of degree < l over GF(p), reduced by a fixed monic
irreducible modulus.  The modulus is canonical: among all monic irreducible
polynomials of degree l, the one whose coefficient tuple (c0, ..., c_{l-1})
is lexicographically smallest.  For l = 1 this is the polynomial t.

Every element carries an integer index

    index(a) = sum(coeffs[k] * p**k)

which is a bijection onto [0, q).  All bulk arithmetic is table driven on
indices so the group and digraph layers can stay fully vectorised; the
FieldElement wrapper exposes the coefficient view.

Squareness is decided by exponentiation, a**((q-1)/2) in {0, 1}, not by a
table, so one code path serves every supported q.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .arith import is_prime

MAX_Q_DEFAULT = 729  # 3**6; keeps every table at desk scale


@dataclass(frozen=True)
class FieldSpec:
    """Shape of the field: characteristic, degree, canonical monic modulus.

    The modulus tuple has length l + 1 and ends with the leading 1.
    """

    p: int
    l: int
    modulus: tuple[int, ...]


@dataclass(frozen=True)
class FieldElement:
    field: "Field"
    index: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.coeff_rows[self.index])

    def __repr__(self) -> str:
        return f"FieldElement(q={self.field.q}, index={self.index}, coeffs={self.coeffs})"


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by b over GF(p); b monic, coefficient lists low-to-high."""
    a = a[:]
    db, da = len(b) - 1, len(a) - 1
    while da >= db:
        c = a[da] % p
        if c:
            for k in range(db + 1):
                a[da - db + k] = (a[da - db + k] - c * b[k]) % p
        da -= 1
        a.pop()
    return a


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(poly)//2."""
    deg = len(poly) - 1
    if deg == 1:
        return True
    if poly[0] == 0:  # divisible by t
        return False
    for d in range(1, deg // 2 + 1):
        for tail in np.ndindex(*([p] * d)):
            divisor = list(tail) + [1]
            rem = _poly_mod(list(poly), divisor, p)
            if not any(rem):
                return False
    return True


def _canonical_modulus(p: int, l: int) -> tuple[int, ...]:
    for tail in np.ndindex(*([p] * l)):
        cand = tuple(int(c) for c in tail) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise RuntimeError("no irreducible modulus found")  # impossible for prime p


class Field:
    """GF(q) with index-level operation tables.

    add/sub/mul/neg accept plain ints or integer ndarrays of indices and
    return the same shape; inv and pow are scalar.
    """

    def __init__(self, spec: FieldSpec):
        p, l = spec.p, spec.l
        q = p**l
        self.spec = spec
        self.p, self.l, self.q = p, l, q

        powers = p ** np.arange(l, dtype=np.int64)
        coeffs = np.zeros((q, l), dtype=np.int64)
        v = np.arange(q, dtype=np.int64)
        for k in range(l):
            coeffs[:, k] = v % p
            v //= p
        self.coeff_rows = coeffs

        self.add_t = (((coeffs[:, None, :] + coeffs[None, :, :]) % p) @ powers).astype(np.int32)
        self.neg_t = (((p - coeffs) % p) @ powers).astype(np.int32)
        self.sub_t = self.add_t[:, self.neg_t]

        # t**m mod modulus for m in [0, 2l-2], one row per power
        red = np.zeros((2 * l - 1, l), dtype=np.int64)
        top = np.array([(-c) % p for c in spec.modulus[:l]], dtype=np.int64)
        for m in range(l):
            red[m, m] = 1
        for m in range(l, 2 * l - 1):
            prev = red[m - 1]
            shifted = np.concatenate(([0], prev[:-1]))
            red[m] = (shifted + prev[l - 1] * top) % p

        conv = np.zeros((q, q, 2 * l - 1), dtype=np.int64)
        for i in range(l):
            for j in range(l):
                conv[:, :, i + j] += coeffs[:, None, i] * coeffs[None, :, j]
        prod = (conv.reshape(q * q, 2 * l - 1) @ red) % p
        self.mul_t = (prod @ powers).reshape(q, q).astype(np.int32)

        self.inv_t = np.full(q, -1, dtype=np.int32)
        rows, cols = np.nonzero(self.mul_t == 1)
        self.inv_t[rows] = cols

        self.zero, self.one = 0, 1
        self._nonsquare: int | None = None

    # -- index-level operations -------------------------------------------

    def add(self, a, b):
        return self.add_t[a, b]

    def sub(self, a, b):
        return self.sub_t[a, b]

    def mul(self, a, b):
        return self.mul_t[a, b]

    def neg(self, a):
        return self.neg_t[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_t[a])

    def pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = int(self.mul_t[result, base])
            base = int(self.mul_t[base, base])
            e >>= 1
        return result

    def from_int(self, c: int) -> int:
        """Index of c * 1, the image of the integer c in the field."""
        return c % self.p

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def nonsquare(self) -> int:
        """The nonsquare of smallest index; q odd guarantees existence."""
        if self._nonsquare is None:
            self._nonsquare = next(a for a in range(self.q) if not self.is_square(a))
        return self._nonsquare

    # -- element view ------------------------------------------------------

    def element(self, index: int) -> FieldElement:
        index = int(index)
        if not 0 <= index < self.q:
            raise ValueError(f"index {index} outside [0, {self.q})")
        return FieldElement(self, index)

    def element_from_coeffs(self, coeffs) -> FieldElement:
        coeffs = [c % self.p for c in coeffs]
        if len(coeffs) != self.l:
            raise ValueError(f"need {self.l} coefficients")
        index = sum(c * self.p**k for k, c in enumerate(coeffs))
        return FieldElement(self, index)

    def elements(self):
        return [FieldElement(self, i) for i in range(self.q)]

    def to_json(self) -> dict:
        return {"p": self.p, "l": self.l, "modulus": list(self.spec.modulus[: self.l])}

    def __repr__(self) -> str:
        return f"Field(q={self.q}, p={self.p}, l={self.l}, modulus={self.spec.modulus})"


@functools.lru_cache(maxsize=None)
def _field_cached(p: int, l: int) -> Field:
    return Field(FieldSpec(p, l, _canonical_modulus(p, l)))


def field_create(p: int, l: int, max_q: int = MAX_Q_DEFAULT) -> Field:
    """Build GF(p**l) with the canonical modulus.

    p must be an odd prime, l >= 1, and p**l must not exceed max_q.
    """
    if p == 2:
        raise ValueError("q must be odd")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if l < 1:
        raise ValueError("extension degree must be >= 1")
    if p**l > max_q:
        raise ValueError(f"q = {p**l} exceeds the size cap {max_q}")
    return _field_cached(p, l)


# -- typed operation surface ------------------------------------------------


def _common_field(a: FieldElement, b: FieldElement) -> Field:
    if a.field is not b.field:
        raise ValueError("operands come from different fields")
    return a.field


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    f = _common_field(a, b)
    return f.element(f.add(a.index, b.index))


def fe_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    f = _common_field(a, b)
    return f.element(f.sub(a.index, b.index))


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    f = _common_field(a, b)
    return f.element(f.mul(a.index, b.index))


def fe_neg(a: FieldElement) -> FieldElement:
    return a.field.element(a.field.neg(a.index))


def fe_inv(a: FieldElement) -> FieldElement:
    return a.field.element(a.field.inv(a.index))


def fe_is_square(a: FieldElement) -> bool:
    return a.field.is_square(a.index)


def find_nonsquare(field: Field) -> FieldElement:
    return field.element(field.nonsquare())
