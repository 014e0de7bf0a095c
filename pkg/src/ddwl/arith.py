"""Small number-theoretic helpers: primality, prime-power shape, Euler phi."""

from __future__ import annotations


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, l) with n = p**l and p prime, or None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            l, m = 0, n
            while m % p == 0:
                m //= p
                l += 1
            return (p, l) if m == 1 else None
        p += 1
    return (n, 1)


def euler_phi(n: int) -> int:
    """Number of integers in [1, n] coprime to n."""
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result
