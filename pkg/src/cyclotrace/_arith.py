"""Small integer helpers shared by several modules (trial division only)."""

from functools import lru_cache


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple:
    if n < 1:
        raise ValueError(f"divisors of non-positive integer {n}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def factorize(n: int) -> dict:
    """Prime factorization ``{p: e}`` by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors_with_multiplicity(n: int) -> list:
    return [p for p, e in sorted(factorize(n).items()) for _ in range(e)]


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def p_adic_split(r: int, p: int) -> tuple:
    """Write ``r = p**u * d`` with ``p`` not dividing ``d``; return ``(u, d)``."""
    u = 0
    while r % p == 0:
        r //= p
        u += 1
    return u, r
