"""Shared generators and independent oracles for the test suite.

The oracles deliberately avoid the library's own algorithms: permutations
are composed as raw tuples here, and Witt vectors are modelled as power
series  prod_n (1 - a_n t^n)^(-1)  instead of through ghost inversion.
"""

import math
import random
from functools import lru_cache

from cyclotrace.groupring import GRMatrix, GroupRingElem
from cyclotrace.groups import catalog_group
from cyclotrace.trzero import TRElem, level_basis, tr_frobenius, tr_restriction, tr_verschiebung

CATALOG = [f"C{n}" for n in range(2, 13)] + ["S3", "S4", "D4", "Q8"]
SMALL_CATALOG = ["trivial", "C2", "C3", "C4", "C6", "S3", "D4", "Q8"]


@lru_cache(maxsize=None)
def grp(name):
    return catalog_group(name)


def divisors_naive(n):
    return [d for d in range(1, n + 1) if n % d == 0]


# --------------------------------------------------------------------------
# random objects

def random_tr(rng: random.Random, G, r: int, nterms: int = 4, bound: int = 6) -> TRElem:
    basis = level_basis(G, r)
    coeffs = {}
    for _ in range(rng.randint(0, nterms)):
        k = rng.choice(basis)
        coeffs[k] = coeffs.get(k, 0) + rng.randint(-bound, bound)
    return TRElem(G, r, coeffs)


def random_gr(rng: random.Random, G, nterms: int = 3, bound: int = 3) -> GroupRingElem:
    coeffs = {}
    for _ in range(rng.randint(0, nterms)):
        x = rng.randrange(G.order)
        coeffs[x] = coeffs.get(x, 0) + rng.randint(-bound, bound)
    return GroupRingElem(G, coeffs)


def random_matrix(rng, G, n, nterms=2) -> GRMatrix:
    return GRMatrix(G, [[random_gr(rng, G, nterms) for _ in range(n)] for _ in range(n)])


def random_elementary(rng, G, n):
    """An elementary matrix and its inverse."""
    i, j = rng.sample(range(n), 2)
    a = random_gr(rng, G, 2)
    return GRMatrix.elementary(G, n, i, j, a), GRMatrix.elementary(G, n, i, j, -a)


def random_unimodular(rng, G, n, length=3):
    U, Ui = GRMatrix.identity(G, n), GRMatrix.identity(G, n)
    for _ in range(length if n > 1 else 0):
        E, Ei = random_elementary(rng, G, n)
        U, Ui = U @ E, Ei @ Ui
    return U, Ui


def random_idempotent(rng, G, n, conjugations=2) -> GRMatrix:
    """``[[I_k, A], [0, 0]]`` conjugated by a few elementary matrices."""
    k = rng.randint(0, n)
    one, zero = GroupRingElem.one(G), GroupRingElem.zero(G)
    rows = []
    for i in range(n):
        if i < k:
            rows.append([one if j == i else (random_gr(rng, G, 2) if j >= k else zero) for j in range(n)])
        else:
            rows.append([zero] * n)
    E = GRMatrix(G, rows)
    U, Ui = random_unimodular(rng, G, n, conjugations)
    return U @ E @ Ui


def check_relations(G, r, s, t, x_r, fresh) -> list:
    """Assert every R/F/V relation that applies to ``(r, s, t)``.

    ``x_r`` lives at level ``r``; ``fresh(level)`` makes a random element.
    Returns the names of the relations that were checked.
    """
    done = ["identity"]
    assert tr_restriction(1, x_r) == x_r
    assert tr_frobenius(1, x_r) == x_r
    assert tr_verschiebung(1, x_r) == x_r
    if r % (s * t) == 0:
        assert tr_restriction(s, tr_restriction(t, x_r)) == tr_restriction(s * t, x_r)
        assert tr_frobenius(s, tr_frobenius(t, x_r)) == tr_frobenius(s * t, x_r)
        assert tr_restriction(s, tr_frobenius(t, x_r)) == tr_frobenius(t, tr_restriction(s, x_r))
        y = fresh(r // (s * t))
        assert tr_verschiebung(s, tr_verschiebung(t, y)) == tr_verschiebung(s * t, y)
        z = fresh(r // t)
        assert tr_restriction(s, tr_verschiebung(t, z)) == tr_verschiebung(t, tr_restriction(s, z))
        done.append("composition")
    if r % s == 0 and r % t == 0:
        d = math.gcd(s, t)
        z = fresh(r // t)
        lhs = tr_frobenius(s, tr_verschiebung(t, z))
        assert lhs == tr_verschiebung(t // d, tr_frobenius(s // d, z)) * d
        done.append("frobenius-verschiebung")
        if r % (s * t):
            assert tr_restriction(s, tr_verschiebung(t, z)) == TRElem.zero(G, r // s)
            done.append("zero")
    return done


# --------------------------------------------------------------------------
# permutation oracle on raw image tuples (1-based)

def p_mul(x, y):
    return tuple(x[y[i] - 1] for i in range(len(x)))


def p_inv(x):
    out = [0] * len(x)
    for i, xi in enumerate(x):
        out[xi - 1] = i + 1
    return tuple(out)


def p_pow(x, k):
    out = tuple(range(1, len(x) + 1))
    for _ in range(k):
        out = p_mul(out, x)
    return out


def brute_conjugate(elements, x, y) -> bool:
    """Is there an h with h x h^-1 = y?"""
    return any(p_mul(p_mul(h, x), p_inv(h)) == y for h in elements)


def brute_classes(elements) -> list:
    seen, out = set(), []
    for x in elements:
        if x in seen:
            continue
        orbit = {p_mul(p_mul(h, x), p_inv(h)) for h in elements}
        seen |= orbit
        out.append(frozenset(orbit))
    return out


# --------------------------------------------------------------------------
# Witt vector oracle via power series  prod_n (1 - a_n t^n)^(-1)

def _series_mul(f, g, N):
    out = [0] * (N + 1)
    for i, a in enumerate(f):
        if a:
            for j in range(N + 1 - i):
                out[i + j] += a * g[j]
    return out


def _inv_one_minus(a, n, N):
    """(1 - a t^n)^(-1) truncated at t^N."""
    out = [0] * (N + 1)
    for k in range(0, N // n + 1):
        out[k * n] = a**k
    return out


def _pow_series(f, e, N):
    out = [1] + [0] * N
    for _ in range(e):
        out = _series_mul(out, f, N)
    return out


def coords_to_series(coords: dict, N: int):
    f = [1] + [0] * N
    for n, a in coords.items():
        if n <= N and a:
            f = _series_mul(f, _inv_one_minus(a, n, N), N)
    return f


def series_to_coords(f, N: int) -> dict:
    f = list(f)
    coords = {}
    for n in range(1, N + 1):
        a = f[n]
        if a:
            coords[n] = a
            # divide by (1 - a t^n)^(-1), i.e. multiply by (1 - a t^n)
            g = list(f)
            for i in range(n, N + 1):
                g[i] -= a * f[i - n]
            f = g
    return coords


def oracle_witt_add(x: dict, y: dict, N: int) -> dict:
    return series_to_coords(_series_mul(coords_to_series(x, N), coords_to_series(y, N), N), N)


def oracle_witt_mul(x: dict, y: dict, N: int) -> dict:
    """Bilinear extension of  [a t^n] * [b t^m] = (1 - a^(m/d) b^(n/d) t^(nm/d))^(-d)."""
    f = [1] + [0] * N
    for n, a in x.items():
        for m, b in y.items():
            d = math.gcd(n, m)
            L = n * m // d
            if L > N:
                continue
            term = _pow_series(_inv_one_minus(a ** (m // d) * b ** (n // d), L, N), d, N)
            f = _series_mul(f, term, N)
    return series_to_coords(f, N)
