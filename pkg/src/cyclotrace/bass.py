"""Frobenius-fixed traces and the conjugacy restriction they force.

The trace of a projective Z[G]-module lands in TR_0(Z[G]) and is fixed by
every Frobenius F_s.  This module mechanizes the consequences:

* the cascade ``a_{u,[g]} = p * a_{pu,[g]}`` (for ``p | u``) that kills every
  coefficient with ``t > 1`` of a fixed, finitely supported series;
* the resulting condition that each power map permutes the nonidentity
  support of the rank, so ``g`` and ``g^(s^m)`` are conjugate with
  ``m = lcm(1..n)``;
* the decision of that condition on finite groups, where ``s`` only
  matters modulo the exponent of the group;
* the Bezout/commutator identity ``g = [x,g]^k [y,g]^l``;
* conjugacy of unipotent elements in SL(2, Q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import NamedTuple

from ._arith import factorize, prime_factors_with_multiplicity
from .errors import NotFrobeniusInvariant, SupportNotDeclared, TruncationTooSmall, ZeroArgument
from .groupring import HH0Vector
from .groups import Group, RatMatrix2
from .trzero import TRLimitElem, declared_frobenius, limit_frobenius
from .witt import TruncationSet


def minimal_exponent(n: int) -> int:
    """Exponent of the symmetric group on ``n`` letters, ``lcm(1..n)``."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return reduce(math.lcm, range(1, n + 1), 1)


def trace_shadow(rank: HH0Vector, S: TruncationSet | None = None) -> TRLimitElem:
    """The series ``sum_c rank[c] V_1([c])`` with its support declared full.

    This is the shape a cyclotomic trace must have once every coefficient
    with ``t > 1`` is known to vanish.
    """
    if S is None:
        S = TruncationSet.divisors_of(rank.group.exponent())
    return TRLimitElem(rank.group, S, {(1, c): v for c, v in rank.coeffs.items()}, True)


def apply_frobenius(s: int, a: TRLimitElem) -> TRLimitElem:
    """F_s as a composite of prime Frobenius maps.

    Fully supported series keep their truncation set (coefficients outside
    it are zero); otherwise the result is known on ``S/s`` only.
    """
    b = a
    for p in prime_factors_with_multiplicity(s):
        b = declared_frobenius(p, b) if a.full_support_declared else limit_frobenius(p, b)
    return b


def frobenius_invariance_check(a: TRLimitElem, s: int) -> bool:
    if s < 1:
        raise ValueError(f"s must be positive, got {s}")
    if not a.full_support_declared and a.S.quotient(s) is None:
        raise TruncationTooSmall(f"S/{s} is empty for S = {a.S}")
    b = apply_frobenius(s, a)
    if a.full_support_declared:
        return b.coeffs == a.coeffs
    return b.coeffs == a.restrict(b.S).coeffs


def first_invariance_failure(a: TRLimitElem, s: int):
    """Smallest key ``(t, c)`` where ``F_s(a)`` and ``a`` differ, or None."""
    b = apply_frobenius(s, a)
    ref = a if a.full_support_declared else a.restrict(b.S)
    keys = sorted(set(b.coeffs) | set(ref.coeffs))
    return next((k for k in keys if b[k] != ref[k]), None)


# --------------------------------------------------------------------------
# vanishing cascade

@dataclass(frozen=True)
class Chain:
    """``a_{u0} = p a_{p u0} = p^2 a_{p^2 u0} = ...`` until the index leaves S."""

    key: tuple  # (t, class id)
    p: int
    steps: tuple  # ((u, a_u, a_{pu}), ...)
    exit_index: int  # first p^k t outside the declared support
    closed: bool  # every step holds, so a_t = p^k * 0 = 0


@dataclass
class VanishingCertificate:
    verdict: str  # "AllHigherVanish" | "Counterexample"
    counterexample: tuple | None
    chains: list = field(default_factory=list)
    primes_checked: tuple = ()

    def verify(self, a: TRLimitElem) -> bool:
        """Re-check every chain step against the coefficients of ``a``."""
        for ch in self.chains:
            t, c = ch.key
            u = t
            for (su, au, apu) in ch.steps:
                if su != u or su % ch.p or au != a[(u, c)] or apu != a[(ch.p * u, c)]:
                    return False
                if ch.closed and au != ch.p * apu:
                    return False
                u *= ch.p
            if u != ch.exit_index or u in a.S:
                return False
        closed = all(ch.closed for ch in self.chains)
        return closed == (self.verdict == "AllHigherVanish")


def _smallest_prime(n: int) -> int:
    return min(factorize(n))


def vanishing_certificate(a: TRLimitElem, check_invariance: bool = True) -> VanishingCertificate:
    """Certify that every coefficient with ``t > 1`` is zero.

    For ``t > 1`` pick the smallest prime ``p | t`` and follow
    ``t, pt, p^2 t, ...`` until the index leaves ``S``; beyond ``S`` the
    coefficient is zero by the support declaration, and each step
    ``a_u = p a_{pu}`` is the ``V_u`` coefficient of ``F_p(a) = a``.

    With ``check_invariance`` the F_p-invariance of ``a`` for every prime
    used is verified first and a failure raises
    :class:`NotFrobeniusInvariant`; without it, a chain step that does not
    hold yields a ``Counterexample`` verdict.
    """
    if not a.full_support_declared:
        raise SupportNotDeclared("the cascade needs the full support of the series to lie in S")
    higher = [t for t in a.S if t > 1]
    primes = tuple(sorted({_smallest_prime(t) for t in higher}))
    if check_invariance:
        for p in primes:
            bad = first_invariance_failure(a, p)
            if bad is not None:
                raise NotFrobeniusInvariant(
                    f"F_{p}(a) != a at V{bad[0]}[{a.group.classes[bad[1]].representative}]"
                )
    classes = sorted({c for _, c in a.coeffs} | {0})
    chains = []
    counterexample = None
    for t in higher:
        p = _smallest_prime(t)
        for c in classes:
            steps, u, closed = [], t, True
            while u in a.S:
                au, apu = a[(u, c)], a[(p * u, c)]
                steps.append((u, au, apu))
                closed = closed and au == p * apu
                u *= p
            chains.append(Chain((t, c), p, tuple(steps), u, closed))
            if not closed and counterexample is None:
                counterexample = (t, c)
    verdict = "AllHigherVanish" if counterexample is None else "Counterexample"
    return VanishingCertificate(verdict, counterexample, chains, primes)


# --------------------------------------------------------------------------
# permutation condition on the rank

@dataclass(frozen=True)
class PermutationCertificate:
    s: int
    permutes: bool  # power map sends the support bijectively onto itself
    coefficients_match: bool
    order_divides_m: bool  # (phi_s restricted)^m = id
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.permutes and self.coefficients_match and self.order_divides_m


class PermutationResult(NamedTuple):
    holds: bool
    m: int
    certificates: list


def permutation_condition(rank: HH0Vector, group: Group | None = None) -> PermutationResult:
    """Check that every power map permutes the nonidentity support of ``rank``.

    ``s`` runs over ``1..exponent(G)``, which covers every residue of ``s``
    modulo every element order.
    """
    group = group or rank.group
    support = rank.nonidentity_support()
    m = minimal_exponent(len(support))
    certs = []
    if not support:
        return PermutationResult(True, m, certs)
    sset = set(support)
    for s in range(1, group.exponent() + 1):
        phi = {c: group.class_power(c, s) for c in support}
        image = set(phi.values())
        permutes = image == sset
        detail = ""
        if not permutes:
            out = sorted(c for c in support if phi[c] not in sset)
            if out:
                c = out[0]
                detail = f"{group.classes[c].representative} -> {group.classes[phi[c]].representative} leaves the support"
            else:
                detail = "power map is not injective on the support"
        coeff_ok = permutes and all(rank[phi[c]] == rank[c] for c in support)
        order_ok = False
        if permutes:
            cur = {c: c for c in support}
            for _ in range(m):
                cur = {c: phi[cur[c]] for c in support}
            order_ok = all(cur[c] == c for c in support)
        certs.append(PermutationCertificate(s, permutes, coeff_ok, order_ok, detail))
    return PermutationResult(all(c.ok for c in certs), m, certs)


# --------------------------------------------------------------------------
# the conjugacy condition on finite groups

@dataclass(frozen=True)
class ClassVerdict:
    class_id: int
    representative: str
    admissible: bool
    witness_m: int | None
    refuting_s: int | None
    bound_independent: bool  # refutation holds for every m, not just m <= m_max


@dataclass
class LinnellReport:
    s_range: int  # s tested over 1..s_range (= exponent)
    m_max: int
    verdicts: list

    @property
    def admissible(self) -> list:
        return [v.class_id for v in self.verdicts if v.admissible]


def linnell_admissible(group: Group, m_max: int | None = None) -> LinnellReport:
    """Classes [g] with some ``m <= m_max`` such that g ~ g^(s^m) for all s.

    ``g^(s^m)`` only depends on ``s`` modulo the order of ``g``, which
    divides the exponent, so ``s`` in ``1..exponent`` is exhaustive.
    """
    e = group.exponent()
    m_max = e if m_max is None else m_max
    verdicts = []
    for cls in group.classes:
        c = cls.id
        o = group.element_order(group.class_rep(c))
        witness = None
        for m in range(1, m_max + 1):
            if all(group.class_power(c, pow(s, m, o)) == c for s in range(1, e + 1)):
                witness = m
                break
        if witness is not None:
            verdicts.append(ClassVerdict(c, cls.representative, True, witness, None, False))
            continue
        # s = order(g) sends g^(s^m) to 1 for every m >= 1, a refutation for all m;
        # only if that fails (it cannot for g != 1) fall back to m <= m_max
        refuting = next((s for s in range(o, e + 1, o)
                         if all(group.class_power(c, pow(s, m, o)) != c for m in range(1, m_max + 1))), None)
        complete = refuting is not None
        if refuting is None:
            refuting = next(
                (s for s in range(1, e + 1)
                 if all(group.class_power(c, pow(s, m, o)) != c for m in range(1, m_max + 1))),
                None,
            )
        verdicts.append(ClassVerdict(c, cls.representative, False, None, refuting, complete))
    return LinnellReport(e, m_max, verdicts)


# --------------------------------------------------------------------------
# Bezout and commutators

class BezoutWitness(NamedTuple):
    s: int
    k: int
    l: int


def bezout_witness(m: int) -> BezoutWitness:
    """``s = 2^m - 1`` and ``k, l`` with ``k(2^m - 1) + l(s^m - 1) = 1``.

    ``k`` is reduced into ``[0, s^m - 1)`` when ``s^m - 1 > 0``.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    a = 2**m - 1
    s = a
    b = s**m - 1
    if b == 0:
        k, l = 1, 0  # a = 1
    else:
        if math.gcd(a, b) != 1:
            raise ArithmeticError(f"gcd({a}, {b}) != 1")
        k = pow(a, -1, b)
        l = (1 - k * a) // b
    if k * a + l * b != 1:
        raise ArithmeticError("Bezout identity failed")
    return BezoutWitness(s, k, l)


@dataclass(frozen=True)
class CommutatorCheck:
    ok: bool
    diagnostic: str
    witness: BezoutWitness | None = None

    def __bool__(self):
        return self.ok


class _FiniteOps:
    def __init__(self, group: Group):
        self.g = group

    def elem(self, x):
        return self.g.index(x)

    def mul(self, x, y):
        return self.g.mul(x, y)

    def inv(self, x):
        return self.g.inv(x)

    def pow(self, x, n):
        return self.g.power(x, n)

    def fmt(self, x):
        return self.g.encode(x)


class _MatrixOps:
    def elem(self, x):
        return x if isinstance(x, RatMatrix2) else RatMatrix2.parse(x)

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return x.inverse()

    def pow(self, x, n):
        return x ** n

    def fmt(self, x):
        return x.encode()


def commutator_witness_check(group: Group | None, g, x, y, m: int) -> CommutatorCheck:
    """Verify ``g = [x,g]^k [y,g]^l`` given ``x g x^-1 = g^(2^m)`` and ``y g y^-1 = g^(s^m)``.

    ``group=None`` means the elements are :class:`RatMatrix2` values.
    Commutators are ``[x, g] = x g x^-1 g^-1``.
    """
    ops = _MatrixOps() if group is None else _FiniteOps(group)
    g, x, y = ops.elem(g), ops.elem(x), ops.elem(y)
    w = bezout_witness(m)

    def conj(h):
        return ops.mul(ops.mul(h, g), ops.inv(h))

    if conj(x) != ops.pow(g, 2**m):
        return CommutatorCheck(False, f"premise fails: x g x^-1 = {ops.fmt(conj(x))} != g^(2^{m})", w)
    if conj(y) != ops.pow(g, w.s**m):
        return CommutatorCheck(False, f"premise fails: y g y^-1 = {ops.fmt(conj(y))} != g^({w.s}^{m})", w)
    gi = ops.inv(g)
    cx, cy = ops.mul(conj(x), gi), ops.mul(conj(y), gi)
    rhs = ops.mul(ops.pow(cx, w.k), ops.pow(cy, w.l))
    if rhs != g:
        return CommutatorCheck(False, f"[x,g]^{w.k} [y,g]^{w.l} = {ops.fmt(rhs)} != g", w)
    return CommutatorCheck(True, f"g = [x,g]^{w.k} [y,g]^{w.l}", w)


# --------------------------------------------------------------------------
# SL(2, Q)

NON_SQUARE_REASON = (
    "h g = g^k h with h = [a,b;c,d] forces c = 0 and a = k d; "
    "with a d = 1 this gives k = a^2, so k must be a rational square"
)


def unipotent(k) -> RatMatrix2:
    """``[[1, k], [0, 1]]``, i.e. ``g^k`` for ``g = [[1, 1], [0, 1]]``."""
    return RatMatrix2(1, Fraction(k), 0, 1)


def rational_sqrt(k: Fraction) -> Fraction | None:
    if k < 0:
        return None
    num, den = math.isqrt(k.numerator), math.isqrt(k.denominator)
    if num * num == k.numerator and den * den == k.denominator:
        return Fraction(num, den)
    return None


def sl2_unipotent_conjugacy(k) -> RatMatrix2 | None:
    """An ``h`` in SL(2, Q) with ``h g h^-1 = g^k``, or None if none exists."""
    k = Fraction(k)
    if k == 0:
        raise ZeroArgument("g^0 is the identity, which is not conjugate to g")
    a = rational_sqrt(k)
    if a is None:
        return None
    h = RatMatrix2(a, 0, 0, 1 / a)
    g = unipotent(1)
    if h * g * h.inverse() != unipotent(k):
        raise ArithmeticError("constructed witness does not conjugate g to g^k")
    return h
