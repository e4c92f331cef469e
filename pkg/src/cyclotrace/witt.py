"""Big Witt vectors W_S(Z) over finite divisor-closed truncation sets.

Arithmetic goes through ghost components

    w_n = sum_{d | n} d * a_d ** (n // d)

and back by solving for ``a_n`` one index at a time.  Every division in the
inversion must be exact; a remainder means the arithmetic is broken, and is
raised as :class:`IntegralityViolation` rather than rounded away.
"""

from __future__ import annotations

import re

from ._arith import divisors
from .errors import (
    IndexNotInTruncation,
    IntegralityViolation,
    NotASubset,
    NotDivisorClosed,
    ParseError,
    TruncationCapExceeded,
    TruncationMismatch,
)

MAX_ELEMENT = 10**6
MAX_SIZE = 256


class TruncationSet:
    """A finite, nonempty, divisor-closed set of positive integers."""

    __slots__ = ("elements", "_members")

    def __init__(self, elements, *, max_element: int = MAX_ELEMENT, max_size: int = MAX_SIZE):
        elems = tuple(sorted(set(int(n) for n in elements)))
        if not elems or elems[0] < 1:
            raise NotDivisorClosed(f"truncation set must be nonempty positive integers, got {elems}")
        if elems[-1] > max_element:
            raise TruncationCapExceeded(f"max element {elems[-1]} exceeds cap {max_element}")
        if len(elems) > max_size:
            raise TruncationCapExceeded(f"size {len(elems)} exceeds cap {max_size}")
        members = frozenset(elems)
        for n in elems:
            missing = [d for d in divisors(n) if d not in members]
            if missing:
                raise NotDivisorClosed(f"{n} is in the set but its divisor {missing[0]} is not")
        self.elements = elems
        self._members = members

    @classmethod
    def divisors_of(cls, r: int, **caps) -> TruncationSet:
        return cls(divisors(r), **caps)

    @classmethod
    def up_to(cls, n: int, **caps) -> TruncationSet:
        """``{1, 2, ..., n}``."""
        return cls(range(1, n + 1), **caps)

    @classmethod
    def parse(cls, text: str, **caps) -> TruncationSet:
        text = text.strip()
        m = re.fullmatch(r"divisors-of:(\d+)", text)
        if m:
            r = int(m.group(1))
            if r < 1:
                raise ParseError("divisors-of needs a positive integer")
            if r > caps.get("max_element", MAX_ELEMENT):
                raise TruncationCapExceeded(f"{r} exceeds cap")
            return cls.divisors_of(r, **caps)
        m = re.fullmatch(r"\{\s*(\d+(\s*,\s*\d+)*)\s*\}", text)
        if m:
            return cls((int(t) for t in m.group(1).split(",")), **caps)
        raise ParseError(f"bad truncation set {text!r}; use 'divisors-of:<r>' or '{{1,2,...}}'")

    def quotient(self, s: int) -> TruncationSet | None:
        """``S/s = {n : s*n in S}``, or ``None`` when empty."""
        elems = [n // s for n in self.elements if n % s == 0]
        if not elems:
            return None
        return TruncationSet(elems, max_element=self.elements[-1], max_size=len(self.elements))

    def __contains__(self, n) -> bool:
        return n in self._members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __le__(self, other: TruncationSet) -> bool:
        return self._members <= other._members

    def __eq__(self, other):
        return isinstance(other, TruncationSet) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __str__(self):
        return "{" + ",".join(map(str, self.elements)) + "}"

    def __repr__(self):
        return f"TruncationSet({self})"


def _ghost_of(S: TruncationSet, coords: dict) -> dict:
    return {
        n: sum(d * coords.get(d, 0) ** (n // d) for d in divisors(n))
        for n in S
    }


def _coords_of(S: TruncationSet, ghost: dict) -> dict:
    coords = {}
    for n in S:  # ascending, so every proper divisor is already solved
        rest = ghost[n] - sum(d * coords[d] ** (n // d) for d in divisors(n)[:-1])
        q, r = divmod(rest, n)
        if r:
            raise IntegralityViolation(
                f"ghost component at {n} is not integral: {rest} not divisible by {n}"
            )
        coords[n] = q
    return coords


class WittVector:
    """An element of W_S(Z), stored by its Witt coordinates ``a_n``."""

    __slots__ = ("S", "coords")

    def __init__(self, S: TruncationSet, coords=None):
        coords = dict(coords or {})
        for n in coords:
            if n not in S:
                raise IndexNotInTruncation(f"index {n} is not in {S}")
        self.S = S
        self.coords = {n: int(v) for n, v in coords.items() if v}

    @classmethod
    def zero(cls, S):
        return cls(S)

    @classmethod
    def one(cls, S):
        return cls(S, {1: 1})

    @classmethod
    def from_ghost(cls, S: TruncationSet, ghost) -> WittVector:
        ghost = dict(ghost)
        if set(ghost) != set(S):
            raise TruncationMismatch("ghost vector not indexed by the truncation set")
        return cls(S, _coords_of(S, ghost))

    @classmethod
    def from_int(cls, S: TruncationSet, k: int) -> WittVector:
        """Image of the integer ``k`` under Z -> W_S(Z) (constant ghost ``k``)."""
        return cls.from_ghost(S, {n: k for n in S})

    def __getitem__(self, n: int) -> int:
        if n not in self.S:
            raise IndexNotInTruncation(f"index {n} is not in {self.S}")
        return self.coords.get(n, 0)

    def ghost(self) -> dict:
        return _ghost_of(self.S, self.coords)

    def _check(self, other):
        if not isinstance(other, WittVector) or self.S != other.S:
            raise TruncationMismatch(f"{getattr(other, 'S', other)} vs {self.S}")

    def __eq__(self, other):
        return isinstance(other, WittVector) and self.S == other.S and self.coords == other.coords

    def __hash__(self):
        return hash((self.S, tuple(sorted(self.coords.items()))))

    def __add__(self, other: WittVector) -> WittVector:
        self._check(other)
        gx, gy = self.ghost(), other.ghost()
        return WittVector.from_ghost(self.S, {n: gx[n] + gy[n] for n in self.S})

    def __neg__(self) -> WittVector:
        return WittVector.from_ghost(self.S, {n: -w for n, w in self.ghost().items()})

    def __sub__(self, other: WittVector) -> WittVector:
        return self + (-other)

    def __mul__(self, other) -> WittVector:
        if isinstance(other, int):
            other = WittVector.from_int(self.S, other)
        self._check(other)
        gx, gy = self.ghost(), other.ghost()
        return WittVector.from_ghost(self.S, {n: gx[n] * gy[n] for n in self.S})

    def __rmul__(self, k: int) -> WittVector:
        return self * k

    def __str__(self):
        return ",".join(f"{n}:{self.coords.get(n, 0)}" for n in self.S)

    def __repr__(self):
        return f"WittVector({self.S}, {self})"


def ghost(x: WittVector) -> dict:
    return x.ghost()


def w_add(x: WittVector, y: WittVector) -> WittVector:
    return x + y


def w_mul(x: WittVector, y: WittVector) -> WittVector:
    return x * y


def w_neg(x: WittVector) -> WittVector:
    return -x


def w_frobenius(s: int, x: WittVector) -> WittVector:
    """F_s : W_S -> W_{S/s}, characterized by ``ghost_n(F_s x) = ghost_{sn}(x)``."""
    if s < 1:
        raise ValueError(f"s must be positive, got {s}")
    target = x.S.quotient(s)
    if target is None:
        raise IndexNotInTruncation(f"{s} is not in {x.S}; S/{s} is empty")
    g = x.ghost()
    return WittVector.from_ghost(target, {n: g[s * n] for n in target})


def w_verschiebung(s: int, x: WittVector, S: TruncationSet) -> WittVector:
    """V_s : W_{S/s} -> W_S, the index shift ``(V_s x)_n = x_{n/s}``."""
    if s < 1:
        raise ValueError(f"s must be positive, got {s}")
    if S.quotient(s) != x.S:
        raise TruncationMismatch(f"source set {x.S} is not {S}/{s}")
    return WittVector(S, {s * n: a for n, a in x.coords.items()})


def w_restrict(x: WittVector, T: TruncationSet) -> WittVector:
    if not T <= x.S:
        raise NotASubset(f"{T} is not a subset of {x.S}")
    return WittVector(T, {n: a for n, a in x.coords.items() if n in T})


def v_one(s: int, S: TruncationSet) -> WittVector:
    """V_s(1): coordinate 1 at index ``s``."""
    if s not in S:
        raise IndexNotInTruncation(f"{s} is not in {S}")
    return WittVector(S, {s: 1})


def parse_witt(text: str, S: TruncationSet) -> WittVector:
    """Parse ``n1:a1,n2:a2,...``; unlisted indices are zero, ``0`` alone is zero."""
    text = text.strip()
    if text in ("", "0"):
        return WittVector.zero(S)
    coords = {}
    for item in text.split(","):
        m = re.fullmatch(r"\s*(\d+)\s*:\s*([+-]?\d+)\s*", item)
        if not m:
            raise ParseError(f"bad Witt coordinate {item!r}; expected '<n>:<a>'")
        n, a = int(m.group(1)), int(m.group(2))
        if n in coords:
            raise ParseError(f"index {n} given twice")
        coords[n] = a
    return WittVector(S, coords)

