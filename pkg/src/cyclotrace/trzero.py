"""Free-abelian model of TR_0^r(Z[G]) and of the limit TR_0(Z[G]).

At level ``r`` the group is free on symbols ``V_t([g])`` with ``t | r`` and
``[g]`` a conjugacy class; an element is a map ``(t, class id) -> int``.
On basis symbols the operators act by

    R_s V_t[g] = V_t[g]                 if s*t | r, else 0      (level r/s)
    F_s V_t[g] = d * V_{t/d}[g^(s/d)]   with d = gcd(s, t)      (level r/s)
    V_s V_t[g] = V_{st}[g]                                      (level r*s)

Limit elements are series ``sum a_{t,[g]} V_t([g])`` known on a finite
truncation set of ``t`` values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from . import _lattice
from ._arith import divisors, is_prime, p_adic_split
from .errors import (
    LevelCapExceeded,
    LevelNotCovered,
    NotADivisor,
    NotPrime,
    ParseError,
    TruncationTooSmall,
)
from .groups import Group
from .witt import TruncationSet

MAX_LEVEL = 10**6


def _check_level(r: int) -> None:
    if r < 1:
        raise NotADivisor(f"level must be positive, got {r}")
    if r > MAX_LEVEL:
        raise LevelCapExceeded(f"level {r} exceeds cap {MAX_LEVEL}")


def _check_divides(s: int, r: int) -> None:
    if s < 1 or r % s:
        raise NotADivisor(f"{s} does not divide {r}")


def _accumulate(pairs) -> dict:
    out = {}
    for k, v in pairs:
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True, eq=False)
class TRElem:
    """Element of TR_0^level(Z[G]) as ``{(t, class id): coeff}``."""

    group: Group
    level: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        _check_level(self.level)
        object.__setattr__(self, "coeffs", {k: v for k, v in self.coeffs.items() if v})
        nc = self.group.num_classes
        for t, c in self.coeffs:
            if t < 1 or self.level % t:
                raise NotADivisor(f"index t={t} does not divide level {self.level}")
            if not 0 <= c < nc:
                raise ValueError(f"class id {c} out of range")

    @classmethod
    def zero(cls, group, level):
        return cls(group, level, {})

    @classmethod
    def basis(cls, group, level, t, c):
        return cls(group, level, {(t, c): 1})

    def _same(self, other):
        if not isinstance(other, TRElem) or other.group is not self.group or other.level != self.level:
            raise ValueError("TR elements must share group and level")

    def __eq__(self, other):
        return (
            isinstance(other, TRElem)
            and self.group is other.group
            and self.level == other.level
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.level, tuple(sorted(self.coeffs.items()))))

    def __add__(self, other: TRElem) -> TRElem:
        self._same(other)
        return TRElem(self.group, self.level, _accumulate([*self.coeffs.items(), *other.coeffs.items()]))

    def __neg__(self):
        return TRElem(self.group, self.level, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int) -> TRElem:
        return TRElem(self.group, self.level, {k: n * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __getitem__(self, key) -> int:
        return self.coeffs.get(key, 0)

    def items(self):
        return sorted(self.coeffs.items())

    def __str__(self):
        return format_tr(self)

    __repr__ = __str__


def bracket(group: Group, g, r: int) -> TRElem:
    """``[g]_r``, the basis symbol ``V_1([g])`` at level ``r``."""
    return TRElem(group, r, {(1, group.class_of(g)): 1})


def tr_restriction(s: int, x: TRElem) -> TRElem:
    _check_divides(s, x.level)
    r = x.level
    return TRElem(x.group, r // s, {(t, c): v for (t, c), v in x.coeffs.items() if r % (s * t) == 0})


def _frobenius_pairs(group: Group, s: int, items):
    for (t, c), v in items:
        d = math.gcd(s, t)
        yield (t // d, group.class_power(c, s // d)), d * v


def tr_frobenius(s: int, x: TRElem) -> TRElem:
    _check_divides(s, x.level)
    return TRElem(x.group, x.level // s, _accumulate(_frobenius_pairs(x.group, s, x.coeffs.items())))


def tr_verschiebung(s: int, x: TRElem) -> TRElem:
    """V_s from level ``x.level`` up to level ``s * x.level``."""
    if s < 1:
        raise NotADivisor(f"s must be positive, got {s}")
    return TRElem(x.group, s * x.level, {(s * t, c): v for (t, c), v in x.coeffs.items()})


def mult_by_v_one(s: int, x: TRElem) -> TRElem:
    """Multiplication by V_s(1) in W_<r>(Z), which acts as V_s F_s."""
    _check_divides(s, x.level)
    return tr_verschiebung(s, tr_frobenius(s, x))


def level_basis(group: Group, r: int) -> list:
    """Basis keys ``(t, c)`` of level ``r`` in sorted order."""
    return [(t, c) for t in divisors(r) for c in range(group.num_classes)]


def _operator_matrix(op, group, src_level, dst_level):
    """Row-dict matrix of ``op`` (rows: target basis, columns: source basis)."""
    src = level_basis(group, src_level)
    dst_index = {k: i for i, k in enumerate(level_basis(group, dst_level))}
    rows = [{} for _ in dst_index]
    for j, key in enumerate(src):
        y = op(TRElem(group, src_level, {key: 1}))
        if y.level != dst_level:
            raise AssertionError("operator landed at the wrong level")
        for k, v in y.coeffs.items():
            rows[dst_index[k]][j] = v
    return rows, src, list(dst_index)


@dataclass
class ExactnessReport:
    r: int
    p: int
    u: int
    d: int
    surjective: bool
    kernel_equals_image: bool
    v_injective: bool
    kernel_keys: list  # basis keys killed by R_p
    image_keys: list  # images of the level-d basis under V_{p^u}
    witnesses: list

    @property
    def passed(self) -> bool:
        return self.surjective and self.kernel_equals_image and self.v_injective


def exactness_check(group: Group, r: int, p: int) -> ExactnessReport:
    """Check  TR^d --V_{p^u}--> TR^r --R_p--> TR^{r/p} --> 0  on the lattice.

    Here ``r = p^u d`` with ``p`` not dividing ``d``.  All checks are over Z:
    ranks and elementary divisors come from an integer diagonalization.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    _check_level(r)
    _check_divides(p, r)
    u, d = p_adic_split(r, p)
    pu = p**u
    R, r_src, r_dst = _operator_matrix(lambda x: tr_restriction(p, x), group, r, r // p)
    V, v_src, v_dst = _operator_matrix(lambda x: tr_verschiebung(pu, x), group, d, r)
    n_mid = len(r_src)
    witnesses = []

    rank_r, unimod_r = _lattice.rank_and_unimodular(R, n_mid)
    surjective = rank_r == len(r_dst) and unimod_r
    if not surjective:
        hit = {k for row in R for k in row}
        missing = [r_dst[i] for i, row in enumerate(R) if not row]
        witnesses.append(f"R_{p} not surjective: rank {rank_r}/{len(r_dst)}, unhit rows {missing[:5]}, hit cols {len(hit)}")

    rank_v, unimod_v = _lattice.rank_and_unimodular(V, len(v_src))
    v_injective = rank_v == len(v_src)
    if not v_injective:
        witnesses.append(f"V_{pu} not injective: rank {rank_v} < {len(v_src)}")

    composite = _lattice.mat_mul(R, V)
    zero_composite = not any(composite)
    if not zero_composite:
        i = next(i for i, row in enumerate(composite) if row)
        j = next(iter(composite[i]))
        witnesses.append(f"R_{p} V_{pu} nonzero on basis key {v_src[j]}")
    # im V sits inside ker R, is saturated, and has full rank there => equal
    saturated = unimod_v
    if not saturated:
        witnesses.append(f"image of V_{pu} is not saturated")
    full_rank = rank_v + rank_r == n_mid
    if not full_rank:
        witnesses.append(f"rank(V) + rank(R) = {rank_v + rank_r} != {n_mid}")
    kernel_equals_image = zero_composite and saturated and full_rank

    kernel_keys = [r_src[j] for j in range(n_mid) if not any(j in row for row in R)]
    image_keys = sorted({k for j, key in enumerate(v_src) for k in
                         tr_verschiebung(pu, TRElem(group, d, {key: 1})).coeffs})
    return ExactnessReport(r, p, u, d, surjective, kernel_equals_image, v_injective,
                           kernel_keys, image_keys, witnesses)


# --------------------------------------------------------------------------
# limit elements

@dataclass(frozen=True, eq=False)
class TRLimitElem:
    """Series ``sum a_{t,[g]} V_t([g])`` known for ``t`` in ``S``.

    ``full_support_declared`` asserts that every nonzero coefficient of the
    whole series has its ``t`` inside ``S``.
    """

    group: Group
    S: TruncationSet
    coeffs: dict = field(default_factory=dict)
    full_support_declared: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {k: v for k, v in self.coeffs.items() if v})
        nc = self.group.num_classes
        for t, c in self.coeffs:
            if t not in self.S:
                raise LevelNotCovered(f"coefficient index t={t} lies outside {self.S}")
            if not 0 <= c < nc:
                raise ValueError(f"class id {c} out of range")

    def __eq__(self, other):
        return (
            isinstance(other, TRLimitElem)
            and self.group is other.group
            and self.S == other.S
            and self.coeffs == other.coeffs
            and self.full_support_declared == other.full_support_declared
        )

    def __hash__(self):
        return hash((self.S, tuple(sorted(self.coeffs.items()))))

    def __getitem__(self, key) -> int:
        return self.coeffs.get(key, 0)

    def items(self):
        return sorted(self.coeffs.items())

    def restrict(self, T: TruncationSet) -> TRLimitElem:
        """Forget coefficients outside ``T`` (drops the support declaration)."""
        return TRLimitElem(self.group, T, {k: v for k, v in self.coeffs.items() if k[0] in T}, False)

    def __str__(self):
        return format_limit(self)

    __repr__ = __str__


def limit_project(a: TRLimitElem, r: int) -> TRElem:
    _check_level(r)
    missing = [t for t in divisors(r) if t not in a.S]
    if missing:
        raise LevelNotCovered(f"level {r} needs t={missing[0]}, which is outside {a.S}")
    return TRElem(a.group, r, {(t, c): v for (t, c), v in a.coeffs.items() if r % t == 0})


def limit_frobenius(p: int, a: TRLimitElem) -> TRLimitElem:
    """F_p on a series, known on ``S/p``.

    Coefficient of ``V_u([h])``: the sum of ``a_{u,[g]}`` over classes with
    ``[g^p] = [h]`` (only when ``p`` does not divide ``u``) plus
    ``p * a_{pu,[h]}``.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return limit_frobenius_any(p, a)


def limit_frobenius_any(s: int, a: TRLimitElem) -> TRLimitElem:
    """F_s for any ``s >= 1`` directly from the basis rule, known on ``S/s``."""
    if s < 1:
        raise NotADivisor(f"s must be positive, got {s}")
    target = a.S.quotient(s)
    if target is None:
        raise TruncationTooSmall(f"{s} is not in {a.S}, so nothing of F_{s} is determined")
    coeffs = _accumulate((k, v) for k, v in _frobenius_pairs(a.group, s, a.coeffs.items()) if k[0] in target)
    # still fully supported iff no input term lands outside the new truncation
    declared = a.full_support_declared and all(t // math.gcd(s, t) in target for t, _ in a.coeffs)
    return TRLimitElem(a.group, target, coeffs, declared)


def declared_frobenius(s: int, a: TRLimitElem) -> TRLimitElem:
    """F_s of a fully supported series, on the whole of ``S``.

    Valid only under the support declaration: coefficients with ``t``
    outside ``S`` are zero, so every output coefficient indexed in ``S``
    is determined.
    """
    if not a.full_support_declared:
        raise ValueError("declared_frobenius needs full_support_declared")
    if s < 1:
        raise NotADivisor(f"s must be positive, got {s}")
    coeffs = _accumulate(_frobenius_pairs(a.group, s, a.coeffs.items()))
    return TRLimitElem(a.group, a.S, coeffs, True)


# --------------------------------------------------------------------------
# text formats
#
#   level=<r>; <coeff>*V<t>[<class representative>] + ...
#   truncation=<S>; support=full|partial; <coeff>*V<t>[<rep>] + ...

_TERM = re.compile(r"([+-]?\d+)\*V(\d+)\[(.+)\]")


def _format_terms(group, items) -> str:
    if not items:
        return "0"
    return " + ".join(f"{v}*V{t}[{group.classes[c].representative}]" for (t, c), v in items)


def _parse_terms(group, text) -> dict:
    text = text.strip()
    if text == "0":
        return {}
    out = {}
    for term in re.split(r"\s+\+\s+", text):
        m = _TERM.fullmatch(term.strip())
        if not m:
            raise ParseError(f"bad term {term!r}; expected '<coeff>*V<t>[<element>]'")
        key = (int(m.group(2)), group.class_of(m.group(3)))
        out[key] = out.get(key, 0) + int(m.group(1))
    return out


def format_tr(x: TRElem) -> str:
    return f"level={x.level}; {_format_terms(x.group, x.items())}"


def parse_tr(text: str, group: Group) -> TRElem:
    m = re.fullmatch(r"\s*level=(\d+);(.*)", text.strip(), re.S)
    if not m:
        raise ParseError(f"bad TR element {text.strip()!r}; expected 'level=<r>; <terms>'")
    return TRElem(group, int(m.group(1)), _parse_terms(group, m.group(2)))


def format_limit(a: TRLimitElem) -> str:
    support = "full" if a.full_support_declared else "partial"
    return f"truncation={a.S}; support={support}; {_format_terms(a.group, a.items())}"


def parse_limit(text: str, group: Group) -> TRLimitElem:
    parts = [p.strip() for p in text.strip().split(";")]
    if len(parts) != 3 or not parts[0].startswith("truncation=") or not parts[1].startswith("support="):
        raise ParseError("bad limit element; expected 'truncation=<S>; support=full|partial; <terms>'")
    S = TruncationSet.parse(parts[0][len("truncation="):])
    support = parts[1][len("support="):]
    if support not in ("full", "partial"):
        raise ParseError(f"support must be 'full' or 'partial', got {support!r}")
    return TRLimitElem(group, S, _parse_terms(group, parts[2]), support == "full")
