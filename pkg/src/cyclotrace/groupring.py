"""The integral group ring Z[G], square matrices over it, and traces into HH_0.

HH_0(Z[G]) = Z[G]/[Z[G], Z[G]] is the free abelian group on conjugacy
classes, so a trace lands in an :class:`HH0Vector` keyed by class id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import DimensionMismatch, GroupMismatch, NotIdempotent, ParseError
from .groups import Group


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def _check_group(a, b):
    if a.group is not b.group:
        raise GroupMismatch(f"{a.group!r} vs {b.group!r}")


@dataclass(frozen=True, eq=False)
class GroupRingElem:
    """Finitely supported ``element index -> integer`` map; no stored zeros."""

    group: Group
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(self.coeffs))

    @classmethod
    def zero(cls, group):
        return cls(group, {})

    @classmethod
    def one(cls, group):
        return cls(group, {group.identity: 1})

    @classmethod
    def basis(cls, group, x, coeff: int = 1):
        return cls(group, {group.index(x): coeff})

    def __eq__(self, other):
        if isinstance(other, int):
            other = GroupRingElem(self.group, {self.group.identity: other})
        return (
            isinstance(other, GroupRingElem)
            and self.group is other.group
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: GroupRingElem) -> GroupRingElem:
        _check_group(self, other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return GroupRingElem(self.group, out)

    def __neg__(self) -> GroupRingElem:
        return GroupRingElem(self.group, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: GroupRingElem) -> GroupRingElem:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElem(self.group, {k: other * v for k, v in self.coeffs.items()})
        _check_group(self, other)
        mul = self.group.mul
        out = {}
        for x, a in self.coeffs.items():
            for y, b in other.coeffs.items():
                z = mul(x, y)
                out[z] = out.get(z, 0) + a * b
        return GroupRingElem(self.group, out)

    def __rmul__(self, n: int):
        return self * n

    def terms(self):
        """``(element index, coefficient)`` pairs in element order."""
        return sorted(self.coeffs.items())

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{self.group.encode(x)}" for x, c in self.terms())

    __repr__ = __str__


def gr_add(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
    return a + b


def gr_mul(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
    return a * b


def gr_neg(a: GroupRingElem) -> GroupRingElem:
    return -a


@dataclass(frozen=True, eq=False)
class HH0Vector:
    """Finitely supported ``class id -> integer`` map."""

    group: Group
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(self.coeffs))
        bad = [c for c in self.coeffs if not 0 <= c < self.group.num_classes]
        if bad:
            raise ValueError(f"invalid class ids {bad}")

    def __eq__(self, other):
        return (
            isinstance(other, HH0Vector)
            and self.group is other.group
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __add__(self, other: HH0Vector) -> HH0Vector:
        _check_group(self, other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return HH0Vector(self.group, out)

    def __neg__(self):
        return HH0Vector(self.group, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __getitem__(self, c: int) -> int:
        return self.coeffs.get(c, 0)

    def items(self):
        return sorted(self.coeffs.items())

    def nonidentity_support(self) -> list:
        return [c for c, _ in self.items() if c != 0]

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}*class({self.group.classes[c].representative})" for c, v in self.items())

    __repr__ = __str__


def hh0_project(a: GroupRingElem) -> HH0Vector:
    out = {}
    class_of = a.group.class_of
    for x, v in a.coeffs.items():
        c = class_of(x)
        out[c] = out.get(c, 0) + v
    return HH0Vector(a.group, out)


class GRMatrix:
    """Dense ``n x n`` matrix with :class:`GroupRingElem` entries."""

    def __init__(self, group: Group, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix is not square")
        for r in rows:
            for e in r:
                if e.group is not group:
                    raise GroupMismatch("entry over a different group")
        self.group = group
        self.n = n
        self.rows = rows

    @classmethod
    def zero(cls, group, n):
        z = GroupRingElem.zero(group)
        return cls(group, [[z] * n for _ in range(n)])

    @classmethod
    def identity(cls, group, n):
        z, one = GroupRingElem.zero(group), GroupRingElem.one(group)
        return cls(group, [[one if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def elementary(cls, group, n, i, j, a: GroupRingElem):
        """Identity plus ``a`` in position ``(i, j)``, ``i != j``; inverse is ``elementary(.., -a)``."""
        if i == j:
            raise ValueError("elementary matrices need i != j")
        rows = [list(r) for r in cls.identity(group, n).rows]
        rows[i][j] = a
        return cls(group, rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, GRMatrix) and self.group is other.group and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def _check(self, other):
        if self.group is not other.group:
            raise GroupMismatch(f"{self.group!r} vs {other.group!r}")
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")

    def __add__(self, other: GRMatrix) -> GRMatrix:
        self._check(other)
        return GRMatrix(
            self.group,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __matmul__(self, other: GRMatrix) -> GRMatrix:
        self._check(other)
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = GroupRingElem.zero(self.group)
                for k in range(n):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return GRMatrix(self.group, out)

    def diagonal_sum(self) -> GroupRingElem:
        acc = GroupRingElem.zero(self.group)
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def block_diag(self, other: GRMatrix) -> GRMatrix:
        if self.group is not other.group:
            raise GroupMismatch(f"{self.group!r} vs {other.group!r}")
        z = GroupRingElem.zero(self.group)
        rows = [list(r) + [z] * other.n for r in self.rows]
        rows += [[z] * self.n + list(r) for r in other.rows]
        return GRMatrix(self.group, rows)

    def __repr__(self):
        return f"GRMatrix(n={self.n}, {[[str(e) for e in r] for r in self.rows]})"


def mat_mul(a: GRMatrix, b: GRMatrix) -> GRMatrix:
    return a @ b


def is_idempotent(e: GRMatrix) -> bool:
    return e @ e == e


def trace_to_hh0(e: GRMatrix) -> HH0Vector:
    """Trace class of any square matrix, no idempotency requirement."""
    return hh0_project(e.diagonal_sum())


def hattori_stallings_rank(e: GRMatrix) -> HH0Vector:
    if not is_idempotent(e):
        raise NotIdempotent("matrix is not idempotent, so it presents no projective module")
    return trace_to_hh0(e)


# --------------------------------------------------------------------------
# matrix text format
#
#   matrix n=<dim> group=<path>
#   <i> <j> <coeff> <element-encoding>      (1-based i, j; one line per term)

def format_matrix(m: GRMatrix, group_ref: str) -> str:
    lines = [f"matrix n={m.n} group={group_ref}"]
    for i, row in enumerate(m.rows, 1):
        for j, e in enumerate(row, 1):
            for x, c in e.terms():
                lines.append(f"{i} {j} {c} {m.group.encode(x)}")
    return "\n".join(lines) + "\n"


def parse_matrix_header(text: str) -> tuple:
    """Return ``(n, group_ref)`` from the first non-comment line."""
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        fields = dict(t.split("=", 1) for t in tokens[1:] if "=" in t)
        if tokens[0] != "matrix" or set(fields) != {"n", "group"} or len(tokens) != 3:
            raise ParseError(f"bad matrix header {line!r}; expected 'matrix n=<dim> group=<path>'")
        if not fields["n"].isdigit() or int(fields["n"]) < 1:
            raise ParseError(f"bad dimension {fields['n']!r}")
        return int(fields["n"]), fields["group"]
    raise ParseError("empty matrix file")


def parse_matrix(text: str, group: Group) -> GRMatrix:
    n, _ = parse_matrix_header(text)
    entries = [[{} for _ in range(n)] for _ in range(n)]
    body = False
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if not body:
            body = True
            continue
        parts = line.split(None, 3)
        if len(parts) != 4:
            raise ParseError(f"line {lineno}: expected '<i> <j> <coeff> <element>'")
        try:
            i, j, c = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer field in {line!r}") from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"line {lineno}: index ({i}, {j}) outside 1..{n}")
        x = group.index(parts[3])
        cell = entries[i - 1][j - 1]
        cell[x] = cell.get(x, 0) + c
    return GRMatrix(group, [[GroupRingElem(group, e) for e in row] for row in entries])


def load_matrix(path, group: Group) -> GRMatrix:
    return parse_matrix(Path(path).read_text(), group)
