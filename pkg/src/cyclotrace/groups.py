"""Finite groups by closure enumeration, with conjugacy classes and power maps.

Elements are handled internally as dense integer indices into
``Group.elements``; the public encodings are strings:

* permutations as image lists on ``{1..k}``, e.g. ``[2,1,3]`` for (1 2);
* 2x2 rational matrices as ``[a,b;c,d]`` with reduced fractions ``p/q``.

Indices follow the lexicographic order of the encoding strings, so every
derived numbering (class ids, printed output) is reproducible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from pathlib import Path

from .errors import NotAGroup, NotInSL2, OrderCapExceeded, ParseError, UnknownElement

DEFAULT_ORDER_CAP = 2000

KINDS = ("permutation", "matrix2x2", "catalog")


# --------------------------------------------------------------------------
# permutations

def perm_encode(p: tuple) -> str:
    return "[" + ",".join(str(i) for i in p) + "]"


def perm_mul(x: tuple, y: tuple) -> tuple:
    # function composition: (x*y)(i) = x(y(i))
    return tuple(x[i - 1] for i in y)


def perm_inv(x: tuple) -> tuple:
    out = [0] * len(x)
    for i, xi in enumerate(x, 1):
        out[xi - 1] = i
    return tuple(out)


def _pad(p: tuple, degree: int) -> tuple:
    return p + tuple(range(len(p) + 1, degree + 1))


def parse_permutation(text: str, degree: int = 0) -> tuple:
    """Parse cycle notation ``(1 2)(3 4 5)`` or an image list ``[2,1,3]``."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ParseError(f"bad permutation image list {text!r}")
        body = text[1:-1].strip()
        try:
            images = tuple(int(t) for t in body.split(",")) if body else ()
        except ValueError:
            raise ParseError(f"bad permutation image list {text!r}") from None
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ParseError(f"{text!r} is not a permutation of 1..{len(images)}")
        return _pad(images, degree)
    if not re.fullmatch(r"(\(\s*[\d\s,]*\))*", text):
        raise ParseError(f"bad cycle notation {text!r}")
    cycles = [
        [int(t) for t in re.split(r"[\s,]+", c.strip()) if t]
        for c in re.findall(r"\(([^)]*)\)", text)
    ]
    points = [i for c in cycles for i in c]
    if len(points) != len(set(points)) or any(i < 1 for i in points):
        raise ParseError(f"cycles in {text!r} are not disjoint positive points")
    n = max([degree, *points]) if points else degree
    images = list(range(1, n + 1))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            images[a - 1] = b
    return tuple(images)


def perm_to_cycles(p: tuple) -> str:
    seen, parts = set(), []
    for i in range(1, len(p) + 1):
        if i in seen or p[i - 1] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j - 1]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


# --------------------------------------------------------------------------
# exact 2x2 rational matrices

def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ParseError(f"bad rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


@dataclass(frozen=True)
class RatMatrix2:
    """The matrix ``[[a, b], [c, d]]`` with exact rational entries."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def identity(cls) -> RatMatrix2:
        return cls(1, 0, 0, 1)

    @classmethod
    def parse(cls, text: str) -> RatMatrix2:
        """Accept ``[a,b;c,d]`` or ``a b / c d``."""
        text = text.strip()
        if text.startswith("["):
            m = re.fullmatch(r"\[([^,;\]]+),([^,;\]]+);([^,;\]]+),([^,;\]]+)\]", text)
            if not m:
                raise ParseError(f"bad matrix encoding {text!r}")
            entries = m.groups()
        else:
            tokens = text.split()
            if len(tokens) != 5 or tokens[2] != "/":
                raise ParseError(f"bad matrix rows {text!r}; expected 'a b / c d'")
            entries = (tokens[0], tokens[1], tokens[3], tokens[4])
        return cls(*(parse_fraction(e) for e in entries))

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __mul__(self, other: RatMatrix2) -> RatMatrix2:
        return RatMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> RatMatrix2:
        det = self.det
        if det == 0:
            raise NotAGroup(f"singular matrix {self.encode()}")
        return RatMatrix2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __pow__(self, k: int) -> RatMatrix2:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = RatMatrix2.identity()
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def encode(self) -> str:
        a, b, c, d = (_frac_str(x) for x in (self.a, self.b, self.c, self.d))
        return f"[{a},{b};{c},{d}]"

    def __str__(self) -> str:
        return self.encode()


def _check_sl2(*ms: RatMatrix2) -> None:
    for m in ms:
        if m.det != 1:
            raise NotInSL2(f"{m.encode()} has determinant {_frac_str(m.det)}")


def sl2_mul(x: RatMatrix2, y: RatMatrix2) -> RatMatrix2:
    _check_sl2(x, y)
    return x * y


def sl2_inv(x: RatMatrix2) -> RatMatrix2:
    _check_sl2(x)
    return RatMatrix2(x.d, -x.b, -x.c, x.a)


def sl2_pow(x: RatMatrix2, k: int) -> RatMatrix2:
    _check_sl2(x)
    return x ** k


# --------------------------------------------------------------------------
# group specifications

@dataclass(frozen=True)
class GroupSpec:
    kind: str
    generators: tuple = ()
    catalog_name: str | None = None
    degree: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParseError(f"unknown group kind {self.kind!r}")


def _quaternion_generators() -> tuple:
    # Q8 = {±1, ±i, ±j, ±k} acting on itself by left multiplication
    units = "1ijk"
    table = {
        ("1", u): (1, u) for u in units
    }
    table.update({(u, "1"): (1, u) for u in units})
    table.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elems = [(sgn, u) for sgn in (1, -1) for u in units]
    pos = {e: n for n, e in enumerate(elems, 1)}

    def left(x):
        sx, ux = x
        return tuple(
            pos[(sx * sy * table[(ux, uy)][0], table[(ux, uy)][1])] for sy, uy in elems
        )

    return left((1, "i")), left((1, "j"))


def _primitive_root(p: int) -> int:
    from ._arith import factorize

    phi = p - 1
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factorize(phi)):
            return g
    return 1


def catalog_spec(name: str) -> GroupSpec:
    """Named small groups, all realized as permutation groups.

    ``trivial``, ``C<n>``, ``S<n>``, ``A<n>`` (n <= 6), ``D<n>`` (dihedral of
    order 2n on n points, n >= 3), ``Q8`` and ``AGL1_<p>`` (affine maps
    x -> ax + b of the prime field, acting on p points).
    """
    m = re.fullmatch(r"(trivial|Q8|[CSAD]\d+|AGL1_\d+)", name)
    if not m:
        raise ParseError(f"unknown catalog group {name!r}")

    def spec(*gens, degree=0):
        return GroupSpec(
            "permutation", tuple(perm_encode(g) for g in gens), name, degree
        )

    if name == "trivial":
        return spec(degree=1)
    if name == "Q8":
        return spec(*_quaternion_generators())
    if name.startswith("AGL1_"):
        p = int(name[5:])
        from ._arith import is_prime

        if not is_prime(p):
            raise ParseError(f"{name}: {p} is not prime")
        shift = tuple((x + 1) % p + 1 for x in range(p))
        a = _primitive_root(p)
        scale = tuple((a * x) % p + 1 for x in range(p))
        return spec(shift, scale, degree=p)
    family, n = name[0], int(name[1:])
    if n < 1:
        raise ParseError(f"bad catalog size in {name!r}")
    cycle = tuple(list(range(2, n + 1)) + [1])
    if family == "C":
        return spec(cycle, degree=n)
    if family == "S":
        if n > 6:
            raise ParseError(f"{name}: symmetric groups limited to n <= 6")
        if n <= 1:
            return spec(degree=1)
        swap = (2, 1) + tuple(range(3, n + 1))
        return spec(cycle, swap, degree=n)
    if family == "A":
        if n > 6:
            raise ParseError(f"{name}: alternating groups limited to n <= 6")
        gens = [parse_permutation(f"(1 2 {k})", n) for k in range(3, n + 1)]
        return spec(*gens, degree=max(n, 1))
    if family == "D":
        if n < 3:
            raise ParseError(f"{name}: dihedral groups need n >= 3")
        flip = tuple(((-x) % n) + 1 for x in range(n))
        return spec(cycle, flip, degree=n)
    raise ParseError(f"unknown catalog group {name!r}")


def parse_group_spec(text: str) -> GroupSpec:
    """Parse the group spec text format.

    ::

        # comments and blank lines are ignored
        group permutation [label]      |  group matrix2x2 [label]  |  group catalog <name>
        degree <k>                     (permutation only, optional)
        gen <cycle notation or image list>
        gen a b / c d                  (matrix2x2; entries p/q or integers)
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty group spec")
    head = lines[0].split()
    if len(head) < 2 or head[0] != "group" or head[1] not in KINDS:
        raise ParseError(f"first line must be 'group permutation|matrix2x2|catalog <name>', got {lines[0]!r}")
    kind = head[1]
    label = head[2] if len(head) > 2 else None
    if len(head) > 3:
        raise ParseError(f"trailing tokens in {lines[0]!r}")
    if kind == "catalog":
        if label is None:
            raise ParseError("catalog group needs a name")
        if len(lines) > 1:
            raise ParseError(f"catalog specs take no further directives, got {lines[1]!r}")
        return catalog_spec(label)
    degree = 0
    gens = []
    for ln in lines[1:]:
        directive, _, rest = ln.partition(" ")
        rest = rest.strip()
        if directive == "degree" and kind == "permutation":
            if not rest.isdigit():
                raise ParseError(f"bad degree {rest!r}")
            degree = int(rest)
        elif directive == "gen":
            gens.append(rest)
        else:
            raise ParseError(f"unknown directive {directive!r}")
    if kind == "permutation":
        perms = [parse_permutation(g) for g in gens]
        degree = max([degree, 1, *(len(p) for p in perms)])
        encoded = tuple(perm_encode(_pad(p, degree)) for p in perms)
        return GroupSpec(kind, encoded, label, degree)
    return GroupSpec(kind, tuple(RatMatrix2.parse(g).encode() for g in gens), label)


def load_group_spec(path) -> GroupSpec:
    return parse_group_spec(Path(path).read_text())


# --------------------------------------------------------------------------
# enumerated groups

@dataclass(frozen=True)
class ConjClass:
    id: int
    representative: str
    size: int
    members: tuple  # element indices, ascending (= ascending encodings)


@dataclass(frozen=True)
class ClassPowerMap:
    s: int
    mapping: tuple  # mapping[class id] = class id of the s-th power

    def __call__(self, c: int) -> int:
        return self.mapping[c]

    def compose(self, other: ClassPowerMap) -> ClassPowerMap:
        """``self ∘ other``, which is the power map for ``self.s * other.s``."""
        return ClassPowerMap(self.s * other.s, tuple(self.mapping[c] for c in other.mapping))


class Group:
    """A fully enumerated finite group.

    Construct through :func:`build_group`. Element arguments may be integer
    indices, encoding strings or raw objects (permutation tuples /
    :class:`RatMatrix2`).
    """

    def __init__(self, kind: str, objects, name: str | None = None, generators=()):
        self.kind = kind
        self.name = name
        objs = sorted(objects, key=self._encode_obj)
        self._objs = tuple(objs)
        self.elements = tuple(self._encode_obj(o) for o in objs)
        self._index = {o: i for i, o in enumerate(objs)}
        self._enc_index = {e: i for i, e in enumerate(self.elements)}
        self.generators = tuple(self.index(g) for g in generators)
        ident = self._identity_obj(objs[0])
        self.identity = self._index[ident]
        self._mul_cache = {}

    # -- object level -------------------------------------------------------
    def _encode_obj(self, o) -> str:
        return perm_encode(o) if self.kind == "permutation" else o.encode()

    def _identity_obj(self, sample):
        if self.kind == "permutation":
            return tuple(range(1, len(sample) + 1))
        return RatMatrix2.identity()

    def _mul_obj(self, x, y):
        return perm_mul(x, y) if self.kind == "permutation" else x * y

    # -- index level --------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self._objs)

    def __len__(self):
        return len(self._objs)

    def __repr__(self):
        return f"Group({self.name or self.kind}, order={self.order})"

    def index(self, x) -> int:
        if isinstance(x, int) and not isinstance(x, bool):
            if 0 <= x < len(self._objs):
                return x
            raise UnknownElement(f"index {x} out of range for group of order {self.order}")
        if isinstance(x, str):
            i = self._enc_index.get(x.replace(" ", ""))
            if i is None and self.kind == "permutation":
                try:
                    p = parse_permutation(x, len(self._objs[0]))
                except ParseError:
                    p = None
                i = self._index.get(p)
            elif i is None:
                try:
                    i = self._index.get(RatMatrix2.parse(x))
                except ParseError:
                    i = None
        else:
            i = self._index.get(x)
        if i is None:
            raise UnknownElement(f"{x!r} is not an element of {self!r}")
        return i

    def obj(self, i: int):
        return self._objs[i]

    def encode(self, i: int) -> str:
        return self.elements[i]

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        k = self._mul_cache.get(key)
        if k is None:
            k = self._index[self._mul_obj(self._objs[i], self._objs[j])]
            self._mul_cache[key] = k
        return k

    @cached_property
    def _inverses(self) -> tuple:
        if self.kind == "permutation":
            return tuple(self._index[perm_inv(o)] for o in self._objs)
        return tuple(self._index[o.inverse()] for o in self._objs)

    def inv(self, i: int) -> int:
        return self._inverses[i]

    def conjugate(self, x: int, h: int) -> int:
        """``h x h^-1``."""
        return self.mul(self.mul(h, x), self.inv(h))

    def commutator(self, x: int, y: int) -> int:
        """``[x, y] = x y x^-1 y^-1``."""
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    @cached_property
    def element_orders(self) -> tuple:
        out = []
        for i in range(self.order):
            n, j = 1, i
            while j != self.identity:
                j = self.mul(j, i)
                n += 1
            out.append(n)
        return tuple(out)

    def element_order(self, x) -> int:
        return self.element_orders[self.index(x)]

    def power(self, x, k: int) -> int:
        i = self.index(x)
        k %= self.element_orders[i]
        result, base = self.identity, i
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def exponent(self) -> int:
        return reduce(math.lcm, self.element_orders, 1)

    # -- conjugacy ----------------------------------------------------------
    @cached_property
    def classes(self) -> tuple:
        conj_by = self.generators or tuple(range(self.order))
        assigned = [False] * self.order
        orbits = []
        for x in range(self.order):
            if assigned[x]:
                continue
            orbit, frontier = {x}, [x]
            assigned[x] = True
            while frontier:
                y = frontier.pop()
                for h in conj_by:
                    z = self.conjugate(y, h)
                    if not assigned[z]:
                        assigned[z] = True
                        orbit.add(z)
                        frontier.append(z)
            orbits.append(tuple(sorted(orbit)))
        ident = next(o for o in orbits if o == (self.identity,))
        rest = sorted((o for o in orbits if o is not ident), key=lambda o: (len(o), self.elements[o[0]]))
        return tuple(
            ConjClass(cid, self.elements[o[0]], len(o), o)
            for cid, o in enumerate([ident, *rest])
        )

    @cached_property
    def _class_of(self) -> tuple:
        out = [0] * self.order
        for c in self.classes:
            for x in c.members:
                out[x] = c.id
        return tuple(out)

    def class_of(self, x) -> int:
        return self._class_of[self.index(x)]

    def class_rep(self, c: int) -> int:
        return self.classes[c].members[0]

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def power_map(self, s: int) -> ClassPowerMap:
        if s < 1:
            raise ValueError(f"power map needs s >= 1, got {s}")
        return ClassPowerMap(
            s, tuple(self._class_of[self.power(c.members[0], s)] for c in self.classes)
        )

    def class_power(self, c: int, s: int) -> int:
        """Class id of ``g**s`` for ``g`` in class ``c`` (any integer ``s``)."""
        return self._class_of[self.power(self.class_rep(c), s)]


def _closure(kind, gens, identity, order_cap):
    mul = perm_mul if kind == "permutation" else RatMatrix2.__mul__
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > order_cap:
                        raise OrderCapExceeded(
                            f"closure exceeds {order_cap} elements; raise the order cap"
                        )
                    nxt.append(y)
        frontier = nxt
    return seen


def build_group(spec: GroupSpec, order_cap: int = DEFAULT_ORDER_CAP) -> Group:
    if spec.kind == "catalog":
        spec = catalog_spec(spec.catalog_name or "")
    if spec.kind == "permutation":
        gens = [parse_permutation(g) for g in spec.generators]
        degree = max([spec.degree, 1, *(len(g) for g in gens)])
        gens = [_pad(g, degree) for g in gens]
        identity = tuple(range(1, degree + 1))
    else:
        gens = [RatMatrix2.parse(g) for g in spec.generators]
        for g in gens:
            if g.det != 1:
                raise NotAGroup(f"generator {g.encode()} has determinant {_frac_str(g.det)}, not 1")
        identity = RatMatrix2.identity()
    elements = _closure(spec.kind, gens, identity, order_cap)
    return Group(spec.kind, elements, spec.catalog_name, generators=gens)


def catalog_group(name: str, order_cap: int = DEFAULT_ORDER_CAP) -> Group:
    return build_group(catalog_spec(name), order_cap)


def load_group(path, order_cap: int = DEFAULT_ORDER_CAP) -> Group:
    return build_group(load_group_spec(path), order_cap)


def conjugacy_classes(g: Group) -> list:
    return list(g.classes)


def class_of(g: Group, x) -> int:
    return g.class_of(x)


def power_map(g: Group, s: int) -> ClassPowerMap:
    return g.power_map(s)


def exponent(g: Group) -> int:
    return g.exponent()
