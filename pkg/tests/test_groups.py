import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from cyclotrace.errors import (
    NotAGroup,
    NotInSL2,
    OrderCapExceeded,
    ParseError,
    UnknownElement,
)
from cyclotrace.groups import (
    GroupSpec,
    RatMatrix2,
    build_group,
    catalog_group,
    class_of,
    conjugacy_classes,
    exponent,
    load_group,
    parse_group_spec,
    parse_permutation,
    perm_to_cycles,
    power_map,
    sl2_inv,
    sl2_mul,
    sl2_pow,
)

from helpers import CATALOG, brute_classes, grp, p_pow

DATA = __import__("pathlib").Path(__file__).resolve().parent.parent / "data" / "groups"


# --- construction --------------------------------------------------------

def test_trivial_group_has_order_one():
    G = build_group(GroupSpec("permutation", ()))
    assert G.order == 1
    assert [c.size for c in G.classes] == [1]


def test_s3_from_generators():
    G = build_group(parse_group_spec("group permutation S3\ngen (1 2)\ngen (1 2 3)\n"))
    assert G.order == 6


def test_q8_catalog_order():
    assert catalog_group("Q8").order == 8


@pytest.mark.parametrize(
    "name,order",
    [("C7", 7), ("S4", 24), ("A4", 12), ("A5", 60), ("D5", 10), ("AGL1_5", 20), ("S5", 120)],
)
def test_catalog_orders(name, order):
    assert catalog_group(name).order == order


def test_matrix_group_from_file():
    G = load_group(DATA / "sl2_c6.txt")
    assert G.kind == "matrix2x2"
    assert G.order == 6
    assert G.exponent() == 6


def test_order_cap_is_enforced():
    with pytest.raises(OrderCapExceeded):
        load_group(DATA / "sl2_unipotent.txt")
    with pytest.raises(OrderCapExceeded):
        catalog_group("S5", order_cap=100)


def test_matrix_generator_with_det_not_one_is_rejected():
    spec = parse_group_spec("group matrix2x2\ngen 2 0 / 0 1\n")
    with pytest.raises(NotAGroup):
        build_group(spec)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "group lattice\n",
        "group permutation\nfrobnicate (1 2)\n",
        "group catalog\n",
        "group catalog S3\ngen (1 2)\n",
        "group catalog X9\n",
        "group permutation\ngen (1 2 x)\n",
        "group matrix2x2\ngen 1 1 0 1\n",
    ],
)
def test_group_file_parser_rejects(text):
    with pytest.raises(ParseError):
        build_group(parse_group_spec(text))


def test_permutation_parsing_forms_agree():
    assert parse_permutation("(1 2 3)") == parse_permutation("[2,3,1]")
    assert parse_permutation("(1 3)(2 4)", 5) == (3, 4, 1, 2, 5)
    assert perm_to_cycles((2, 3, 1, 4)) == "(1 2 3)"


# --- classes -------------------------------------------------------------

def test_trivial_classes():
    G = catalog_group("trivial")
    assert len(conjugacy_classes(G)) == 1


def test_s3_classes():
    assert [c.size for c in conjugacy_classes(grp("S3"))] == [1, 2, 3]


def test_q8_has_five_classes():
    assert len(conjugacy_classes(grp("Q8"))) == 5


def test_class_of_examples():
    G = grp("S3")
    assert class_of(G, G.identity) == 0
    assert class_of(G, "(1 2)") == class_of(G, "(2 3)") == 2
    assert class_of(G, "(1 3 2)") == class_of(G, "(1 2 3)")


def test_unknown_element():
    with pytest.raises(UnknownElement):
        grp("S3").index("(1 4)")
    with pytest.raises(UnknownElement):
        grp("S3").index(99)


@pytest.mark.parametrize("name", CATALOG + ["A4", "A5", "D5", "S5", "AGL1_7"])
def test_classes_match_brute_force(name):
    G = grp(name)
    mine = {frozenset(G.obj(x) for x in c.members) for c in G.classes}
    assert mine == set(brute_classes([G.obj(x) for x in range(G.order)]))


@pytest.mark.parametrize("name", ["S4", "D4", "A5", "AGL1_5"])
def test_class_sizes_match_sympy(name):
    G = grp(name)
    gens = [Permutation([i - 1 for i in G.obj(g)]) for g in range(G.order)]
    sym = PermutationGroup(gens)
    assert sym.order() == G.order
    assert sorted(len(c) for c in sym.conjugacy_classes()) == sorted(c.size for c in G.classes)


@pytest.mark.parametrize("name", CATALOG)
def test_class_layout(name):
    G = grp(name)
    cl = G.classes
    assert cl[0].members == (G.identity,)
    assert sum(c.size for c in cl) == G.order
    assert all(G.order % c.size == 0 for c in cl)
    rest = [(c.size, c.representative) for c in cl[1:]]
    assert rest == sorted(rest)
    for c in cl:
        assert c.representative == min(G.encode(x) for x in c.members)


# --- power maps and exponent --------------------------------------------

def test_power_map_examples():
    G = grp("S3")
    assert power_map(G, 1).mapping == tuple(range(G.num_classes))
    assert power_map(G, 2).mapping == (0, 1, 0)
    C4 = grp("C4")
    g = C4.index("(1 2 3 4)")
    assert power_map(C4, 2)(C4.class_of(g)) == C4.class_of(C4.mul(g, g))


def test_exponent_examples():
    assert exponent(catalog_group("trivial")) == 1
    assert exponent(grp("S3")) == 6
    assert exponent(grp("Q8")) == 4


@pytest.mark.parametrize("name", CATALOG)
def test_power_map_composition(name):
    G = grp(name)
    e = G.exponent()
    for s in range(1, e + 1):
        for t in range(1, e + 1):
            assert G.power_map(s * t) == G.power_map(s).compose(G.power_map(t))


def test_power_map_well_defined_random():
    rng = random.Random(7)
    for _ in range(200):
        G = grp(rng.choice(CATALOG))
        s = rng.randint(1, 3 * G.exponent())
        x = rng.randrange(G.order)
        xs = G.index(p_pow(G.obj(x), s))
        assert G.class_of(xs) == G.power_map(s)(G.class_of(x))


@given(st.sampled_from(CATALOG), st.data())
@settings(max_examples=60, deadline=None)
def test_conjugacy_is_an_equivalence(name, data):
    G = grp(name)
    idx = st.integers(0, G.order - 1)
    x, h, k = data.draw(idx), data.draw(idx), data.draw(idx)
    y = G.conjugate(x, h)
    z = G.conjugate(y, k)
    assert G.class_of(y) == G.class_of(x)
    assert G.conjugate(y, G.inv(h)) == x
    assert G.class_of(z) == G.class_of(x)


@given(st.sampled_from(CATALOG), st.data())
@settings(max_examples=60, deadline=None)
def test_group_axioms(name, data):
    G = grp(name)
    idx = st.integers(0, G.order - 1)
    a, b, c = data.draw(idx), data.draw(idx), data.draw(idx)
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.identity) == a == G.mul(G.identity, a)
    assert G.mul(a, G.inv(a)) == G.identity


# --- SL(2, Q) ------------------------------------------------------------

def test_sl2_powers():
    g = RatMatrix2(1, 1, 0, 1)
    assert sl2_pow(g, 0) == RatMatrix2.identity()
    assert sl2_pow(g, 5) == RatMatrix2(1, 5, 0, 1)
    assert sl2_pow(g, -3) == RatMatrix2(1, -3, 0, 1)


def test_sl2_inverse():
    a, b, c = Fraction(3, 2), Fraction(5), Fraction(1, 7)
    h = RatMatrix2(a, b, c, (1 + b * c) / a)
    assert h.det == 1
    assert sl2_mul(h, sl2_inv(h)) == RatMatrix2.identity()


def test_sl2_rejects_det_not_one():
    with pytest.raises(NotInSL2):
        sl2_mul(RatMatrix2(2, 0, 0, 1), RatMatrix2.identity())


def test_matrix_parse_and_encode_round_trip():
    m = RatMatrix2.parse("[1/2,-3;0,2]")
    assert m == RatMatrix2.parse("1/2 -3 / 0 2")
    assert m.encode() == "[1/2,-3;0,2]"
    assert RatMatrix2.parse(m.encode()) == m
    assert RatMatrix2(Fraction(2, 4), 0, 0, 2).encode() == "[1/2,0;0,2]"
