import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from cyclotrace.errors import (
    IndexNotInTruncation,
    NotASubset,
    NotDivisorClosed,
    ParseError,
    TruncationCapExceeded,
    TruncationMismatch,
)
from cyclotrace.witt import (
    TruncationSet,
    WittVector,
    ghost,
    parse_witt,
    v_one,
    w_add,
    w_frobenius,
    w_mul,
    w_neg,
    w_restrict,
    w_verschiebung,
)

from helpers import oracle_witt_add, oracle_witt_mul

D = TruncationSet.divisors_of
R_VALUES = [4, 6, 12, 30]


def W(S, *coords):
    """Coordinates listed in the order of ``S``."""
    return WittVector(S, dict(zip(S, coords)))


@st.composite
def witt_vectors(draw, S, bound=6):
    return WittVector(S, {n: draw(st.integers(-bound, bound)) for n in S})


# --- truncation sets ----------------------------------------------------

def test_truncation_set_forms():
    assert list(D(12)) == [1, 2, 3, 4, 6, 12]
    assert TruncationSet.parse("divisors-of:12") == TruncationSet.parse("{1,2,3,4,6,12}")
    assert str(D(4)) == "{1,2,4}"
    assert D(12).quotient(2) == D(6)
    assert D(12).quotient(5) is None
    assert list(TruncationSet.up_to(5).quotient(2)) == [1, 2]


@pytest.mark.parametrize("text", ["{1,2,3,4}x", "{}", "divisors-of:0", "{2,4}", "{1,4}"])
def test_bad_truncation_sets(text):
    with pytest.raises((ParseError, NotDivisorClosed)):
        TruncationSet.parse(text)


def test_truncation_caps():
    with pytest.raises(TruncationCapExceeded):
        TruncationSet.up_to(300)
    with pytest.raises(TruncationCapExceeded):
        D(2 * 10**6)


# --- ghost ---------------------------------------------------------------

def test_ghost_examples():
    assert list(W(D(4), 1).ghost().values()) == [1, 1, 1]
    assert ghost(W(D(4), 0, 1, 0)) == {1: 0, 2: 2, 4: 2}
    assert ghost(W(D(2), 2, 0)) == {1: 2, 2: 4}


@pytest.mark.parametrize("r", R_VALUES)
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_arithmetic_matches_series_oracle(r, data):
    S = D(r)
    x, y = data.draw(witt_vectors(S)), data.draw(witt_vectors(S))
    keep = lambda d: {n: v for n, v in d.items() if n in S}
    assert w_add(x, y).coords == keep(oracle_witt_add(x.coords, y.coords, r))
    assert w_mul(x, y).coords == keep(oracle_witt_mul(x.coords, y.coords, r))


@pytest.mark.parametrize("r", R_VALUES)
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_ghost_is_an_injective_ring_map(r, data):
    S = D(r)
    x, y = data.draw(witt_vectors(S)), data.draw(witt_vectors(S))
    gx, gy = x.ghost(), y.ghost()
    assert (x + y).ghost() == {n: gx[n] + gy[n] for n in S}
    assert (x * y).ghost() == {n: gx[n] * gy[n] for n in S}
    assert WittVector.from_ghost(S, gx) == x
    assert w_neg(x).ghost() == {n: -gx[n] for n in S}


@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(data):
    S = D(12)
    x, y, z = (data.draw(witt_vectors(S, 4)) for _ in range(3))
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x + WittVector.zero(S) == x
    assert WittVector.one(S) * x == x
    assert x - x == WittVector.zero(S)


def test_v2_one_squared():
    S = D(4)
    sq = v_one(2, S) * v_one(2, S)
    assert sq.ghost() == {1: 0, 2: 4, 4: 4}
    # ghost (0,4,4) inverts to a_4 = (4 - 2*2^2)/4 = -1
    assert sq == W(S, 0, 2, -1)
    assert sq == WittVector.from_int(S, 2) * v_one(2, S)
    assert sq.coords == oracle_witt_mul({2: 1}, {2: 1}, 4)


def test_truncation_mismatch():
    with pytest.raises(TruncationMismatch):
        WittVector.one(D(4)) + WittVector.one(D(6))


# --- F, V, R ------------------------------------------------------------

def test_frobenius_examples():
    S = D(4)
    x = W(S, 3, -1, 2)
    assert w_frobenius(1, x) == x
    assert w_frobenius(2, v_one(2, S)) == W(D(2), 2, -1)
    assert w_frobenius(2, WittVector.one(S)) == WittVector.one(D(2))


def test_verschiebung_examples():
    S = D(4)
    x = W(S, 3, -1, 2)
    assert w_verschiebung(1, x, S) == x
    assert w_verschiebung(2, WittVector.one(D(2)), S) == W(S, 0, 1, 0)
    with pytest.raises(TruncationMismatch):
        w_verschiebung(2, x, S)


def test_restrict_examples():
    S = D(4)
    x = v_one(2, S)
    assert w_restrict(x, S) == x
    assert w_restrict(x, D(2)) == W(D(2), 0, 1)
    assert w_restrict(W(S, 5, 1, 1), D(1)) == W(D(1), 5)
    with pytest.raises(NotASubset):
        w_restrict(x, D(3))


@pytest.mark.parametrize("r", R_VALUES)
@given(data=st.data())
@settings(max_examples=30, deadline=None)
def test_operator_identities(r, data):
    S = D(r)
    s = data.draw(st.sampled_from(list(S)))
    t = data.draw(st.sampled_from(list(S)))
    Ss = S.quotient(s)
    x, y = data.draw(witt_vectors(S, 4)), data.draw(witt_vectors(S, 4))
    u = data.draw(witt_vectors(Ss, 4))
    # ghost of F and V
    gx = x.ghost()
    assert w_frobenius(s, x).ghost() == {n: gx[s * n] for n in Ss}
    gu = u.ghost()
    assert w_verschiebung(s, u, S).ghost() == {n: (s * gu[n // s] if n % s == 0 else 0) for n in S}
    # F is a ring map, V is additive, F_s V_s = s
    assert w_frobenius(s, x * y) == w_frobenius(s, x) * w_frobenius(s, y)
    assert w_frobenius(s, x + y) == w_frobenius(s, x) + w_frobenius(s, y)
    u2 = data.draw(witt_vectors(Ss, 4))
    assert w_verschiebung(s, u + u2, S) == w_verschiebung(s, u, S) + w_verschiebung(s, u2, S)
    assert w_frobenius(s, w_verschiebung(s, u, S)) == WittVector.from_int(Ss, s) * u
    # F_s V_t = d V_{t/d} F_{s/d}
    d = math.gcd(s, t)
    St = S.quotient(t)
    z = data.draw(witt_vectors(St, 4))
    lhs = w_frobenius(s, w_verschiebung(t, z, S))
    target = lhs.S
    mid = w_frobenius(s // d, z)
    rhs = WittVector.from_int(target, d) * w_verschiebung(t // d, w_restrict(mid, target.quotient(t // d)), target)
    assert lhs == rhs


@pytest.mark.parametrize("r", R_VALUES)
def test_v_one_products(r):
    S = D(r)
    for s in S:
        for t in S:
            L = math.lcm(s, t)
            if L not in S:
                continue
            assert v_one(s, S) * v_one(t, S) == WittVector.from_int(S, math.gcd(s, t)) * v_one(L, S)


def test_v_one_worked_example():
    S = D(12)
    assert v_one(2, S) * v_one(3, S) == v_one(6, S)
    assert v_one(1, S) == WittVector.one(S)
    with pytest.raises(IndexNotInTruncation):
        v_one(5, S)


# --- text ---------------------------------------------------------------

def test_parse_and_print():
    S = D(4)
    x = parse_witt("1:2,4:-3", S)
    assert x == W(S, 2, 0, -3)
    assert str(x) == "1:2,2:0,4:-3"
    assert parse_witt(str(x), S) == x
    with pytest.raises(IndexNotInTruncation):
        parse_witt("3:1", S)
    with pytest.raises(ParseError):
        parse_witt("1=2", S)
