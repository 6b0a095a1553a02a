import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxsub.perms import Permutation, format_cycles, parse_cycles


def test_identity_roundtrip():
    p = Permutation.identity(5)
    assert p.is_identity()
    assert format_cycles(p) == "()"
    assert parse_cycles("()", degree=5) == p


def test_parse_basic():
    p = parse_cycles("(1,2)(3,4)")
    assert p.degree == 4
    assert p(0) == 1 and p(1) == 0 and p(2) == 3 and p(3) == 2


def test_parse_rejects_garbage():
    for bad in ["", "(1,2", "1,2", "(0,1)", "(1,1)", "(1,2)x"]:
        with pytest.raises(ValueError):
            parse_cycles(bad)


def test_compose_convention():
    # left-to-right: (p * q)(x) = q(p(x))
    p = parse_cycles("(1,2)", degree=3)
    q = parse_cycles("(2,3)", degree=3)
    r = p * q
    assert r(0) == 2  # 0 ->p 1 ->q 2


def test_order():
    assert parse_cycles("(1,2,3)(4,5)", degree=5).order() == 6
    assert Permutation.identity(3).order() == 1


perm_strategy = st.permutations(list(range(6))).map(
    lambda xs: Permutation(np.array(xs)))


@settings(max_examples=60, derandomize=True)
@given(perm_strategy, perm_strategy, perm_strategy)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, derandomize=True)
@given(perm_strategy)
def test_inverse(p):
    assert (p * p.inv()).is_identity()
    assert (p.inv() * p).is_identity()


@settings(max_examples=40, derandomize=True)
@given(perm_strategy)
def test_cycle_text_roundtrip(p):
    assert parse_cycles(format_cycles(p), degree=6) == p


@settings(max_examples=40, derandomize=True)
@given(perm_strategy, st.integers(min_value=-6, max_value=8))
def test_power(p, n):
    expected = Permutation.identity(6)
    q = p if n >= 0 else p.inv()
    for _ in range(abs(n)):
        expected = expected * q
    assert p ** n == expected
