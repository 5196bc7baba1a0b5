import pytest
from hypothesis import given, strategies as st

from toeplitztame.errors import ScaleMismatch, ValidationError
from toeplitztame.odometer import (OdometerHead, OdometerPoint, Scale,
                                   add_heads, add_integer,
                                   common_head_length, head_index,
                                   integer_head, level_product, truncate)

Z2 = Scale.constant(2)
Z4 = Scale.constant(4)
Z16 = Scale.constant(16)
P4 = Scale.powers(4)


def mixed_radix_oracle(t, scale, depth):
    # independent expansion: repeatedly peel the least significant digit
    digits = []
    for n in range(1, depth + 1):
        m = scale.modulus(n)
        digits.append(t % m)
        t //= m
    return tuple(digits)


def test_add_integer_examples():
    assert add_integer(OdometerHead(Z2, (1, 0, 0)), 1).digits == (0, 1, 0)
    assert add_integer(OdometerHead(P4, (3, 3)), 1).digits == (0, 4)
    assert add_integer(OdometerHead(Z4, (0, 0, 0)), -1).digits == (3, 3, 3)


def test_integer_head_examples():
    assert integer_head(5, Z2, 4).digits == (1, 0, 1, 0)
    assert integer_head(2 ** 3, Z2, 5).digits == (0, 0, 0, 1, 0)
    # frozen from the mixed-radix oracle: 76 = 12 + 4*16 + 0*256
    assert mixed_radix_oracle(76, Z16, 3) == (12, 4, 0)
    assert integer_head(76, Z16, 3).digits == (12, 4, 0)


def test_common_head_length_examples():
    a = OdometerHead(P4, (1, 1, 9))
    b = OdometerHead(P4, (1, 1, 1))
    assert common_head_length(a, b) == (2, False)
    c = OdometerHead(Z2, (1, 0, 1, 1))
    assert common_head_length(c, c) == (4, True)
    assert common_head_length(OdometerHead(Z4, (2,)), OdometerHead(Z4, (1,)))[0] == 0


def test_common_head_length_scale_mismatch():
    with pytest.raises(ScaleMismatch):
        common_head_length(OdometerHead(Z2, (1,)), OdometerHead(Z4, (1,)))


def test_head_index_examples():
    # 1 + 10*16 + 1*256 + 10*4096 = 41377, the depth-4 shift offset used in
    # the worked fibre-window check
    h = OdometerHead(Z16, (1, 10, 1, 10))
    assert head_index(h) == 1 + 160 + 256 + 40960 == 41377
    assert head_index(OdometerHead(Z16, (0, 0, 0))) == 0
    assert head_index(OdometerHead(P4, (1,))) == 1


def test_digit_bounds_enforced():
    with pytest.raises(ValidationError):
        OdometerHead(Z4, (4,))
    with pytest.raises(ValidationError):
        OdometerHead(P4, (1, 16))
    OdometerHead(P4, (1, 15))


def test_point_tail_validation():
    head = OdometerHead(P4, (1, 1))
    OdometerPoint(head, 9)  # 9 < 4^3
    with pytest.raises(ValidationError):
        OdometerPoint(OdometerHead(Z4, (1,)), 5)
    p = OdometerPoint(head, 9)
    assert p.head_at(5).digits == (1, 1, 9, 9, 9)
    assert p.digit(1) == 1 and p.digit(7) == 9


def test_explicit_scale():
    s = Scale.explicit([2, 3], Scale.constant(5))
    assert [s.modulus(n) for n in (1, 2, 3, 4)] == [2, 3, 5, 5]
    assert Scale.from_json(s.to_json()) == s
    assert Scale.from_json(Z16.to_json()) == Z16
    assert Scale.from_json(P4.to_json()) == P4


scales = st.sampled_from([Z2, Z16, P4])


@st.composite
def heads(draw, max_depth=8):
    scale = draw(scales)
    depth = draw(st.integers(1, max_depth))
    digits = tuple(draw(st.integers(0, scale.modulus(n) - 1))
                   for n in range(1, depth + 1))
    return OdometerHead(scale, digits)


@given(heads(), st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6))
def test_add_integer_associates_with_z(h, s, t):
    assert add_integer(add_integer(h, s), t) == add_integer(h, s + t)


@given(heads())
def test_add_integer_identity(h):
    assert add_integer(h, 0) == h


@given(heads(), st.integers(-10 ** 6, 10 ** 6), st.integers(1, 8))
def test_prefix_determinism(h, t, n):
    n = min(n, h.depth)
    assert truncate(add_integer(h, t), n) == add_integer(truncate(h, n), t)


@given(scales, st.integers(0, 10 ** 9), st.integers(1, 8))
def test_head_index_roundtrip(scale, t, depth):
    t %= level_product(scale, depth)
    assert head_index(integer_head(t, scale, depth)) == t


@given(heads(), heads())
def test_add_heads_matches_value_arithmetic(a, b):
    if a.scale != b.scale:
        return
    depth = min(a.depth, b.depth)
    m = level_product(a.scale, depth)
    s = add_heads(a, b)
    assert s.depth == depth
    assert head_index(s) == (head_index(truncate(a, depth))
                             + head_index(truncate(b, depth))) % m
