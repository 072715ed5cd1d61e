"""Pairing, rational codecs, and fast Cauchy code machinery."""

from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from whilecc.codes import (pair, unpair, rat_decode, rat_encode,
                           prog_rat_decode, ConstCode, RuleCode, SumCode,
                           MulCode, DiagonalCode, Fuel, CodeRegistry,
                           FastCauchyError, check_fast_cauchy_prefix,
                           add_codes, mul_codes, inv_code, abs_diff_code,
                           sqrt_code, e_code, separation_witness)

HALF = Fraction(1, 2)


def sqrt2_oracle_enclosure(bits=80):
    # independent oracle: integer square roots at scaled precision
    lo = Fraction(isqrt(2 << (2 * bits)), 1 << bits)
    return lo, lo + Fraction(1, 1 << bits)


def test_pair_unpair_bijection_sampled():
    for n in range(0, 1_000_001, 997):  # arithmetic slice of 0..10^6
        a, b = unpair(n)
        assert pair(a, b) == n
    for a in range(60):
        for b in range(60):
            assert unpair(pair(a, b)) == (a, b)


@given(st.integers(0, 10**6))
@settings(max_examples=200)
def test_pair_unpair_property(n):
    a, b = unpair(n)
    assert pair(a, b) == n


def test_rat_decode_zero_is_zero():
    assert rat_decode(0) == Fraction(0, 1)


def test_rat_codec_roundtrip_samples():
    qs = [Fraction(p, q) for p in range(-9, 10) for q in range(1, 8)]
    for r in qs:
        assert rat_decode(rat_encode(r)) == r


@given(st.fractions(max_denominator=1000))
@settings(max_examples=200)
def test_rat_codec_roundtrip_property(r):
    assert rat_decode(rat_encode(r)) == r


def test_prog_rat_surjective_onto_samples():
    # odd side carries the canonical enumeration
    for r in (Fraction(3, 7), Fraction(-355, 113), Fraction(0)):
        assert prog_rat_decode(2 * rat_encode(r) + 1) == r
    # even side: dyadics appear with small indices
    seen = {prog_rat_decode(k) for k in range(0, 200, 2)}
    assert Fraction(1, 2) in seen and Fraction(-3) in seen


def test_const_code_fast_cauchy_trivially():
    c = ConstCode(Fraction(7, 2))
    assert check_fast_cauchy_prefix(c) == []
    for n in (0, 5, 13):
        assert c.approx(n) == Fraction(7, 2)


def test_sqrt2_code_against_interval_oracle():
    s2 = sqrt_code(2)
    lo, hi = sqrt2_oracle_enclosure()
    v = s2.approx(10)
    assert abs(v - lo) < Fraction(1, 1 << 9) and abs(v - hi) < Fraction(1, 1 << 9)
    assert check_fast_cauchy_prefix(s2) == []


def test_e_code_against_taylor_oracle():
    # independent oracle: direct factorial sums with an explicit tail bound
    def oracle(bits):
        s, t, i = Fraction(1), Fraction(1), 0
        while t * 2 > Fraction(1, 1 << bits):
            i += 1
            t /= i
            s += t
        return s, s + 2 * t

    e = e_code()
    lo, hi = oracle(60)
    for n in (1, 4, 8, 12):
        v = e.approx(n)
        assert lo - Fraction(1, 1 << n) < v < hi + Fraction(1, 1 << n)
    assert check_fast_cauchy_prefix(e) == []


def test_arithmetic_codes_are_fast_cauchy_and_correct():
    s2 = sqrt_code(2)
    e = e_code()
    cases = {
        "sum": (add_codes(s2, e), None),
        "mul": (mul_codes(s2, s2), Fraction(2)),
        "absdiff": (abs_diff_code(s2, s2), Fraction(0)),
    }
    for name, (code, limit) in cases.items():
        assert check_fast_cauchy_prefix(code) == [], name
        if limit is not None:
            assert abs(code.approx(16) - limit) < Fraction(1, 1 << 16), name


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
@settings(max_examples=100)
def test_const_arithmetic_exact(a, b):
    assert add_codes(ConstCode(a), ConstCode(b)).value == a + b
    assert mul_codes(ConstCode(a), ConstCode(b)).value == a * b


@given(st.fractions(max_denominator=10**6), st.fractions(max_denominator=10**6))
@settings(max_examples=200)
def test_fast_rational_helpers_agree_with_operators(a, b):
    from whilecc.codes import rat_add, rat_mul, rat_inv
    assert rat_add(a, b) == a + b
    assert rat_mul(a, b) == a * b
    if a != 0:
        assert rat_inv(a) == 1 / a
    # results are normalized (lowest terms, positive denominator)
    r = rat_add(a, b)
    assert r.denominator > 0 and Fraction(r.numerator, r.denominator) == r


def test_inverse_code():
    inv, status = inv_code(ConstCode(Fraction(3, 4)), Fuel(100))
    assert status == "ok" and inv.value == Fraction(4, 3)
    none, status = inv_code(ConstCode(0), Fuel(100))
    assert status == "zero" and none is None
    s2 = sqrt_code(2)
    inv, status = inv_code(s2, Fuel(1000))
    assert status == "ok"
    v = inv.approx(20)
    assert abs(v * v - HALF) < Fraction(1, 1 << 17)
    assert check_fast_cauchy_prefix(inv) == []


def test_separation_witness_runs_out_of_fuel_near_zero():
    zeroish = SumCode(sqrt_code(2), MulCode(sqrt_code(2), ConstCode(-1)))
    assert separation_witness(zeroish, Fuel(60)) is None


def test_diagonal_code_constant_levels():
    q = Fraction(5, 9)
    d = DiagonalCode(lambda n: ConstCode(q))
    for n in (0, 3, 9):
        assert d.approx(n) == q


def test_diagonal_code_taylor_levels():
    # level n: the factorial series truncated so the tail is below 2^-n
    def level(n):
        s, t = Fraction(1), Fraction(1)
        for i in range(1, n + 3):
            t /= i
            s += t
        return ConstCode(s)

    d = DiagonalCode(level)
    e = e_code()
    for n in (2, 6, 10):
        assert abs(d.approx(n) - e.approx(n + 4)) < Fraction(1, 1 << (n - 1))
    assert check_fast_cauchy_prefix(d) == []


def test_diagonal_code_sqrt_levels():
    s2 = sqrt_code(2)
    d = DiagonalCode(lambda n: ConstCode(s2.approx(n)))
    lo, hi = sqrt2_oracle_enclosure()
    for n in (2, 8):
        v = d.approx(n)
        assert lo - Fraction(1, 1 << (n - 1)) < v < hi + Fraction(1, 1 << (n - 1))


def test_registry_validation_flags_non_cauchy():
    reg = CodeRegistry()
    bad = RuleCode(lambda n: Fraction(n), name="runaway")
    with pytest.raises(FastCauchyError):
        reg.register(bad, validate=True)
    ok = reg.register(ConstCode(1), validate=True)
    assert reg.code(ok).value == 1


def test_registry_serialization():
    reg = CodeRegistry()
    c = reg.parse_code("const:-7/3")
    assert c.value == Fraction(-7, 3)
    assert reg.format_code(c) == "const:-7/3"
    reg.add_program("taylor", lambda arg, n, fuel:
                    sum(Fraction(1, _fact(i)) for i in range(n + 3)))
    pc = reg.parse_code("prog:taylor:0")
    assert abs(pc.approx(8) - e_code().approx(12)) < Fraction(1, 1 << 7)


def _fact(i):
    out = 1
    for j in range(2, i + 1):
        out *= j
    return out


def test_named_codes():
    reg = CodeRegistry()
    s2 = reg.code(reg.named("sqrt2"))
    assert abs(s2.approx(12) ** 2 - 2) < Fraction(1, 1 << 9)
    assert reg.named("sqrt2") == reg.named("sqrt2")


def test_fuel_budgets():
    f = Fuel(5)
    assert all(f.take() for _ in range(5))
    assert not f.take() and f.dead
    parent = Fuel(10)
    child = parent.spawn(3)
    assert child.take(3)
    assert parent.remaining == 7
    assert not child.take()
    assert parent.remaining == 7
