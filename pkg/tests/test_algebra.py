"""Built-in algebras, verdicts, fuel behavior, and metrics."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from whilecc.algebra import (apply, get_algebra, rat_value, interval_value,
                             product_metric, AlgebraError,
                             BoolV, NatV, RealV, ArrV, TT, FF)
from whilecc.codes import Fuel, ConstCode, sqrt_code, e_code, add_codes
from whilecc.signature import ProductType, REAL, NAT


F = lambda k=100000: Fuel(k)


def test_booleans(B):
    assert apply(B, "and", (TT, FF), F()).value.b is False
    inner = apply(B, "not", (TT,), F()).value
    assert apply(B, "not", (inner,), F()).value.b is True
    assert apply(B, "or", (FF, FF), F()).value.b is False


def test_naturals(N):
    assert apply(N, "eq_nat", (NatV(3), NatV(3)), F()).value.b
    assert apply(N, "less_nat", (NatV(2), NatV(7)), F()).value.b
    assert apply(N, "if_nat", (TT, NatV(4), NatV(9)), F()).value.n == 4
    assert apply(N, "succ", (NatV(41),), F()).value.n == 42


def test_total_algebras_never_fail(B, N):
    # even at a dead budget the discrete total operations complete
    assert apply(B, "and", (TT, TT), Fuel(0)).converged
    assert apply(N, "succ", (NatV(0),), Fuel(0)).converged


def test_real_field_and_partial_comparisons(RN):
    v = apply(RN, "add", (rat_value(Fraction(1, 2)), rat_value(Fraction(1, 3))), F())
    assert v.value.code.value == Fraction(5, 6)
    assert apply(RN, "less_real", (rat_value(1), rat_value(2)), F()).value.b
    for fuel in (1, 10, 1000):
        assert apply(RN, "eq_real", (rat_value(1), rat_value(1)), Fuel(fuel)).tag == "fuel"
    assert apply(RN, "inv", (rat_value(0),), F()).tag == "div"
    assert apply(RN, "inv", (rat_value(2),), F()).value.code.value == Fraction(1, 2)


def test_comparison_on_same_code_exhausts(RN):
    s2 = sqrt_code(2)
    assert apply(RN, "less_real", (RealV(s2), RealV(s2)), Fuel(64)).tag == "fuel"


def test_comparison_against_64_digit_oracle(RN):
    # whenever less_real converges the answer must agree with a deep
    # interval refinement (a 64-digit oracle is ~214 bits)
    codes = [ConstCode(Fraction(7, 5)), sqrt_code(2), e_code(),
             add_codes(sqrt_code(2), ConstCode(Fraction(-1, 64)))]
    for i, x in enumerate(codes):
        for j, y in enumerate(codes):
            verdict = apply(RN, "less_real", (RealV(x), RealV(y)), Fuel(400))
            if verdict.tag != "ok":
                continue
            xlo, xhi = x.interval(220)
            ylo, yhi = y.interval(220)
            if verdict.value.b:
                assert xlo < yhi, (i, j)
            else:
                assert ylo < xhi, (i, j)


def test_fuel_monotonicity_of_apply(RN):
    # Converged / ProvenDivergent verdicts never change with more fuel
    random.seed(7)
    args_pool = [rat_value(Fraction(random.randrange(-9, 10),
                                    random.randrange(1, 9))) for _ in range(12)]
    ops = ["add", "mul", "neg", "inv", "eq_real", "less_real"]
    for op in ops:
        sym = RN.signature.symbol(op)
        for _ in range(40):
            args = tuple(random.choice(args_pool) for _ in range(sym.arity))
            small = apply(RN, op, args, Fuel(random.randrange(1, 8)))
            if small.tag in ("ok", "div"):
                big = apply(RN, op, args, Fuel(10_000))
                assert big.tag == small.tag
                if small.tag == "ok" and isinstance(small.value, (BoolV,)):
                    assert big.value.b == small.value.b


def test_metric_axioms_sampled(RN):
    random.seed(3)
    real = RN.signature.sort("real")
    pts = [rat_value(Fraction(random.randrange(-40, 40), random.randrange(1, 12)))
           for _ in range(8)]
    n = 10
    slack1 = Fraction(2, 1 << n)
    for x in pts:
        assert RN.metric(real, x, x, n) <= slack1
        for y in pts:
            dxy = RN.metric(real, x, y, n)
            dyx = RN.metric(real, y, x, n)
            assert abs(dxy - dyx) <= slack1
            for z in pts:
                dxz = RN.metric(real, x, z, n)
                dyz = RN.metric(real, y, z, n)
                assert dxz <= dxy + dyz + 2 * slack1


def test_product_metric(RN):
    u = ProductType((REAL, REAL))
    d = product_metric(RN, u, (rat_value(0), rat_value(0)),
                       (rat_value(3), rat_value(4)), 20)
    assert abs(d - 4) <= Fraction(1, 1 << 19)
    same = product_metric(RN, u, (rat_value(1), rat_value(2)),
                          (rat_value(1), rat_value(2)), 10)
    assert same <= Fraction(1, 1 << 10)
    # mixed tuple uses the discrete metric on nat
    u2 = ProductType((REAL, NAT))
    d2 = product_metric(RN, u2, (rat_value(0), NatV(1)),
                        (rat_value(0), NatV(2)), 10)
    assert d2 == 1


def test_star_algebra_array_ops(RNs):
    f = F()
    arr = apply(RNs, "Null_real", (), f).value
    assert apply(RNs, "Lgth_real", (arr,), f).value.n == 0
    arr = apply(RNs, "Newlength_real", (arr, NatV(3)), f).value
    arr = apply(RNs, "Update_real", (arr, NatV(1), rat_value(7)), f).value
    assert apply(RNs, "Ap_real", (arr, NatV(1)), f).value.code.value == 7
    # out of range reads are total and give the sort default
    assert apply(RNs, "Ap_real", (arr, NatV(9)), f).value.code.value == 0
    # out of range updates leave the array unchanged
    same = apply(RNs, "Update_real", (arr, NatV(9), rat_value(1)), f).value
    assert [v.code.value for v in same.items] == [v.code.value for v in arr.items]


def test_array_metric_length_mismatch_is_one(RNs):
    real = RNs.signature.sort("real")
    sx = RNs.signature.sort("real*")
    a = ArrV(real, (rat_value(1), rat_value(2)))
    b = ArrV(real, (rat_value(1), rat_value(2), rat_value(3)))
    assert RNs.metric(sx, a, b, 8) == 1
    c = ArrV(real, (rat_value(1), rat_value(Fraction(9, 4))))
    d = RNs.metric(sx, a, c, 20)
    assert abs(d - Fraction(1, 4)) <= Fraction(1, 1 << 19)


def test_interval_algebra(IN):
    f = F()
    half = interval_value(ConstCode(Fraction(1, 2)))
    out = apply(IN, "i_I", (half,), f)
    assert out.value.code.value == Fraction(1, 2)
    with pytest.raises(AlgebraError):
        interval_value(ConstCode(2))
    third = interval_value(sqrt_code(Fraction(1, 9)))  # a code for 1/3
    assert apply(IN, "i_I", (third,), f).converged
    # boundary values pass with the documented slack
    interval_value(ConstCode(0))
    interval_value(ConstCode(1))


def test_apply_argument_errors(RN):
    from whilecc.signature import SignatureError
    with pytest.raises(AlgebraError):
        apply(RN, "add", (rat_value(1),), F())
    with pytest.raises(AlgebraError):
        apply(RN, "add", (rat_value(1), NatV(2)), F())
    with pytest.raises(SignatureError):
        apply(RN, "no_such_symbol", (), F())


def test_get_algebra_names():
    for name in ("B", "N", "R", "RN", "IN", "RN*", "N*", "IN*"):
        alg = get_algebra(name)
        assert alg.name == name
    with pytest.raises(AlgebraError):
        get_algebra("ZFC")


@given(st.fractions(max_denominator=64), st.fractions(max_denominator=64))
@settings(max_examples=80)
def test_real_metric_is_exact_on_rationals(q1, q2):
    RN = get_algebra("RN")
    real = RN.signature.sort("real")
    assert RN.metric(real, rat_value(q1), rat_value(q2), 12) == abs(q1 - q2)
