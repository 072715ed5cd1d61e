import pytest

from whilecc.signature import (Sort, FuncSymbol, ClosedTerm, BOOL,
                               NAT, REAL, SignatureError, make_signature,
                               standardise, n_standardise, star_signature,
                               default_term, validate_signature)


def ring_of_reals():
    sig = make_signature([REAL], defaults={"real": "zero_real"})
    sig.add_symbol(FuncSymbol("zero_real", (), REAL))
    sig.add_symbol(FuncSymbol("one_real", (), REAL))
    sig.add_symbol(FuncSymbol("add", (REAL, REAL), REAL))
    sig.add_symbol(FuncSymbol("mul", (REAL, REAL), REAL))
    sig.add_symbol(FuncSymbol("neg", (REAL,), REAL))
    return sig


def test_standardise_ring_gets_conditional_and_comparisons():
    sig = standardise(ring_of_reals(), eq_sorts={"real": "partial"},
                      order_sorts={"real": "partial"})
    assert sig.standard
    for name in ("true", "false", "and", "or", "not", "if_real",
                 "eq_real", "less_real"):
        assert name in sig.symbols
    assert sig.symbols["eq_real"].partial
    assert sig.symbols["if_real"].conditional
    assert validate_signature(sig) == []
    # original symbols preserved
    for name in ("zero_real", "add", "mul", "neg"):
        assert name in sig.symbols


def test_standardise_twice_rejected():
    sig = standardise(ring_of_reals())
    with pytest.raises(SignatureError):
        standardise(sig)


def test_standardise_minimal_user_signature():
    s = Sort("s", "user")
    sig = make_signature([s], [FuncSymbol("c", (), s)], defaults={"s": "c"})
    out = standardise(sig)
    assert set(out.symbols) == {"c", "true", "false", "and", "or", "not",
                                "if_s", "if_bool"}
    assert validate_signature(out) == []


def test_reserved_name_collision():
    s = Sort("s", "user")
    sig = make_signature([s], [FuncSymbol("true", (), s)], defaults={"s": "true"})
    with pytest.raises(SignatureError):
        standardise(sig)


def test_n_standardise():
    sig = n_standardise(standardise(ring_of_reals()))
    assert sig.n_standard
    for name in ("zero_nat", "succ", "eq_nat", "less_nat", "if_nat"):
        assert name in sig.symbols
    with pytest.raises(SignatureError):
        n_standardise(sig)
    assert validate_signature(sig) == []


def test_n_standardise_booleans_two_sorts():
    sig = n_standardise(standardise(make_signature()))
    assert set(sig.sorts) == {"bool", "nat"}


def test_star_adds_real_star_and_array_ops():
    sig = star_signature(n_standardise(standardise(ring_of_reals())))
    assert sig.starred
    assert "real*" in sig.sorts
    # the starred sorts cover every base sort, bool and nat included
    assert "bool*" in sig.sorts and "nat*" in sig.sorts
    with pytest.raises(SignatureError):
        star_signature(sig)


def test_star_generated_symbol_types():
    # derived check: enumerate every generated array symbol and check types
    sig = star_signature(n_standardise(standardise(ring_of_reals())))
    base = [s for s in ("real", "bool", "nat")]
    for name in base:
        s = sig.sort(name)
        sx = sig.sort(name + "*")
        assert sig.symbols[f"Lgth_{name}"].arg_sorts == (sx,)
        assert sig.symbols[f"Lgth_{name}"].result_sort == NAT
        assert sig.symbols[f"Ap_{name}"].arg_sorts == (sx, NAT)
        assert sig.symbols[f"Ap_{name}"].result_sort == s
        assert sig.symbols[f"Update_{name}"].arg_sorts == (sx, NAT, s)
        assert sig.symbols[f"Update_{name}"].result_sort == sx
        assert sig.symbols[f"Newlength_{name}"].arg_sorts == (sx, NAT)
        assert sig.symbols[f"Null_{name}"].arg_sorts == ()
        assert sig.symbols[f"Null_{name}"].result_sort == sx


def test_no_double_starring_in_sorts():
    with pytest.raises(SignatureError):
        Sort("x**", "array", elem=Sort("x*", "array", elem=REAL))


def test_default_terms():
    sig = star_signature(n_standardise(standardise(ring_of_reals())))
    assert default_term(sig, BOOL) == ClosedTerm("false")
    assert default_term(sig, NAT) == ClosedTerm("zero_nat")
    assert default_term(sig, sig.sort("real*")) == ClosedTerm("Null_real")
    with pytest.raises(SignatureError):
        default_term(sig, Sort("ghost", "user"))


def test_every_sort_has_default_in_builtins():
    sig = star_signature(n_standardise(standardise(ring_of_reals())))
    for s in sig.sorts.values():
        assert default_term(sig, s) is not None
