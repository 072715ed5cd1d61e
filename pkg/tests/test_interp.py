"""Operational semantics: term/statement/procedure evaluation, trees,
strategies, and choose elimination."""

from fractions import Fraction

import pytest

from whilecc.algebra import get_algebra, rat_value, NatV, RealV
from whilecc.codes import Fuel, sqrt_code
from whilecc.interp import (Enumerate, Oracle, Dovetail, State, eval_term,
                            eval_atomic, first, rest, comp_step,
                            comp_tree_stage, tree_is_prefix, eval_stmt,
                            eval_proc, is_deterministic_on, choose_eliminate,
                            ChooseEliminationError)
from whilecc.lang import parse
from whilecc.lang.ast import (Var, Lit, App, Choose, Skip, Div, Assign, Seq,
                              If, While)
from whilecc.programs import load
from whilecc.signature import NAT


RN = get_algebra("RN")
N = get_algebra("N")


def term(src, algebra="RN", frame="", assign_to=("b", "bool")):
    """Parse a term by wrapping it in a one-assignment procedure."""
    name, sort = assign_to
    decl = f"in {frame}" if frame else ""
    p = parse(f"algebra {algebra}\nfunc t {decl} out {name}: {sort} "
              f"begin {name} := {src} end")
    return p.body.s2.rhs[0]


def state(**kw):
    return State(dict(kw))


# ---------------------------------------------------------------------------
# term semantics


def test_choose_enumerate_eq_nat():
    # brute force over 0..10 against the choose clause
    t = Choose("z", App(N.signature.symbol("eq_nat"), (Var("z", NAT), Lit(3, NAT))), NAT)
    expected = {n for n in range(11) if n == 3}
    out = eval_term(t, state(), N, Enumerate(10), Fuel(10_000))
    assert {v.n for v in out.values} == expected
    assert not out.maybe_divergent  # clean witness refutes divergence


def test_choose_false_guard_diverges():
    t = Choose("z", App(N.signature.symbol("false"), ()), NAT)
    for strat in (Enumerate(10), Dovetail()):
        out = eval_term(t, state(), N, strat, Fuel(500))
        assert out.values == [] and out.maybe_divergent


def test_if_term():
    t = term("if true then 1 else 2 fi", assign_to=("b", "nat"))
    out = eval_term(t, state(), RN, Enumerate(4), Fuel(100))
    assert [v.n for v in out.values] == [1]


def test_term_guard_divergence_propagates():
    t = term("if x = 0 then 1 else 2 fi", frame="x: real", assign_to=("b", "nat"))
    out = eval_term(t, state(x=rat_value(0)), RN, Enumerate(4), Fuel(50))
    assert out.maybe_divergent  # eq_real(0,0) never converges
    out2 = eval_term(t, state(x=rat_value(1)), RN, Enumerate(4), Fuel(1000))
    assert [v.n for v in out2.values] == [2] and not out2.maybe_divergent


def test_strict_application_propagates_bottom():
    # or(ff, eq_real(0,0)-not) has no value: strict argument evaluation
    t = term("false or (x <> 0)", frame="x: real")
    out = eval_term(t, state(x=rat_value(0)), RN, Enumerate(4), Fuel(200))
    assert out.values == [] and out.maybe_divergent


def test_short_circuit_conditional_recovers():
    t = term("false andthen (x <> 0)", frame="x: real")
    out = eval_term(t, state(x=rat_value(0)), RN, Enumerate(4), Fuel(200))
    assert [v.b for v in out.values] == [False] and not out.maybe_divergent


# ---------------------------------------------------------------------------
# atomic statements, First / Rest / CompStep


def test_eval_atomic_div():
    out = eval_atomic(Div(), state(), RN, Enumerate(4), Fuel(100))
    assert out.values == [] and out.proven_divergent and not out.truncated


def test_eval_atomic_assignment_and_swap():
    t = term("1 + 1", assign_to=("b", "real"))
    out = eval_atomic(Assign(("x",), (t,)), state(x=rat_value(0)), RN,
                      Enumerate(4), Fuel(100))
    assert out.values[0].get("x").code.value == 2
    swap = Assign(("x", "y"), (Var("y", NAT), Var("x", NAT)))
    out = eval_atomic(swap, state(x=NatV(1), y=NatV(2)), N, Enumerate(4), Fuel(100))
    sp = out.values[0]
    assert sp.get("x").n == 2 and sp.get("y").n == 1


def test_first_cases():
    a = Assign(("x",), (Lit(1, NAT),))
    assert first(Seq(a, Skip())) == a
    w = While(App(N.signature.symbol("true"), ()), Skip())
    assert isinstance(first(w), Skip)
    assert isinstance(first(Skip()), Skip)


def test_rest_cases():
    tt_guard = App(N.signature.symbol("true"), ())
    w = While(tt_guard, Skip())
    rr = rest(w, state(), N, Enumerate(4), Fuel(100))
    assert rr.stmts == [Seq(Skip(), w)] and not rr.has_div
    rr = rest(Skip(), state(), N, Enumerate(4), Fuel(100))
    assert rr.stmts == [Skip()]
    # guard that only diverges contributes div (rest of an if)
    diverging = term("x < x", frame="x: real")
    s = If(diverging, Skip(), Div())
    rr = rest(s, state(x=RealV(sqrt_code(2))), RN, Enumerate(4), Fuel(64))
    assert rr.stmts == [] and rr.truncated  # undecided at this budget


def test_comp_step():
    a = Assign(("x",), (Lit(0, NAT),))
    loop = While(App(N.signature.symbol("true"), ()), Skip())
    out = comp_step(Seq(a, loop), state(x=NatV(9)), N, Enumerate(4), Fuel(100))
    assert out.values[0].get("x").n == 0
    out = comp_step(Seq(Div(), Skip()), state(), N, Enumerate(4), Fuel(100))
    assert out.proven_divergent
    # while-head steps are skips: the state is unchanged
    out = comp_step(loop, state(x=NatV(5)), N, Enumerate(4), Fuel(100))
    assert out.values[0].get("x").n == 5


# ---------------------------------------------------------------------------
# computation trees


def test_tree_skip_single_leaf():
    t = comp_tree_stage(Skip(), state(), 1, N)
    assert len(t.children) == 1 and not t.children[0].children


def test_tree_while_true_single_path():
    loop = While(App(N.signature.symbol("true"), ()), Skip())
    for n in (1, 3, 6):
        t = comp_tree_stage(loop, state(), n, N)
        depth = 0
        node = t
        while node.children:
            assert len(node.children) == 1
            node = node.children[0]
            depth += 1
        assert depth == n and node.frontier  # no leaves, only the cut


def test_tree_choose_branches():
    src = term("choose z : z < 2", assign_to=("k", "nat"), algebra="RN")
    s = Assign(("k",), (src,))
    t = comp_tree_stage(s, state(k=NatV(9)), 2, RN, Enumerate(5))
    leaf_vals = {leaf.state.get("k").n for leaf in t.leaves() if leaf.state}
    assert leaf_vals == {0, 1}


def test_stage_prefix_monotone():
    p, alg = load("pivot3")
    sigma = State({"x1": rat_value(1), "x2": rat_value(0), "x3": rat_value(1),
                   "i": NatV(0)})
    for n in range(0, 4):
        t1 = comp_tree_stage(p.body, sigma, n, alg, Enumerate(6))
        t2 = comp_tree_stage(p.body, sigma, n + 1, alg, Enumerate(6))
        assert tree_is_prefix(t1, t2), n


# ---------------------------------------------------------------------------
# statement and procedure semantics


def test_eval_stmt_sequence():
    p = parse("algebra RN\nfunc f out x: real begin x := 1; x := x + 1 end")
    out = eval_stmt(p.body, state(x=rat_value(9)), RN, Enumerate(4), Fuel(100))
    assert [s.get("x").code.value for s in out.values] == [2]
    assert not out.maybe_divergent


def test_eval_stmt_while_true_divergent_frontier():
    loop = While(App(N.signature.symbol("true"), ()), Skip())
    for strat in (Enumerate(4), Dovetail(), Oracle(1)):
        out = eval_stmt(loop, state(), N, strat, Fuel(200))
        assert out.values == [] and out.maybe_divergent
        assert out.truncated  # frontier proxy, not a certified infinite path


def test_eval_stmt_guard_converges_tt():
    p = parse("algebra RN\nfunc f out x: real begin "
              "if 0 < 1 then x := 1 else div fi end")
    out = eval_stmt(p.body, state(x=rat_value(0)), RN, Enumerate(4), Fuel(1000))
    assert [s.get("x").code.value for s in out.values] == [1]
    assert not out.maybe_divergent


def test_eval_proc_identity_and_arity():
    p = parse("algebra RN\nfunc f in a: real out b: real begin b := a end")
    out = eval_proc(p, (rat_value(Fraction(5, 3)),), RN, Dovetail(), Fuel(100))
    assert out.values[0].code.value == Fraction(5, 3)
    from whilecc.algebra import AlgebraError
    with pytest.raises(AlgebraError):
        eval_proc(p, (), RN, Dovetail(), Fuel(100))
    with pytest.raises(AlgebraError):
        eval_proc(p, (NatV(1),), RN, Dovetail(), Fuel(100))


def test_pivot_examples():
    p, alg = load("pivot3")

    def run(xs, strat=Enumerate(8)):
        return eval_proc(p, tuple(rat_value(x) for x in xs), alg, strat, Fuel(30_000))

    out = run((0, Fraction(7, 2), 0))
    assert [v.n for v in out.values] == [2] and not out.maybe_divergent
    out = run((1, 1, 0))
    assert {v.n for v in out.values} == {1, 2}
    out = run((0, 0, 0))
    assert out.values == [] and out.maybe_divergent


def test_initialisation_independence():
    # Remark-style check: junk initial values for out/aux do not matter
    p, alg = load("exp_approx")
    args = (NatV(2), rat_value(Fraction(1, 2)))
    clean = eval_proc(p, args, alg, Dovetail(), Fuel(100_000))
    junk = {"s": rat_value(99), "y": rat_value(-7), "k": NatV(55),
            "bound": NatV(1), "i": NatV(9), "t": NatV(3), "j": NatV(2)}
    dirty = eval_proc(p, args, alg, Dovetail(), Fuel(100_000), junk=junk)
    assert clean.values[0].code.value == dirty.values[0].code.value


def test_fuel_monotone_leaf_sets():
    p, alg = load("pivot3")
    args = (rat_value(1), rat_value(0), rat_value(1))
    seen = []
    for steps in (5, 20, 100, 1000, 10_000):
        out = eval_proc(p, args, alg, Enumerate(6), Fuel(steps))
        seen.append({v.n for v in out.values})
    for small, big in zip(seen, seen[1:]):
        assert small <= big
    assert seen[-1] == {1, 3}


def test_strategy_soundness_on_stdlib_samples():
    from whilecc.codes import prog_rat_encode
    cases = [
        ("pivot3", [(rat_value(1), rat_value(1), rat_value(0)),
                    (rat_value(0), rat_value(2), rat_value(3))], 8),
        ("choose_near", [(rat_value(Fraction(355, 113)), NatV(1))], None),
    ]
    for name, samples, bound in cases:
        p, alg = load(name)
        for args in samples:
            det_values = []
            for seed in range(6):
                d = eval_proc(p, args, alg, Dovetail(seed), Fuel(3_000_000))
                det_values.extend(d.values)
                o = eval_proc(p, args, alg, Oracle(seed), Fuel(3_000_000))
                det_values.extend(o.values)
            # "sufficiently large bounds": wide enough to include the
            # witness index behind every deterministic-strategy output
            if bound is None:
                bound = 4 + max(prog_rat_encode(v.code.value)
                                for v in det_values)
            enum = eval_proc(p, args, alg, Enumerate(bound), Fuel(8_000_000))
            enum_keys = {repr(v) for v in enum.values}
            for v in det_values:
                assert repr(v) in enum_keys, (name, v)


def test_oracle_counter_advances_per_choose():
    calls = []

    def f(c):
        calls.append(c)
        return [1, 2][c % 2]

    p = parse("algebra RN\nfunc f out x: nat, y: nat begin "
              "x := choose z : z = 1; y := choose z : z = 2 end")
    out = eval_proc(p, (), RN, Oracle(f=f), Fuel(10_000))
    assert calls == [0, 1]
    assert [v.n for v in out.values[0]] == [1, 2]


def test_oracle_guard_failure_is_divergence():
    p = parse("algebra RN\nfunc f out x: nat begin x := choose z : z = 1 end")
    out = eval_proc(p, (), RN, Oracle(f=lambda c: 5), Fuel(10_000))
    assert out.values == [] and out.proven_divergent


def test_is_deterministic_on():
    p, alg = load("pivot3")
    rep = is_deterministic_on(p, [(rat_value(1), rat_value(1), rat_value(0))], alg)
    assert not rep[0]["deterministic"]
    q = parse("algebra RN\nfunc c out b: real begin b := 1 end")
    rep = is_deterministic_on(q, [()], RN)
    assert rep[0]["deterministic"]
    s, alg2 = load("scaled_sum")
    rep = is_deterministic_on(s, [(rat_value(2), rat_value(3)),
                                  (rat_value(-1), rat_value(4))], alg2,
                              strat=Enumerate(6))
    assert all(r["deterministic"] for r in rep)


# ---------------------------------------------------------------------------
# choose elimination


def test_choose_eliminate_simple_search():
    p = parse("algebra N\nfunc f out d: nat begin d := choose z : eq_nat(z, 5) end",)
    elim = choose_eliminate(p, N)
    out = eval_proc(elim, (), N, Dovetail(), Fuel(10_000))
    assert [v.n for v in out.values] == [5]
    orig = eval_proc(p, (), N, Dovetail(), Fuel(10_000))
    assert [v.n for v in orig.values] == [5]


def test_choose_eliminate_requires_total_algebra():
    p, alg = load("pivot3")
    with pytest.raises(ChooseEliminationError):
        choose_eliminate(p, alg)


def test_choose_eliminate_in_guard():
    src = """algebra N*
func f in n: nat out c: nat aux w: nat
begin
  w := n;
  while (choose z : eq_nat(z, w)) < 3 do c := succ(c); w := succ(w) od
end"""
    p = parse(src)
    alg = get_algebra("N*")
    elim = choose_eliminate(p, alg)
    for n0 in (0, 2, 3, 5):
        a = eval_proc(p, (NatV(n0),), alg, Dovetail(), Fuel(100_000))
        b = eval_proc(elim, (NatV(n0),), alg, Dovetail(), Fuel(100_000))
        assert [v.n for v in a.values] == [v.n for v in b.values], n0


def test_deterministic_programs_agree_with_elimination_spot():
    # the full 0..100 sweep is the acceptance criterion; spot-check here
    alg = get_algebra("N*")
    for name, oracle in (("isqrt_search", lambda n: __import__("math").isqrt(n)),
                         ("log2_search", lambda n: n.bit_length() - 1 if n else 0)):
        p, _ = load(name)
        elim = choose_eliminate(p, alg)
        for n in (0, 1, 7, 64, 100):
            a = eval_proc(p, (NatV(n),), alg, Dovetail(), Fuel(400_000))
            b = eval_proc(elim, (NatV(n),), alg, Dovetail(), Fuel(400_000))
            assert a.values[0].n == b.values[0].n == oracle(n), (name, n)


def test_enumerate_bounds_validation():
    with pytest.raises(ValueError):
        Enumerate(0)
    with pytest.raises(ValueError):
        Enumerate(4, 0)
