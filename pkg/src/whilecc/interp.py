"""Operational semantics for WhileCC* under three choice strategies.

The semantics is the branching small-step one: First gives the atomic head,
Rest the possible remainders in a state, CompStep executes the head, and the
computation tree collects all outcomes. Divergence is never certified, only
under-approximated: outcome sets carry a proven-divergence flag (a div leaf,
or an operation whose divergence condition is decidable) and a truncation
flag (fuel, candidate bounds, node caps). `maybe_divergent` is their union;
diagnostics say which happened.

Strategies:
  * Enumerate explores every branch, with choose ranging over 0..max_nat.
  * Oracle answers the c-th choose with f(c) for a seed-derived f and
    diverges when the guard rejects it.
  * Dovetail searches candidates fairly, giving candidates at stage k a
    budget of k steps; a seed jitters the visiting order so independent runs
    can find different witnesses.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .algebra import (PartialAlgebra, Value, BoolV, NatV, Verdict,
                      Converged, PROVEN_DIVERGENT, FUEL_EXHAUSTED,
                      value_key, AlgebraError)
from .codes import Fuel, OutOfFuel
from .lang.ast import (Term, Var, Lit, App, Choose, Stmt, Skip, Div, Assign,
                       Seq, If, While, Procedure, is_atomic, subst_term)


_NATS = [NatV(i) for i in range(1 << 12)]


def nat_value(i: int) -> NatV:
    return _NATS[i] if i < len(_NATS) else NatV(i)


# ---------------------------------------------------------------------------
# strategies


class Enumerate:
    def __init__(self, max_nat: int = 32, max_depth: int = 10_000):
        if max_nat <= 0 or max_depth <= 0:
            raise ValueError("enumerate bounds must be positive")
        self.max_nat = max_nat
        self.max_depth = max_depth

    def fresh(self):
        return self

    def __repr__(self):
        return f"Enumerate(max_nat={self.max_nat}, max_depth={self.max_depth})"


class Oracle:
    """One implementation of choose: the c-th evaluation proposes f(c)."""

    def __init__(self, seed: int = 0, f: Optional[Callable[[int], int]] = None):
        self.seed = seed
        self.f = f if f is not None else self._seeded
        self.counter = 0

    def _seeded(self, c: int) -> int:
        return random.Random(self.seed * 2654435761 + c).randrange(8)

    def next_candidate(self) -> int:
        c = self.counter
        self.counter += 1
        return self.f(c)

    def fresh(self):
        return Oracle(self.seed, None if self.f == self._seeded else self.f)

    def __repr__(self):
        return f"Oracle(seed={self.seed})"


class Dovetail:
    """Fair budgeted search; stage k gives each tried candidate k steps.

    A seed permutes the scan order: within each block of 2^13 consecutive
    candidates the visiting order follows a seeded odd stride (a bijection
    on the block), so independently seeded searches reach a roughly uniform
    choice among a block's witnesses rather than always the least one.
    Every candidate is still visited at a stage within one block of its
    index, so fairness and budget growth are unchanged. Without a seed the
    scan is the plain ascending one.
    """

    BLOCK_BITS = 13

    def __init__(self, seed: Optional[int] = None):
        self.seed = seed
        self._strides: dict[int, int] = {}

    def _stride(self, block: int) -> int:
        s = self._strides.get(block)
        if s is None:
            mask = (1 << self.BLOCK_BITS) - 1
            s = random.Random((self.seed << 24) ^ block).randrange(1 << self.BLOCK_BITS) | 1
            s &= mask
            self._strides[block] = s
        return s

    def visit(self, stage: int) -> int:
        """The candidate given its first budget at this stage."""
        if self.seed is None:
            return stage
        mask = (1 << self.BLOCK_BITS) - 1
        block = stage >> self.BLOCK_BITS
        pos = stage & mask
        return (block << self.BLOCK_BITS) | ((pos * self._stride(block)) & mask)

    def fresh(self):
        return Dovetail(self.seed)

    def __repr__(self):
        return f"Dovetail(seed={self.seed})"



# ---------------------------------------------------------------------------
# states and outcome sets


class State:
    __slots__ = ("bindings",)

    def __init__(self, bindings: dict):
        self.bindings = bindings

    def get(self, name: str) -> Value:
        return self.bindings[name]

    def set(self, name: str, v: Value) -> "State":
        b = dict(self.bindings)
        b[name] = v
        return State(b)

    def set_many(self, names, vals) -> "State":
        b = dict(self.bindings)
        for n, v in zip(names, vals):
            b[n] = v
        return State(b)

    def key(self):
        return tuple(sorted((k, value_key(v)) for k, v in self.bindings.items()))

    def __repr__(self):
        return f"State({self.bindings})"


@dataclass
class OutcomeSet:
    """Values (or states, or output tuples) plus divergence information."""

    values: list = field(default_factory=list)
    proven_divergent: bool = False
    truncated: bool = False
    diagnostics: list = field(default_factory=list)

    @property
    def maybe_divergent(self) -> bool:
        return self.proven_divergent or self.truncated

    def add(self, v, seen: set) -> None:
        k = value_key(v) if not isinstance(v, State) else v.key()
        if k not in seen:
            seen.add(k)
            self.values.append(v)

    def merge_flags(self, other: "OutcomeSet") -> None:
        self.proven_divergent |= other.proven_divergent
        self.truncated |= other.truncated
        self.diagnostics.extend(other.diagnostics)

    def note(self, msg: str) -> None:
        self.diagnostics.append(msg)

    def __repr__(self):
        flags = []
        if self.proven_divergent:
            flags.append("div")
        if self.truncated:
            flags.append("truncated")
        return f"OutcomeSet({self.values}{', ' + '+'.join(flags) if flags else ''})"


class Ctx:
    __slots__ = ("alg", "strat", "fuel", "lits", "rules", "nodes", "node_cap")

    def __init__(self, alg: PartialAlgebra, strat, fuel: Fuel):
        self.alg = alg
        self.strat = strat
        self.fuel = fuel
        self.lits: dict[int, Value] = {}
        self.rules: dict[int, tuple] = {}
        self.nodes = 0
        self.node_cap = getattr(strat, "max_depth", 1_000_000_000)

    def rule(self, t: App) -> tuple:
        """(fast_fn or None, boxed rule) for the symbol at this node."""
        r = self.rules.get(id(t))
        if r is None:
            boxed = self.alg.rule(t.sym)
            r = (getattr(boxed, "fast_fn", None), boxed)
            self.rules[id(t)] = r
        return r

    def lit_value(self, t: Lit) -> Value:
        v = self.lits.get(id(t))
        if v is None:
            if t.sort.kind == "nat":
                v = nat_value(t.value)
            else:
                v = self.alg.real_literal(Fraction(t.value))
            self.lits[id(t)] = v
        return v


# ---------------------------------------------------------------------------
# deterministic-strategy term evaluation (Oracle / Dovetail)
#
# The hot path avoids verdict boxing: evaluation returns either a Value or
# one of the two sentinels below; the API boundary re-boxes.


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


DIV = _Sentinel("DIV")
FUEL_OUT = _Sentinel("FUEL_OUT")


def _det_term(ctx: Ctx, t: Term, b: dict):
    tt = type(t)
    if tt is Var:
        return b[t.name]
    if tt is App:
        if t.sym.conditional:
            g = _det_term(ctx, t.args[0], b)
            if g is DIV or g is FUEL_OUT:
                return g
            branch = t.args[1] if g.b else t.args[2]
            return _det_term(ctx, branch, b)
        vals = []
        for a in t.args:
            r = _det_term(ctx, a, b)
            if r is DIV or r is FUEL_OUT:
                return r
            vals.append(r)
        fast, boxed = ctx.rule(t)
        if fast is not None:
            ctx.fuel.take()
            return fast(*vals)
        try:
            v = boxed(tuple(vals), ctx.fuel)
        except OutOfFuel:
            return FUEL_OUT
        if v.tag == "ok":
            return v.value
        return DIV if v.tag == "div" else FUEL_OUT
    if tt is Lit:
        return ctx.lit_value(t)
    if tt is Choose:
        if isinstance(ctx.strat, Oracle):
            return _oracle_choose(ctx, t, b)
        return _dovetail_choose(ctx, t, b)
    raise TypeError(f"not a term: {t!r}")


def _box(res) -> Verdict:
    if res is DIV:
        return PROVEN_DIVERGENT
    if res is FUEL_OUT:
        return FUEL_EXHAUSTED
    return Converged(res)


def _oracle_choose(ctx: Ctx, t: Choose, b: dict):
    cand = ctx.strat.next_candidate()
    b2 = dict(b)
    b2[t.var] = nat_value(cand)
    g = _det_term(ctx, t.body, b2)
    if g is FUEL_OUT:
        return FUEL_OUT
    if g is DIV or not g.b:
        return DIV  # the guard rejected the oracle's proposal
    return nat_value(cand)


def _dovetail_choose(ctx: Ctx, t: Choose, b: dict):
    strat: Dovetail = ctx.strat
    b2 = dict(b)
    stage = 0
    retry: list[tuple[int, int]] = []  # fuel-exhausted candidates, backoff
    while True:
        if not ctx.fuel.take():
            return FUEL_OUT
        batch = [strat.visit(stage)]
        while retry and retry[0][0] <= stage:
            batch.append(heapq.heappop(retry)[1])
        for cand in batch:
            sub = ctx.fuel.spawn(stage + 1)
            saved, ctx.fuel = ctx.fuel, sub
            b2[t.var] = nat_value(cand)
            try:
                g = _det_term(ctx, t.body, b2)
            finally:
                ctx.fuel = saved
            if g is FUEL_OUT:
                heapq.heappush(retry, (max(stage * 2, stage + 1), cand))
            elif g is DIV:
                pass  # refuted for good
            elif g.b:
                return nat_value(cand)
            # a ff guard is refuted for good
        stage += 1


# ---------------------------------------------------------------------------
# enumerate-strategy term evaluation


def _enum_term(ctx: Ctx, t: Term, b: dict) -> OutcomeSet:
    out = OutcomeSet()
    seen: set = set()
    if isinstance(t, Var):
        out.add(b[t.name], seen)
        return out
    if isinstance(t, Lit):
        out.add(ctx.lit_value(t), seen)
        return out
    if isinstance(t, App):
        if t.sym.conditional:
            g = _enum_term(ctx, t.args[0], b)
            out.merge_flags(g)
            for v in g.values:
                branch = t.args[1] if v.b else t.args[2]
                sub = _enum_term(ctx, branch, b)
                out.merge_flags(sub)
                for w in sub.values:
                    out.add(w, seen)
            return out
        arg_sets = []
        for a in t.args:
            s = _enum_term(ctx, a, b)
            out.merge_flags(s)
            arg_sets.append(s.values)
        combos = [()]
        for vs in arg_sets:
            combos = [c + (v,) for c in combos for v in vs]
            if len(combos) > ctx.node_cap:
                out.truncated = True
                out.note("application combination cap hit")
                combos = combos[:ctx.node_cap]
        _, rule = ctx.rule(t)
        for combo in combos:
            try:
                r = rule(combo, ctx.fuel)
            except OutOfFuel:
                r = FUEL_EXHAUSTED
            if r.tag == "ok":
                out.add(r.value, seen)
            elif r.tag == "div":
                out.proven_divergent = True
            else:
                out.truncated = True
                out.note(f"{t.sym.name}: fuel exhausted")
        return out
    if isinstance(t, Choose):
        b2 = dict(b)
        clean_witness = False
        any_flag = False
        for cand in range(ctx.strat.max_nat + 1):
            b2[t.var] = nat_value(cand)
            g = _enum_term(ctx, t.body, b2)
            has_tt = any(isinstance(v, BoolV) and v.b for v in g.values)
            has_ff = any(isinstance(v, BoolV) and not v.b for v in g.values)
            if has_tt:
                out.add(nat_value(cand), seen)
                if not has_ff and not g.maybe_divergent:
                    clean_witness = True
            if g.maybe_divergent:
                any_flag = True
                out.note(f"choose candidate {cand}: "
                         + ("divergent guard" if g.proven_divergent
                            else "undecided guard"))
        if not clean_witness:
            # cannot refute "all candidates fail"; divergence stays possible
            out.truncated = True
            if not any_flag:
                out.note(f"choose candidates 0..{ctx.strat.max_nat} "
                         "all rejected; rest unexplored")
        return out
    raise TypeError(f"not a term: {t!r}")


def eval_term(t: Term, sigma: State, alg: PartialAlgebra, strat,
              fuel: Fuel) -> OutcomeSet:
    ctx = Ctx(alg, strat, fuel)
    return _term_outcomes(ctx, t, sigma.bindings)


def _term_outcomes(ctx: Ctx, t: Term, b: dict) -> OutcomeSet:
    if isinstance(ctx.strat, Enumerate):
        return _enum_term(ctx, t, b)
    out = OutcomeSet()
    r = _det_term(ctx, t, b)
    if r is DIV:
        out.proven_divergent = True
    elif r is FUEL_OUT:
        out.truncated = True
        out.note("term evaluation: fuel exhausted")
    else:
        out.values.append(r)
    return out


# ---------------------------------------------------------------------------
# atomic statements, First / Rest / CompStep


def _assign_outcomes(ctx: Ctx, s: Assign, sigma: State) -> OutcomeSet:
    out = OutcomeSet()
    seen: set = set()
    if isinstance(ctx.strat, Enumerate):
        tuples = [()]
        for t in s.rhs:
            vs = _enum_term(ctx, t, sigma.bindings)
            out.merge_flags(vs)
            tuples = [c + (v,) for c in tuples for v in vs.values]
        for combo in tuples:
            out.add(sigma.set_many(s.lhs, combo), seen)
        return out
    vals = []
    for t in s.rhs:
        r = _det_term(ctx, t, sigma.bindings)
        if r is DIV:
            out.proven_divergent = True
            return out
        if r is FUEL_OUT:
            out.truncated = True
            return out
        vals.append(r)
    out.values.append(sigma.set_many(s.lhs, vals))
    return out


def eval_atomic(s: Stmt, sigma: State, alg: PartialAlgebra, strat,
                fuel: Fuel) -> OutcomeSet:
    ctx = Ctx(alg, strat, fuel)
    return _atomic_outcomes(ctx, s, sigma)


def _atomic_outcomes(ctx: Ctx, s: Stmt, sigma: State) -> OutcomeSet:
    if isinstance(s, Skip):
        return OutcomeSet(values=[sigma])
    if isinstance(s, Div):
        return OutcomeSet(proven_divergent=True)
    if isinstance(s, Assign):
        return _assign_outcomes(ctx, s, sigma)
    raise TypeError(f"not atomic: {s!r}")


def first(s: Stmt) -> Stmt:
    if is_atomic(s):
        return s
    if isinstance(s, Seq):
        return first(s.s1)
    return Skip()


@dataclass
class RestResult:
    stmts: list
    has_div: bool = False
    truncated: bool = False


def rest(s: Stmt, sigma: State, alg: PartialAlgebra, strat, fuel: Fuel) -> RestResult:
    ctx = Ctx(alg, strat, fuel)
    return _rest(ctx, s, sigma)


def _rest(ctx: Ctx, s: Stmt, sigma: State) -> RestResult:
    if is_atomic(s):
        return RestResult([Skip()])
    if isinstance(s, Seq):
        if is_atomic(s.s1):
            return RestResult([s.s2])
        inner = _rest(ctx, s.s1, sigma)
        return RestResult([Seq(s1p, s.s2) for s1p in inner.stmts],
                          inner.has_div, inner.truncated)
    guards = _term_outcomes(ctx, s.b, sigma.bindings)
    stmts = []
    if isinstance(s, If):
        for v in guards.values:
            stmts.append(s.then if v.b else s.els)
    elif isinstance(s, While):
        for v in guards.values:
            stmts.append(Seq(s.body, s) if v.b else Skip())
    return RestResult(stmts, guards.proven_divergent, guards.truncated)


def comp_step(s: Stmt, sigma: State, alg: PartialAlgebra, strat,
              fuel: Fuel) -> OutcomeSet:
    return eval_atomic(first(s), sigma, alg, strat, fuel)


# ---------------------------------------------------------------------------
# computation trees


class CompTree:
    """Stage-bounded branching record; only leaves may carry divergence."""

    __slots__ = ("state", "children", "div_leaf", "truncated", "frontier")

    def __init__(self, state: State):
        self.state = state
        self.children: list[CompTree] = []
        self.div_leaf = False       # an up-arrow leaf hangs off this node
        self.truncated = False      # cut by fuel / bounds, not by semantics
        self.frontier = False       # stage bound reached with work remaining

    def leaves(self, acc=None):
        if acc is None:
            acc = []
        if not self.children:
            acc.append(self)
        else:
            for c in self.children:
                c.leaves(acc)
        return acc

    def count(self) -> int:
        return 1 + sum(c.count() for c in self.children)


def comp_tree_stage(s: Stmt, sigma: State, n: int, alg: PartialAlgebra,
                    strat=None, fuel: Optional[Fuel] = None) -> CompTree:
    if n < 0:
        raise ValueError("stage must be non-negative")
    strat = strat or Enumerate()
    ctx = Ctx(alg, strat, fuel if fuel is not None else Fuel(1_000_000))
    return _tree(ctx, s, sigma, n)


def _tree(ctx: Ctx, s: Stmt, sigma: State, n: int) -> CompTree:
    node = CompTree(sigma)
    if n == 0:
        node.frontier = True
        return node
    ctx.nodes += 1
    if ctx.nodes > ctx.node_cap:
        node.truncated = True
        return node
    step = _atomic_outcomes(ctx, first(s), sigma)
    if is_atomic(s):
        for sp in step.values:
            node.children.append(CompTree(sp))
        node.div_leaf |= step.proven_divergent
        node.truncated |= step.truncated
        return node
    rr = _rest(ctx, s, sigma)
    for sp in step.values:
        for s2 in rr.stmts:
            node.children.append(_tree(ctx, s2, sp, n - 1))
    node.div_leaf |= step.proven_divergent or rr.has_div
    node.truncated |= step.truncated or rr.truncated
    return node


def tree_is_prefix(a: CompTree, b: CompTree) -> bool:
    """Stage-n tree is a prefix of the stage-(n+1) tree (same branching,
    possibly deeper)."""
    if a.state.key() != b.state.key():
        return False
    if a.frontier or a.truncated:
        return True
    if len(a.children) != len(b.children) or a.div_leaf != b.div_leaf:
        return False
    return all(tree_is_prefix(x, y) for x, y in zip(a.children, b.children))


# ---------------------------------------------------------------------------
# statement and procedure semantics


def _decompose(s: Stmt, stack: tuple) -> tuple[Stmt, tuple]:
    while isinstance(s, Seq):
        stack = (s.s2,) + stack
        s = s.s1
    return s, stack


def _eval_stmt_det(ctx: Ctx, s: Stmt, sigma: State) -> OutcomeSet:
    cur, stack = _decompose(s, ())
    b = sigma
    out = OutcomeSet()
    while True:
        if not ctx.fuel.take():
            out.truncated = True
            out.note("statement evaluation: fuel exhausted")
            return out
        if is_atomic(cur):
            res = _atomic_outcomes(ctx, cur, b)
            out.merge_flags(res)
            if not res.values:
                return out
            b = res.values[0]
            if not stack:
                out.values.append(b)
                return out
            cur, stack = _decompose(stack[0], stack[1:])
            continue
        guards = _term_outcomes(ctx, cur.b, b.bindings)
        if not guards.values:
            out.merge_flags(guards)
            return out
        taken = guards.values[0].b
        if isinstance(cur, If):
            nxt = cur.then if taken else cur.els
            cur, stack = _decompose(nxt, stack)
        else:  # While
            if taken:
                loop = cur
                cur, stack = _decompose(cur.body, (loop,) + stack)
            else:
                if not stack:
                    out.values.append(b)
                    return out
                cur, stack = _decompose(stack[0], stack[1:])


def _eval_stmt_enum(ctx: Ctx, s: Stmt, sigma: State) -> OutcomeSet:
    out = OutcomeSet()
    seen: set = set()
    work = [(_decompose(s, ())) + (sigma,)]
    while work:
        if ctx.fuel.dead:
            out.truncated = True
            out.note("statement evaluation: fuel exhausted with frontier pending")
            return out
        ctx.nodes += 1
        if ctx.nodes > ctx.node_cap:
            out.truncated = True
            out.note("node budget exhausted with frontier pending")
            return out
        cur, stack, b = work.pop()
        if not ctx.fuel.take():
            out.truncated = True
            out.note("statement evaluation: fuel exhausted with frontier pending")
            return out
        if is_atomic(cur):
            res = _atomic_outcomes(ctx, cur, b)
            out.merge_flags(res)
            for bp in res.values:
                if stack:
                    work.append(_decompose(stack[0], stack[1:]) + (bp,))
                else:
                    out.add(bp, seen)
            continue
        guards = _term_outcomes(ctx, cur.b, b.bindings)
        out.merge_flags(guards)
        branches = []
        for v in guards.values:
            if isinstance(cur, If):
                branches.append(_decompose(cur.then if v.b else cur.els, stack))
            else:
                if v.b:
                    branches.append(_decompose(cur.body, (cur,) + stack))
                elif stack:
                    branches.append(_decompose(stack[0], stack[1:]))
                else:
                    out.add(b, seen)
        for br in reversed(branches):
            work.append(br + (b,))
    return out


def eval_stmt(s: Stmt, sigma: State, alg: PartialAlgebra, strat,
              fuel: Fuel) -> OutcomeSet:
    ctx = Ctx(alg, strat, fuel)
    if isinstance(strat, Enumerate):
        return _eval_stmt_enum(ctx, s, sigma)
    return _eval_stmt_det(ctx, s, sigma)


def initial_state(p: Procedure, alg: PartialAlgebra, args,
                  junk: Optional[dict] = None) -> State:
    if len(args) != len(p.in_vars):
        raise AlgebraError(f"{p.name}: expected {len(p.in_vars)} inputs, "
                           f"got {len(args)}")
    b = {}
    for (n, s), v in zip(p.in_vars, args):
        if not alg.accepts(s, v):
            raise AlgebraError(f"{p.name}: input {n} expects sort {s.name}, got {v!r}")
        b[n] = v
    for n, s in p.out_vars + p.aux_vars:
        if junk and n in junk:
            b[n] = junk[n]
        else:
            b[n] = alg.default_value(s)
    return State(b)


def eval_proc(p: Procedure, args, alg: PartialAlgebra, strat, fuel: Fuel,
              junk: Optional[dict] = None) -> OutcomeSet:
    """Run a procedure; outcome values are outputs (tuples if several)."""
    strat = strat.fresh() if hasattr(strat, "fresh") else strat
    sigma = initial_state(p, alg, args, junk)
    res = eval_stmt(p.body, sigma, alg, strat, fuel)
    out = OutcomeSet(proven_divergent=res.proven_divergent,
                     truncated=res.truncated,
                     diagnostics=list(res.diagnostics))
    seen: set = set()
    names = [n for n, _ in p.out_vars]
    for sp in res.values:
        vals = tuple(sp.get(n) for n in names)
        out.add(vals[0] if len(vals) == 1 else vals, seen)
    return out


def is_deterministic_on(p: Procedure, samples, alg: PartialAlgebra,
                        strat=None, fuel_steps: int = 200_000) -> list[dict]:
    """Bounded determinism check: is the Enumerate outcome set a singleton?"""
    strat = strat or Enumerate()
    report = []
    for args in samples:
        res = eval_proc(p, args, alg, strat, Fuel(fuel_steps))
        report.append({
            "input": args,
            "outcomes": res.values,
            "deterministic": len(res.values) == 1 and not res.maybe_divergent,
            "maybe_divergent": res.maybe_divergent,
        })
    return report


# ---------------------------------------------------------------------------
# choose elimination (total algebras)


class ChooseEliminationError(Exception):
    pass


def choose_eliminate(p: Procedure, alg: PartialAlgebra) -> Procedure:
    """Rewrite every choose into a least-witness while search (Prop 3.4.1
    style); sound for deterministic procedures over total algebras."""
    if not alg.total:
        raise ChooseEliminationError(
            f"algebra {alg.name} is not total; choose elimination needs "
            "convergent guard evaluation")
    sig = alg.signature
    counter = [0]
    new_aux: list = []
    taken = set(p.var_sorts)

    def fresh() -> str:
        while True:
            name = f"ch_elim_{counter[0]}"
            counter[0] += 1
            if name not in taken:
                taken.add(name)
                from .signature import NAT
                new_aux.append((name, NAT))
                return name

    def strip_term(t: Term, pre: list) -> Term:
        if isinstance(t, (Var, Lit)):
            return t
        if isinstance(t, App):
            return App(t.sym, tuple(strip_term(a, pre) for a in t.args))
        if isinstance(t, Choose):
            body = strip_term(t.body, pre)
            z = fresh()
            from .signature import NAT
            zv = Var(z, NAT)
            guard = App(sig.symbol("not"), (subst_term(body, {t.var: zv}),))
            pre.append(Assign((z,), (Lit(0, NAT),)))
            pre.append(While(guard, Assign((z,), (App(sig.symbol("succ"), (zv,)),))))
            out = Var(z, NAT)
            out.sort = NAT
            return out
        raise TypeError(f"not a term: {t!r}")

    def strip_stmt(s: Stmt) -> Stmt:
        if isinstance(s, (Skip, Div)):
            return s
        if isinstance(s, Assign):
            pre: list = []
            rhs = tuple(strip_term(t, pre) for t in s.rhs)
            body = Assign(s.lhs, rhs)
            return _seq_with_pre(pre, body)
        if isinstance(s, Seq):
            return Seq(strip_stmt(s.s1), strip_stmt(s.s2))
        if isinstance(s, If):
            pre = []
            b = strip_term(s.b, pre)
            return _seq_with_pre(pre, If(b, strip_stmt(s.then), strip_stmt(s.els)))
        if isinstance(s, While):
            pre = []
            b = strip_term(s.b, pre)
            body = strip_stmt(s.body)
            if pre:
                # guard searches re-run before each re-evaluation of b
                body = Seq(body, _seq_as_stmt(pre))
                return _seq_with_pre(pre, While(b, body))
            return While(b, body)
        raise TypeError(f"not a statement: {s!r}")

    body = strip_stmt(p.body)
    return Procedure(p.name + "_elim", p.algebra_name, p.in_vars, p.out_vars,
                     tuple(p.aux_vars) + tuple(new_aux), body)


def _seq_as_stmt(stmts: list) -> Stmt:
    out = stmts[-1]
    for s in reversed(stmts[:-1]):
        out = Seq(s, out)
    return out


def _seq_with_pre(pre: list, body: Stmt) -> Stmt:
    if not pre:
        return body
    return Seq(_seq_as_stmt(pre), body)
