"""Carriers, fuel-bounded basic operations, and the built-in algebras.

Verdicts make partiality observable in finite time: an operation either
converges, is proven divergent (its divergence condition is decidable, e.g.
inverting an exact 0), or exhausts its budget while still undecided.
Constant-time total operations (booleans, naturals, real ring operations)
charge fuel but never fail; fuel gates the genuinely semidecidable work
(interval refinement for comparisons, inverse witness searches).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .codes import (Fuel, ECode, ConstCode, OutOfFuel, add_codes, neg_code,
                    mul_codes, abs_diff_code, inv_code, prog_rat_decode,
                    pair, unpair)
from .signature import (Signature, Sort, FuncSymbol, ClosedTerm, ProductType,
                        make_signature, standardise, n_standardise,
                        star_signature, default_term, REAL, INTERVAL)


class AlgebraError(Exception):
    """Ill-typed application: a programming error, not divergence."""


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    tag: str  # "ok" | "div" | "fuel"
    value: object = None

    @property
    def converged(self) -> bool:
        return self.tag == "ok"

    def __repr__(self):
        if self.tag == "ok":
            return f"Converged({self.value!r})"
        return "ProvenDivergent" if self.tag == "div" else "FuelExhausted"


def Converged(v) -> Verdict:
    return Verdict("ok", v)


PROVEN_DIVERGENT = Verdict("div")
FUEL_EXHAUSTED = Verdict("fuel")


# ---------------------------------------------------------------------------
# values


class Value:
    __slots__ = ()


class BoolV(Value):
    __slots__ = ("b",)

    def __init__(self, b: bool):
        self.b = bool(b)

    def __repr__(self):
        return "tt" if self.b else "ff"


TT = BoolV(True)
FF = BoolV(False)


class NatV(Value):
    __slots__ = ("n",)

    def __init__(self, n: int):
        if n < 0:
            raise AlgebraError("naturals are non-negative")
        self.n = n

    def __repr__(self):
        return f"NatV({self.n})"


class RealV(Value):
    """A real carried by a fast Cauchy code (constant codes stay exact)."""

    __slots__ = ("code",)

    def __init__(self, code: ECode):
        self.code = code

    def __repr__(self):
        if self.code.is_const:
            return f"RealV({self.code.value})"
        return f"RealV({self.code!r})"


class ArrV(Value):
    __slots__ = ("elem_sort", "items")

    def __init__(self, elem_sort: Sort, items: tuple):
        self.elem_sort = elem_sort
        self.items = tuple(items)

    def __repr__(self):
        return f"ArrV({self.elem_sort.name}, {list(self.items)!r})"


def rat_value(q) -> RealV:
    return RealV(ConstCode(Fraction(q)))


def value_key(v: Value):
    """Hashable identity for outcome-set dedup; real codes compare exactly
    only when constant, otherwise by object identity (equality of reals is
    not decidable)."""
    if isinstance(v, BoolV):
        return ("b", v.b)
    if isinstance(v, NatV):
        return ("n", v.n)
    if isinstance(v, RealV):
        if v.code.is_const:
            return ("q", v.code.value)
        return ("c", id(v.code))
    if isinstance(v, ArrV):
        return ("a", v.elem_sort.name, tuple(value_key(x) for x in v.items))
    if isinstance(v, tuple):
        return ("t",) + tuple(value_key(x) for x in v)
    raise AlgebraError(f"not a value: {v!r}")


_KIND_TAG = {"bool": BoolV, "nat": NatV, "real": RealV, "interval": RealV,
             "array": ArrV, "user": Value}


def check_value(sort: Sort, v: Value) -> bool:
    cls = _KIND_TAG[sort.kind]
    if not isinstance(v, cls):
        return False
    if sort.kind == "array" and v.elem_sort != sort.elem:
        return False
    return True


# ---------------------------------------------------------------------------
# comparisons by interval refinement


def compare_codes(x: ECode, y: ECode, fuel: Fuel, op: str) -> Verdict:
    """op "less": tt if x<y, ff if x>y, undecided forever if x=y.
    op "eq": ff if x!=y, undecided forever if x=y."""
    if x.is_const and y.is_const:
        fuel.take()
        a, b = x.value, y.value
        if a == b:
            return FUEL_EXHAUSTED  # equality holds; the operation diverges
        if op == "eq":
            return Converged(FF)
        return Converged(TT if a < b else FF)
    n = 0
    while fuel.take():
        try:
            xlo, xhi = x.interval(n, fuel)
            ylo, yhi = y.interval(n, fuel)
        except OutOfFuel:
            return FUEL_EXHAUSTED
        if xhi < ylo:
            return Converged(TT if op == "less" else FF)
        if yhi < xlo:
            return Converged(FF)
        n += 1
    return FUEL_EXHAUSTED


# ---------------------------------------------------------------------------
# partial algebras


MetricRule = Callable[[Value, Value, int], Fraction]
InterpRule = Callable[[tuple, Fuel], Verdict]


class PartialAlgebra:
    """A signature together with fuel-bounded interpretations and metrics."""

    def __init__(self, name: str, signature: Signature,
                 interp: dict[str, InterpRule],
                 metrics: Optional[dict[str, MetricRule]] = None,
                 total: bool = False,
                 carrier_check: Optional[Callable[[Sort, Value], bool]] = None,
                 real_literal: Optional[Callable[[Fraction], Value]] = None):
        self.name = name
        self.signature = signature
        self.interp = interp
        self.metrics = metrics or {}
        self.total = total
        self.accepts = carrier_check or check_value
        self.real_literal = real_literal or rat_value
        missing = [f for f in signature.symbols if f not in interp]
        if missing:
            raise AlgebraError(f"algebra {name} lacks rules for {missing}")

    def apply(self, f, args, fuel: Fuel) -> Verdict:
        sym = self.signature.symbol(f) if isinstance(f, str) else f
        if len(args) != sym.arity:
            raise AlgebraError(f"{sym.name}: arity {sym.arity}, got {len(args)}")
        for s, v in zip(sym.arg_sorts, args):
            if not self.accepts(s, v):
                raise AlgebraError(f"{sym.name}: argument of sort {s.name} got {v!r}")
        try:
            return self.interp[sym.name](tuple(args), fuel)
        except OutOfFuel:
            return FUEL_EXHAUSTED

    def rule(self, sym) -> InterpRule:
        """The raw interpretation, for callers whose arguments are already
        statically sort-checked (the term evaluator)."""
        return self.interp[sym.name]

    def metric(self, sort: Sort, v1: Value, v2: Value, n: int) -> Fraction:
        try:
            rule = self.metrics[sort.name]
        except KeyError:
            raise AlgebraError(f"sort {sort.name} has no metric") from None
        return rule(v1, v2, n)

    def default_value(self, sort: Sort) -> Value:
        v = apply_closed(self, default_term(self.signature, sort), Fuel(1000))
        if not v.converged:
            raise AlgebraError(f"default term for {sort.name} did not converge")
        return v.value


def apply(a: PartialAlgebra, f, args, fuel: Fuel) -> Verdict:
    return a.apply(f, args, fuel)


def apply_closed(a: PartialAlgebra, t: ClosedTerm, fuel: Fuel) -> Verdict:
    vals = []
    for arg in t.args:
        v = apply_closed(a, arg, fuel)
        if not v.converged:
            return v
        vals.append(v.value)
    return a.apply(t.sym, tuple(vals), fuel)


def product_metric(a: PartialAlgebra, u, xs, ys, n: int) -> Fraction:
    sorts = u.components if isinstance(u, ProductType) else tuple(u)
    if len(xs) != len(sorts) or len(ys) != len(sorts):
        raise AlgebraError("tuple length does not match product type")
    best = Fraction(0)
    for s, x, y in zip(sorts, xs, ys):
        d = a.metric(s, x, y, n)
        if d > best:
            best = d
    return best


# ---------------------------------------------------------------------------
# metric rules


def _discrete_metric(v1, v2, n):
    return Fraction(0) if value_key(v1) == value_key(v2) else Fraction(1)


def _real_metric(v1: RealV, v2: RealV, n: int) -> Fraction:
    return abs_diff_code(v1.code, v2.code).approx(n)


def _array_metric(elem_rule: MetricRule) -> MetricRule:
    def rule(v1: ArrV, v2: ArrV, n: int) -> Fraction:
        if len(v1.items) != len(v2.items):
            return Fraction(1)
        best = Fraction(0)
        for a, b in zip(v1.items, v2.items):
            d = elem_rule(a, b, n)
            if d > best:
                best = d
        return min(Fraction(1), best)
    return rule


# ---------------------------------------------------------------------------
# built-in algebras


def _total(fn):
    """Rule for a constant-time total operation: charges fuel, never fails.
    The unboxed callable is attached for the term evaluator's fast path."""
    def rule(args, fuel):
        fuel.take()
        return Converged(fn(*args))
    rule.fast_fn = fn
    return rule


def _bool_rules():
    return {
        "true": _total(lambda: TT),
        "false": _total(lambda: FF),
        "and": _total(lambda a, b: BoolV(a.b and b.b)),
        "or": _total(lambda a, b: BoolV(a.b or b.b)),
        "not": _total(lambda a: BoolV(not a.b)),
    }


def _if_rule():
    return _total(lambda b, x, y: x if b.b else y)


def _nat_rules():
    return {
        "zero_nat": _total(lambda: NatV(0)),
        "succ": _total(lambda a: NatV(a.n + 1)),
        "eq_nat": _total(lambda a, b: BoolV(a.n == b.n)),
        "less_nat": _total(lambda a, b: BoolV(a.n < b.n)),
        "if_nat": _if_rule(),
    }


def builtin_B() -> PartialAlgebra:
    sig = standardise(make_signature())
    interp = _bool_rules()
    interp["if_bool"] = _if_rule()
    return PartialAlgebra("B", sig, interp, {"bool": _discrete_metric}, total=True)


def builtin_N() -> PartialAlgebra:
    sig = n_standardise(standardise(make_signature()))
    interp = _bool_rules()
    interp["if_bool"] = _if_rule()
    interp.update(_nat_rules())
    metrics = {"bool": _discrete_metric, "nat": _discrete_metric}
    return PartialAlgebra("N", sig, interp, metrics, total=True)


def _real_base_signature() -> Signature:
    sig = make_signature([REAL], defaults={"real": "zero_real"})
    sig.add_symbol(FuncSymbol("zero_real", (), REAL))
    sig.add_symbol(FuncSymbol("one_real", (), REAL))
    sig.add_symbol(FuncSymbol("add", (REAL, REAL), REAL))
    sig.add_symbol(FuncSymbol("mul", (REAL, REAL), REAL))
    sig.add_symbol(FuncSymbol("neg", (REAL,), REAL))
    sig.add_symbol(FuncSymbol("inv", (REAL,), REAL, partial=True))
    return sig


def _inv_rule(args, fuel):
    (x,) = args
    code, status = inv_code(x.code, fuel)
    if status == "zero":
        return PROVEN_DIVERGENT
    if status == "fuel":
        return FUEL_EXHAUSTED
    return Converged(RealV(code))


def _real_rules():
    return {
        "zero_real": _total(lambda: rat_value(0)),
        "one_real": _total(lambda: rat_value(1)),
        "add": _total(lambda a, b: RealV(add_codes(a.code, b.code))),
        "mul": _total(lambda a, b: RealV(mul_codes(a.code, b.code))),
        "neg": _total(lambda a: RealV(neg_code(a.code))),
        "inv": _inv_rule,
        "if_real": _if_rule(),
        "eq_real": lambda args, fuel: compare_codes(args[0].code, args[1].code, fuel, "eq"),
        "less_real": lambda args, fuel: compare_codes(args[0].code, args[1].code, fuel, "less"),
    }


def builtin_R() -> PartialAlgebra:
    """The standard partial real algebra: the field with partial eq/less."""
    sig = standardise(_real_base_signature(),
                      eq_sorts={"real": "partial"}, order_sorts={"real": "partial"})
    interp = _bool_rules()
    interp["if_bool"] = _if_rule()
    interp.update(_real_rules())
    metrics = {"bool": _discrete_metric, "real": _real_metric}
    return PartialAlgebra("R", sig, interp, metrics, total=False)


def builtin_R_N() -> PartialAlgebra:
    """N-standardised reals, plus the While-computable conveniences the
    pseudo-code style assumes: nat embedding, rational enumeration, metric,
    and a nat pairing with projections."""
    sig = n_standardise(standardise(_real_base_signature(),
                                    eq_sorts={"real": "partial"},
                                    order_sorts={"real": "partial"}))
    from .signature import NAT, BOOL  # noqa: F401
    sig.add_symbol(FuncSymbol("nat2real", (NAT,), REAL))
    sig.add_symbol(FuncSymbol("rat", (NAT,), REAL))
    sig.add_symbol(FuncSymbol("dist", (REAL, REAL), REAL))
    sig.add_symbol(FuncSymbol("pair", (NAT, NAT), NAT))
    sig.add_symbol(FuncSymbol("fst", (NAT,), NAT))
    sig.add_symbol(FuncSymbol("snd", (NAT,), NAT))
    interp = _bool_rules()
    interp["if_bool"] = _if_rule()
    interp.update(_nat_rules())
    interp.update(_real_rules())
    # decode caches: these symbols are hammered by dovetailed searches
    rat_cache: dict[int, RealV] = {}
    unpair_cache: dict[int, tuple] = {}

    def _rat(a):
        v = rat_cache.get(a.n)
        if v is None:
            v = rat_value(prog_rat_decode(a.n))
            rat_cache[a.n] = v
        return v

    def _unpair(n):
        v = unpair_cache.get(n)
        if v is None:
            v = unpair(n)
            unpair_cache[n] = v
        return v

    interp.update({
        "nat2real": _total(lambda a: rat_value(a.n)),
        "rat": _total(_rat),
        "dist": _total(lambda a, b: RealV(abs_diff_code(a.code, b.code))),
        "pair": _total(lambda a, b: NatV(pair(a.n, b.n))),
        "fst": _total(lambda a: NatV(_unpair(a.n)[0])),
        "snd": _total(lambda a: NatV(_unpair(a.n)[1])),
    })
    metrics = {"bool": _discrete_metric, "nat": _discrete_metric, "real": _real_metric}
    return PartialAlgebra("RN", sig, interp, metrics, total=False)


INTERVAL_SLACK_BITS = 20


def interval_containment(code: ECode, fuel: Optional[Fuel] = None) -> str:
    """Certify code's limit within [0,1] up to slack 2^-20: yes/no/unknown."""
    slack = Fraction(1, 1 << INTERVAL_SLACK_BITS)
    budget = fuel if fuel is not None else Fuel(4 * INTERVAL_SLACK_BITS)
    n = 0
    while budget.take():
        try:
            lo, hi = code.interval(n)
        except OutOfFuel:
            return "unknown"
        if lo >= -slack and hi <= 1 + slack:
            return "yes"
        if lo > 1 + slack or hi < -slack:
            return "no"
        n += 1
    return "unknown"


def interval_value(code: ECode, fuel: Optional[Fuel] = None) -> RealV:
    status = interval_containment(code, fuel)
    if status == "no":
        raise AlgebraError("real is provably outside the unit interval")
    if status == "unknown":
        raise AlgebraError("unit-interval containment undecided within budget")
    return RealV(code)


def builtin_interval() -> PartialAlgebra:
    """The N-standard partial interval algebra: carrier [0,1] embedded in R."""
    base = builtin_R_N()
    sig = base.signature.copy()
    sig.add_sort(INTERVAL)
    sig.defaults["interval"] = "zero_interval"
    sig.add_symbol(FuncSymbol("zero_interval", (), INTERVAL))
    sig.add_symbol(FuncSymbol("i_I", (INTERVAL,), REAL))
    sig.add_symbol(FuncSymbol("if_interval", (Sort("bool", "bool"), INTERVAL, INTERVAL),
                              INTERVAL, conditional=True))
    interp = dict(base.interp)
    interp.update({
        "zero_interval": _total(lambda: rat_value(0)),
        "i_I": _total(lambda a: RealV(a.code)),
        "if_interval": _if_rule(),
    })
    metrics = dict(base.metrics)
    metrics["interval"] = _real_metric
    return PartialAlgebra("IN", sig, interp, metrics, total=False)


def star_algebra(a: PartialAlgebra) -> PartialAlgebra:
    if not a.signature.n_standard:
        raise AlgebraError("starring requires an N-standard algebra")
    sig = star_signature(a.signature)
    interp = dict(a.interp)
    metrics = dict(a.metrics)
    base_sorts = [s for s in a.signature.sorts.values() if s.kind != "array"]
    for s in base_sorts:
        sx = sig.sort(s.name + "*")
        default = None

        def mk_default(sort=s):
            # resolved lazily so the starred algebra object exists first
            return star._default_of(sort)

        interp[f"Null_{s.name}"] = _total(lambda sort=s: ArrV(sort, ()))
        interp[f"Lgth_{s.name}"] = _total(lambda arr: NatV(len(arr.items)))
        interp[f"Ap_{s.name}"] = _total(
            lambda arr, i, sort=s: arr.items[i.n] if i.n < len(arr.items)
            else star._default_of(sort))
        interp[f"Update_{s.name}"] = _total(
            lambda arr, i, v: ArrV(arr.elem_sort,
                                   arr.items[:i.n] + (v,) + arr.items[i.n + 1:])
            if i.n < len(arr.items) else arr)
        interp[f"Newlength_{s.name}"] = _total(
            lambda arr, k, sort=s: ArrV(arr.elem_sort, arr.items[:k.n])
            if k.n <= len(arr.items)
            else ArrV(arr.elem_sort, arr.items + tuple(
                star._default_of(sort) for _ in range(k.n - len(arr.items)))))
        interp[f"if_{sx.name}"] = _if_rule()
        if s.name in metrics:
            metrics[sx.name] = _array_metric(metrics[s.name])
    star = PartialAlgebra(a.name + "*", sig, interp, metrics, total=a.total)
    star._defaults_cache = {}

    def _default_of(sort: Sort) -> Value:
        v = star._defaults_cache.get(sort.name)
        if v is None:
            v = star.default_value(sort)
            star._defaults_cache[sort.name] = v
        return v

    star._default_of = _default_of
    return star


_BUILTINS = {"B": builtin_B, "N": builtin_N, "R": builtin_R,
             "RN": builtin_R_N, "IN": builtin_interval}


def get_algebra(name: str) -> PartialAlgebra:
    """Resolve an algebra by header name; a trailing * applies starring."""
    base = name[:-1] if name.endswith("*") else name
    try:
        alg = _BUILTINS[base]()
    except KeyError:
        raise AlgebraError(f"unknown algebra {name!r}") from None
    if name.endswith("*"):
        alg = star_algebra(alg)
    return alg
