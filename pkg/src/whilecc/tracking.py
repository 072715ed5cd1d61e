"""Concrete computability: tracking functions and the code algebra.

A tracking function makes the enumeration square commute: running it on
indices agrees (under decoding) with the abstract function on values, on
every sample where the abstract side converges; strict tracking also
reflects definedness. The code algebra interprets a whole signature by
tracking functions, so running the ordinary interpreter over it executes
programs on codes; that single construction stands in for the per-function
representing machinery of the soundness proof, and the comparison of the
two instantiations is what the tests check.

Real-sorted equality of results is only refutable, so commuting squares are
checked as "not refuted at precision 2^-20".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .algebra import (PartialAlgebra, Value, BoolV, NatV, RealV, ArrV,
                      Verdict, Converged, PROVEN_DIVERGENT, FUEL_EXHAUSTED,
                      TT, FF, compare_codes, rat_value, AlgebraError)
from .codes import (Fuel, ECode, ConstCode, CodeRegistry, CodeProducerError,
                    add_codes, neg_code, mul_codes, abs_diff_code, inv_code,
                    prog_rat_decode)
from .interp import Dovetail, eval_proc, nat_value
from .lang.ast import Procedure
from .reals import Enumeration, diagonal_code, ecode_eval
from .report import Report
from .signature import Sort


EQUALITY_CHECK_BITS = 20


@dataclass
class TrackingFn:
    """A rule on code tuples, with its declared index domain noted."""

    fn: Callable[[tuple, Fuel], Verdict]
    domain_note: str = "all registered codes"

    def __call__(self, args: tuple, fuel: Fuel) -> Verdict:
        return self.fn(args, fuel)


@dataclass
class EffectivityCert:
    """Tracking functions for every basic symbol, with check reports."""

    trackers: dict[str, TrackingFn]
    reports: dict[str, Report] = field(default_factory=dict)

    def covers(self, signature) -> list[str]:
        return [name for name in signature.symbols if name not in self.trackers]


# ---------------------------------------------------------------------------
# the code algebra


def _values_equal_unrefuted(a: Value, b: Value, bits: int = EQUALITY_CHECK_BITS) -> bool:
    """Exact on discrete sorts; on reals, equality not refuted at 2^-bits."""
    if isinstance(a, BoolV) and isinstance(b, BoolV):
        return a.b == b.b
    if isinstance(a, NatV) and isinstance(b, NatV):
        return a.n == b.n
    if isinstance(a, RealV) and isinstance(b, RealV):
        if a.code.is_const and b.code.is_const:
            return a.code.value == b.code.value
        alo, ahi = a.code.interval(bits)
        blo, bhi = b.code.interval(bits)
        return not (ahi < blo or bhi < alo)
    if isinstance(a, ArrV) and isinstance(b, ArrV):
        return (len(a.items) == len(b.items)
                and all(_values_equal_unrefuted(x, y, bits)
                        for x, y in zip(a.items, b.items)))
    return False


def builtin_certs(base: PartialAlgebra, registry: CodeRegistry) -> EffectivityCert:
    """Strict tracking functions for every symbol of the built-in real /
    interval algebras (starred or not). Codes travel as nat values holding
    registry indices; bool and nat are tracked identically."""
    sig = base.signature
    trackers: dict[str, TrackingFn] = {}

    def code_of(v: NatV) -> ECode:
        return registry.code(v.n)

    def mint(c: ECode) -> NatV:
        return NatV(registry.mint(c))

    def total(fn):
        def rule(args, fuel):
            fuel.take()
            return Converged(fn(*args))
        rule.fast_fn = fn
        return TrackingFn(rule)

    identity_sorts = {"bool", "nat"}
    for name, sym in sig.symbols.items():
        res = sym.result_sort.kind
        if name in ("true", "false", "and", "or", "not", "zero_nat", "succ",
                    "eq_nat", "less_nat", "pair", "fst", "snd"):
            trackers[name] = TrackingFn(base.interp[name])
        elif sym.conditional:
            trackers[name] = total(lambda b, x, y: x if b.b else y)
    if "zero_real" in sig.symbols:
        trackers["zero_real"] = total(lambda: NatV(0))  # index 0 is const 0
        trackers["one_real"] = total(lambda: mint(ConstCode(1)))
        trackers["add"] = total(lambda a, b: mint(add_codes(code_of(a), code_of(b))))
        trackers["mul"] = total(lambda a, b: mint(mul_codes(code_of(a), code_of(b))))
        trackers["neg"] = total(lambda a: mint(neg_code(code_of(a))))

        def inv_rule(args, fuel):
            c, status = inv_code(code_of(args[0]), fuel)
            if status == "zero":
                return PROVEN_DIVERGENT
            if status == "fuel":
                return FUEL_EXHAUSTED
            return Converged(mint(c))

        trackers["inv"] = TrackingFn(inv_rule)
        trackers["eq_real"] = TrackingFn(
            lambda args, fuel: compare_codes(code_of(args[0]), code_of(args[1]),
                                             fuel, "eq"))
        trackers["less_real"] = TrackingFn(
            lambda args, fuel: compare_codes(code_of(args[0]), code_of(args[1]),
                                             fuel, "less"))
    if "nat2real" in sig.symbols:
        trackers["nat2real"] = total(lambda a: mint(ConstCode(a.n)))
        trackers["rat"] = total(lambda a: mint(ConstCode(prog_rat_decode(a.n))))
        trackers["dist"] = total(
            lambda a, b: mint(abs_diff_code(code_of(a), code_of(b))))
    if "i_I" in sig.symbols:
        trackers["zero_interval"] = total(lambda: NatV(0))
        trackers["i_I"] = total(lambda a: a)
    for s in list(sig.sorts.values()):
        if s.kind != "array":
            continue
        base_name = s.elem.name
        if f"Null_{base_name}" not in sig.symbols:
            continue
        trackers[f"Null_{base_name}"] = total(lambda elem=s.elem: ArrV(elem, ()))
        trackers[f"Lgth_{base_name}"] = total(lambda arr: NatV(len(arr.items)))
        trackers[f"Ap_{base_name}"] = total(
            lambda arr, i, elem=s.elem: arr.items[i.n] if i.n < len(arr.items)
            else _code_default(elem))
        trackers[f"Update_{base_name}"] = total(
            lambda arr, i, v: ArrV(arr.elem_sort,
                                   arr.items[:i.n] + (v,) + arr.items[i.n + 1:])
            if i.n < len(arr.items) else arr)
        trackers[f"Newlength_{base_name}"] = total(
            lambda arr, k, elem=s.elem: ArrV(arr.elem_sort, arr.items[:k.n])
            if k.n <= len(arr.items)
            else ArrV(arr.elem_sort, arr.items + tuple(
                _code_default(elem) for _ in range(k.n - len(arr.items)))))
    missing = [n for n in sig.symbols if n not in trackers]
    if missing:
        raise AlgebraError(f"no tracking functions for {missing}")
    return EffectivityCert(trackers)


def _code_default(elem: Sort) -> Value:
    if elem.kind == "bool":
        return FF
    return NatV(0)  # nat zero, or the index of the constant-zero code


def code_algebra(base: PartialAlgebra, registry: CodeRegistry,
                 certs: Optional[EffectivityCert] = None) -> PartialAlgebra:
    """An algebra whose carriers are code naturals and whose operations are
    the certified tracking functions. Running the generic interpreter over
    it is concrete computation on codes."""
    if certs is None:
        certs = builtin_certs(base, registry)
    uncovered = certs.covers(base.signature)
    if uncovered:
        raise AlgebraError(f"effectivity certificate misses {uncovered}")
    interp = {name: tf.fn if isinstance(tf, TrackingFn) else tf
              for name, tf in certs.trackers.items()}
    metrics = {"bool": base.metrics.get("bool"), "nat": base.metrics.get("nat")}
    metrics = {k: v for k, v in metrics.items() if v is not None}

    def accepts_code(sort: Sort, v: Value) -> bool:
        if sort.kind == "bool":
            return isinstance(v, BoolV)
        if sort.kind in ("nat", "real", "interval"):
            return isinstance(v, NatV)
        if sort.kind == "array":
            return isinstance(v, ArrV) and all(accepts_code(sort.elem, x)
                                               for x in v.items)
        return False

    return PartialAlgebra("codes(" + base.name + ")", base.signature, interp,
                          metrics, total=False, carrier_check=accepts_code,
                          real_literal=lambda q: NatV(registry.mint(ConstCode(q))))


def decode_code_value(v: Value, sort: Sort, registry: CodeRegistry) -> Value:
    """alpha-bar applied to a code-algebra result."""
    if sort.kind in ("bool", "nat"):
        return v
    if sort.kind in ("real", "interval"):
        return RealV(registry.code(v.n))
    if sort.kind == "array":
        return ArrV(sort.elem, tuple(decode_code_value(x, sort.elem, registry)
                                     for x in v.items))
    raise AlgebraError(f"cannot decode sort {sort.name}")


def encode_input(v: Value, sort: Sort, registry: CodeRegistry) -> Value:
    """Inject an abstract value into the code algebra (registers its code)."""
    if sort.kind in ("bool", "nat"):
        return v
    if sort.kind in ("real", "interval"):
        return NatV(registry.mint(v.code))
    if sort.kind == "array":
        return ArrV(sort.elem, tuple(encode_input(x, sort.elem, registry)
                                     for x in v.items))
    raise AlgebraError(f"cannot encode sort {sort.name}")


# ---------------------------------------------------------------------------
# tracking checks


def check_tracking(F: Callable[[tuple, Fuel], Verdict], f, samples,
                   decode: Callable[[int, int], tuple],
                   decode_out: Optional[Callable[[Value], Value]] = None,
                   strict: bool = False, fuel_steps: int = 100_000,
                   name: str = "tracking") -> Report:
    """Sampled commuting square.

    F runs on abstract values, f on index tuples; decode(position, index)
    supplies the abstract value for each sample component and decode_out
    maps the tracked result back to a value. Failures are report rows,
    never exceptions.
    """
    rep = Report(name)
    decode_out = decode_out or (lambda v: v)
    for ks in samples:
        abstract_args = tuple(decode(i, k) for i, k in enumerate(ks))
        FV = F(abstract_args, Fuel(fuel_steps))
        fv = f(tuple(NatV(k) for k in ks), Fuel(fuel_steps))
        sample = str(ks)
        if FV.tag == "ok":
            if fv.tag != "ok":
                rep.add(False, name, sample,
                        f"abstract converged but tracking gave {fv.tag}")
                continue
            abstract_out = FV.value
            tracked_out = decode_out(fv.value)
            rep.add(_square_agrees(abstract_out, tracked_out), name, sample,
                    "square commutes (equality unrefuted at 2^-20)")
        else:
            if strict and fv.tag == "ok":
                rep.add(False, name, sample,
                        "strictness failure: tracking converged where the "
                        "abstract function does not")
            else:
                rep.add(True, name, sample,
                        f"both sides non-convergent ({FV.tag}/{fv.tag})")
    return rep


def _square_agrees(abstract_out: Value, tracked_out: Value) -> bool:
    return _values_equal_unrefuted(abstract_out, tracked_out)


def make_square_decoder(registry: CodeRegistry):
    """decode(position, index) for rational-code samples: every component is
    the code at that registry index."""
    def decode(_pos: int, k: int) -> Value:
        return RealV(registry.code(k))
    return decode


# ---------------------------------------------------------------------------
# Theorem A machinery: the lift from approximation runs to a code


class LiftError(CodeProducerError):
    pass


def soundness_lift(P: Procedure, code_alg: PartialAlgebra,
                   registry: CodeRegistry, args: tuple,
                   fuel_per_level: int = 500_000,
                   strat=None, register: bool = True):
    """Assemble the diagonal code from per-precision tracked runs of an
    approximating procedure P: nat x u -> s.

    Level m runs P on the code algebra at precision m; the diagonal shifted
    by two is a fast Cauchy code for the approximated value at the decoded
    input. A diverging level run aborts with that level's index.
    """
    strat = strat or Dovetail()
    cache: dict[int, ECode] = {}

    def levels(m: int) -> ECode:
        c = cache.get(m)
        if c is None:
            res = eval_proc(P, (nat_value(m),) + tuple(args), code_alg,
                            strat, Fuel(fuel_per_level))
            if not res.values:
                raise LiftError(
                    f"level {m}: approximating run did not converge "
                    f"({'divergent' if res.proven_divergent else 'fuel'})",
                    level=m)
            out = res.values[0]
            c = registry.code(out.n)
            cache[m] = c
        return c

    code = diagonal_code(levels)
    if register:
        registry.mint(code)
    return code


def a0_square_check(P: Procedure, abstract_alg: PartialAlgebra,
                    code_alg: PartialAlgebra, registry: CodeRegistry,
                    inputs: list, fuel_steps: int = 300_000,
                    exact: bool = True, name: str = "A0-square") -> Report:
    """Run P both on values and on codes and compare the decoded outputs.

    With rational inputs and field operations both sides are exact, so the
    comparison is exact equality; otherwise equality is unrefuted-at-2^-20.
    """
    rep = Report(name)
    out_sorts = [s for _, s in P.out_vars]
    for args in inputs:
        abstract = eval_proc(P, args, abstract_alg, Dovetail(), Fuel(fuel_steps))
        coded_args = tuple(encode_input(v, s, registry)
                           for v, s in zip(args, [s for _, s in P.in_vars]))
        coded = eval_proc(P, coded_args, code_alg, Dovetail(), Fuel(fuel_steps))
        sample = "(" + ", ".join(map(repr, args)) + ")"
        if bool(abstract.values) != bool(coded.values):
            rep.add(False, name, sample, "one side converged, the other did not")
            continue
        if not abstract.values:
            rep.add(True, name, sample, "both sides non-convergent")
            continue
        av, cv = abstract.values[0], coded.values[0]
        avs = av if isinstance(av, tuple) else (av,)
        cvs = cv if isinstance(cv, tuple) else (cv,)
        decoded = tuple(decode_code_value(c, s, registry)
                        for c, s in zip(cvs, out_sorts))
        ok = True
        for a, d in zip(avs, decoded):
            if exact and isinstance(a, RealV) and a.code.is_const \
                    and isinstance(d, RealV) and d.code.is_const:
                ok &= a.code.value == d.code.value
            else:
                ok &= _values_equal_unrefuted(a, d)
        rep.add(ok, name, sample, "decoded code run equals value run"
                + (" exactly" if exact else " (unrefuted)"))
    return rep


# ---------------------------------------------------------------------------
# Theorem B machinery: modulus of continuity and the approximant G


@dataclass
class LUCModulus:
    """Ball cover of the domain with a modulus of local uniform continuity."""

    cover: Callable[[int], tuple[int, int]]  # i -> (center index, radius exp)
    lu: Callable[[int, int], int]            # (ball, precision) -> input precision
    cover_size_hint: int = 64


@dataclass
class EffOpenCover:
    cover: Callable[[int], tuple[int, int]]
    relation: str = "equal"  # to dom(F): "equal" (strong) or "superset"
    cover_size_hint: int = 64


def _radius(l: int) -> Fraction:
    """2^-l, allowing negative exponents (balls wider than 1)."""
    return Fraction(1, 1 << l) if l >= 0 else Fraction(1 << -l)


def _dist_below(x: Value, center: Value, bound: Fraction, prec: int,
                fuel: Fuel) -> Optional[bool]:
    """Certify d(x, center) < bound (True), >= refuted (False), or unknown."""
    code = abs_diff_code(x.code, center.code)
    if code.is_const:
        fuel.take()
        return code.value < bound
    try:
        lo, hi = code.interval(prec, fuel)
    except CodeProducerError:
        return None
    if hi < bound:
        return True
    if lo > bound:
        return False
    return None


def adequacy_mc(F_cover: LUCModulus, alpha: Enumeration, x: Value, n: int,
                strat=None, fuel: Optional[Fuel] = None) -> Verdict:
    """Modulus of continuity at x: find a cover ball containing x, a gap
    exponent d0 with d(x, center) + 2^-d0 < 2^-l, and return
    max(d0, LU(i, n)). Diverges (fuel) off the covered domain."""
    fuel = fuel if fuel is not None else Fuel(200_000)
    stage = 0
    while fuel.take():
        for i in range(min(stage + 1, F_cover.cover_size_hint)):
            k_i, l_i = F_cover.cover(i)
            center = alpha.decode("real", k_i)
            radius = _radius(l_i)
            hit = _dist_below(x, center, radius, stage, fuel)
            if hit:
                for d0 in range(1, stage + 2):
                    gap = _dist_below(x, center, radius - Fraction(1, 1 << d0),
                                      stage + d0, fuel)
                    if gap:
                        return Converged(nat_value(max(d0, F_cover.lu(i, n))))
        stage += 1
    return FUEL_EXHAUSTED


def adequacy_g(f: TrackingFn, F_cover: LUCModulus, alpha: Enumeration,
               registry: CodeRegistry, x: Value, n: int,
               strat=None, fuel: Optional[Fuel] = None) -> Verdict:
    """The approximant G_n(x): within 2^-n of F(x) for x in the domain.

    Steps: modulus M at precision n+1; dovetailed search for an index k with
    d(alpha(k), x) < 2^-M and f defined on the constant code of alpha(k);
    then return alpha({f(e_con[k])}(n+1))."""
    import heapq

    fuel = fuel if fuel is not None else Fuel(500_000)
    mc = adequacy_mc(F_cover, alpha, x, n + 1, strat, fuel)
    if mc.tag != "ok":
        return mc
    M = mc.value.n
    eps = Fraction(1, 1 << M)
    visit = strat.visit if isinstance(strat, Dovetail) else (lambda s: s)
    stage = 0
    retry: list[tuple[int, int]] = []
    while fuel.take():
        batch = [visit(stage)]
        while retry and retry[0][0] <= stage:
            batch.append(heapq.heappop(retry)[1])
        for k in batch:
            near = _dist_below(x, alpha.decode("real", k), eps,
                               max(M + 2, stage), fuel)
            if near is None:
                heapq.heappush(retry, (max(stage * 2, stage + 1), k))
                continue
            if not near:
                continue
            e_con = registry.mint(ConstCode(alpha.decode("real", k).code.value))
            run = f((NatV(e_con),), fuel.spawn(stage + 1))
            if run.tag == "ok":
                e_prime = registry.code(run.value.n)
                y = ecode_eval(e_prime, n + 1, fuel)
                return Converged(rat_value(y))
            heapq.heappush(retry, (max(stage * 2, stage + 1), k))
        stage += 1
    return FUEL_EXHAUSTED


def effective_open_membership(cover: EffOpenCover, e: ECode,
                              alpha: Enumeration, fuel: Fuel) -> Verdict:
    """Semi-decide membership of the coded point in the cover union."""
    stage = 0
    while fuel.take():
        for i in range(min(stage + 1, cover.cover_size_hint)):
            k_i, l_i = cover.cover(i)
            center = alpha.decode("real", k_i)
            hit = _dist_below(RealV(e), center, _radius(l_i),
                              stage, fuel)
            if hit:
                return Converged(TT)
        stage += 1
    return FUEL_EXHAUSTED


def strictify_tracking(f: TrackingFn, cover: EffOpenCover,
                       alpha: Enumeration, registry: CodeRegistry) -> TrackingFn:
    """f'(e) = f(e) after semi-deciding that the coded point lies in the
    (declared-equal-to-domain) cover; strict by construction."""

    def rule(args, fuel: Fuel) -> Verdict:
        member = effective_open_membership(cover, registry.code(args[0].n),
                                           alpha, fuel)
        if member.tag != "ok":
            return member
        return f(args, fuel)

    return TrackingFn(rule, domain_note=f"cover {cover.relation} to dom(F)")
