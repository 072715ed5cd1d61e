"""Fast Cauchy codes: the concrete representation behind exact real values.

A code denotes a real number through a rule producing, for each n, a rational
within 2^-n of the limit (and within 2^-n of every later entry, exactly):

    |value_at(k) - value_at(n)| < 2^-n   for all k > n.

Constant codes carry an exact rational and all arithmetic between constants
stays exact; derived codes (sum, product, inverse, ...) re-query their
children at shifted precisions chosen so the fast Cauchy bound is preserved.
The module also hosts the Cantor pairing utilities and the rational codecs
used by enumerations, plus the append-only code registry.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Optional

try:  # build normalized results without a full-size gcd where possible
    Fraction(1, 2, _normalize=False)

    def _coprime(n: int, d: int) -> Fraction:
        return Fraction(n, d, _normalize=False)
except TypeError:  # future interpreters: fall back to plain construction
    def _coprime(n: int, d: int) -> Fraction:
        return Fraction(n, d)


def rat_add(a: Fraction, b: Fraction) -> Fraction:
    """Exact a+b with gcds on component-sized integers (Henrici)."""
    na, da = a.numerator, a.denominator
    nb, db = b.numerator, b.denominator
    g = gcd(da, db)
    if g == 1:
        return _coprime(na * db + da * nb, da * db)
    s = da // g
    t = na * (db // g) + nb * s
    g2 = gcd(t, g)
    if g2 == 1:
        return _coprime(t, s * db)
    return _coprime(t // g2, s * (db // g2))


def rat_mul(a: Fraction, b: Fraction) -> Fraction:
    na, da = a.numerator, a.denominator
    nb, db = b.numerator, b.denominator
    g1 = gcd(na, db)
    if g1 > 1:
        na //= g1
        db //= g1
    g2 = gcd(nb, da)
    if g2 > 1:
        nb //= g2
        da //= g2
    return _coprime(na * nb, db * da)


def rat_inv(a: Fraction) -> Fraction:
    n, d = a.numerator, a.denominator
    if n == 0:
        raise ZeroDivisionError("rational inverse of zero")
    return _coprime(d, n) if n > 0 else _coprime(-d, -n)


_ZERO = Fraction(0)


def rat_abs_diff(a: Fraction, b: Fraction) -> Fraction:
    """Exact |a-b| without a full normalization. Ordering comparisons on the
    result are exact (they cross-multiply); equality tests against anything
    but 0 should not assume a canonical representation."""
    num = abs(a.numerator * b.denominator - b.numerator * a.denominator)
    if num == 0:
        return _ZERO
    return _coprime(num, a.denominator * b.denominator)


class CodeProducerError(Exception):
    """A sequence rule failed to produce its n-th entry."""

    def __init__(self, message: str, level: Optional[int] = None):
        super().__init__(message)
        self.level = level


class OutOfFuel(CodeProducerError):
    """The budget died while a producer was still working."""


class FastCauchyError(Exception):
    """Prefix validation found indices violating the fast Cauchy bound."""

    def __init__(self, violations):
        super().__init__(f"fast Cauchy violations at (n, k) pairs: {violations}")
        self.violations = violations


# ---------------------------------------------------------------------------
# fuel


class Fuel:
    """Mutable step budget. A capped child budget drains its parent too."""

    __slots__ = ("remaining", "parent")

    def __init__(self, steps: int, parent: "Fuel | None" = None):
        if steps < 0:
            raise ValueError("fuel must be non-negative")
        self.remaining = steps
        self.parent = parent

    def take(self, n: int = 1) -> bool:
        if self.remaining < n:
            self.remaining = 0
            return False
        if self.parent is not None and not self.parent.take(n):
            self.remaining = 0
            return False
        self.remaining -= n
        return True

    @property
    def dead(self) -> bool:
        return self.remaining <= 0

    def spawn(self, cap: int) -> "Fuel":
        return Fuel(min(cap, self.remaining), parent=self)

    def __repr__(self):
        return f"Fuel({self.remaining})"


SESSION_FUEL = 10_000_000


def _budget(fuel: Optional[Fuel]) -> Fuel:
    return fuel if fuel is not None else Fuel(SESSION_FUEL)


# ---------------------------------------------------------------------------
# pairing and rational codecs


def pair(a: int, b: int) -> int:
    """Cantor diagonal pairing, a bijection N^2 -> N."""
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    # w = floor((sqrt(8n+1)-1)/2) is the diagonal index.
    w = (isqrt(8 * n + 1) - 1) // 2
    t = w * (w + 1) // 2
    b = n - t
    return w - b, b


def rat_decode(k: int) -> Fraction:
    """Canonical enumeration of Q: k -> (sign, numerator, denominator-1)."""
    s, pq = unpair(k)
    p, q0 = unpair(pq)
    r = Fraction(p, q0 + 1)
    return -r if s % 2 == 1 else r


def rat_encode(r: Fraction) -> int:
    """Index of r under rat_decode; rat_decode(rat_encode(r)) == r."""
    r = Fraction(r)
    s = 1 if r < 0 else 0
    return pair(s, pair(abs(r.numerator), r.denominator - 1))


# Program-facing enumeration of Q: dyadics (level-major, window [-8, 8])
# interleaved with the canonical enumeration so search indices stay small
# where the bisection fixtures need them while surjectivity onto Q holds.

DYADIC_WINDOW = 8  # the configurable bisection search window [-W, W]


def _dyadic_decode(m: int) -> Fraction:
    # level 0: the integers in the window; level j >= 1: the dyadics with
    # odd numerator at scale 2^-j (each dyadic is listed exactly once)
    size0 = 2 * DYADIC_WINDOW + 1
    if m < size0:
        return Fraction(m - DYADIC_WINDOW)
    m -= size0
    j = 1
    while True:
        size = DYADIC_WINDOW << j  # odd numerators up to the window edge
        if m < size:
            num = 2 * (m >> 1) + 1
            if m & 1:
                num = -num
            return Fraction(num, 1 << j)
        m -= size
        j += 1


def prog_rat_decode(k: int) -> Fraction:
    if k % 2 == 0:
        return _dyadic_decode(k // 2)
    return rat_decode(k // 2)


def prog_rat_encode(q) -> int:
    """The least index decoding to q (dyadics inside the window live on the
    cheap even side, everything lives on the odd canonical side)."""
    q = Fraction(q)
    best = 2 * rat_encode(q) + 1
    den = q.denominator
    if den & (den - 1) == 0 and abs(q) <= DYADIC_WINDOW:
        j = den.bit_length() - 1
        if j == 0:
            best = min(best, 2 * (int(q) + DYADIC_WINDOW))
        elif abs(q.numerator) <= (DYADIC_WINDOW << j):
            start = 2 * DYADIC_WINDOW + 1 + sum(DYADIC_WINDOW << jj
                                                for jj in range(1, j))
            t = (abs(q.numerator) - 1) // 2
            idx = start + 2 * t + (1 if q < 0 else 0)
            best = min(best, 2 * idx)
    return best


# ---------------------------------------------------------------------------
# codes


class ECode:
    """A fast Cauchy representative of a real number."""

    __slots__ = ("_cache",)

    def __init__(self):
        self._cache: dict[int, Fraction] = {}

    def approx(self, n: int, fuel: Optional[Fuel] = None) -> Fraction:
        """The n-th rational of the sequence; within 2^-n of the limit."""
        v = self._cache.get(n)
        if v is None:
            v = self._compute(n, _budget(fuel))
            self._cache[n] = v
        return v

    def _compute(self, n: int, fuel: Fuel) -> Fraction:
        raise NotImplementedError

    @property
    def is_const(self) -> bool:
        return False

    def interval(self, n: int, fuel: Optional[Fuel] = None) -> tuple[Fraction, Fraction]:
        v = self.approx(n, fuel)
        h = Fraction(1, 1 << n)
        return v - h, v + h


class ConstCode(ECode):
    """Constant sequence: the exact-rational shortcut."""

    __slots__ = ("value",)

    def __init__(self, value):
        super().__init__()
        self.value = Fraction(value)

    def _compute(self, n, fuel):
        return self.value

    def approx(self, n, fuel=None):
        return self.value

    @property
    def is_const(self):
        return True

    def __repr__(self):
        return f"ConstCode({self.value})"


class RuleCode(ECode):
    """Code backed by an arbitrary rule n -> rational (builtin sequences)."""

    __slots__ = ("rule", "name")

    def __init__(self, rule: Callable[[int], Fraction], name: str = "rule"):
        super().__init__()
        self.rule = rule
        self.name = name

    def _compute(self, n, fuel):
        if not fuel.take():
            raise OutOfFuel(f"{self.name}: out of fuel at level {n}", n)
        return Fraction(self.rule(n))

    def __repr__(self):
        return f"RuleCode({self.name})"


class SumCode(ECode):
    __slots__ = ("x", "y")

    def __init__(self, x: ECode, y: ECode):
        super().__init__()
        self.x, self.y = x, y

    def _compute(self, n, fuel):
        return self.x.approx(n + 2, fuel) + self.y.approx(n + 2, fuel)


class NegCode(ECode):
    __slots__ = ("x",)

    def __init__(self, x: ECode):
        super().__init__()
        self.x = x

    def _compute(self, n, fuel):
        return -self.x.approx(n, fuel)


class AbsDiffCode(ECode):
    """|x - y|: the real metric, 1-Lipschitz in both arguments."""

    __slots__ = ("x", "y")

    def __init__(self, x: ECode, y: ECode):
        super().__init__()
        self.x, self.y = x, y

    def _compute(self, n, fuel):
        return abs(self.x.approx(n + 2, fuel) - self.y.approx(n + 2, fuel))


class MulCode(ECode):
    __slots__ = ("x", "y", "_shift")

    def __init__(self, x: ECode, y: ECode):
        super().__init__()
        self.x, self.y = x, y
        self._shift: Optional[int] = None

    def _compute(self, n, fuel):
        if self._shift is None:
            # 2^s >= |x| + |y| + 1, using |.| <= |.(0)| + 1.
            bound = abs(self.x.approx(0, fuel)) + abs(self.y.approx(0, fuel)) + 3
            s = 0
            while (1 << s) < bound:
                s += 1
            self._shift = s
        k = n + self._shift + 1
        return self.x.approx(k, fuel) * self.y.approx(k, fuel)


class InvCode(ECode):
    """1/x given a separation witness m with |x| > 2^-m."""

    __slots__ = ("x", "m")

    def __init__(self, x: ECode, m: int):
        super().__init__()
        self.x = x
        self.m = m

    def _compute(self, n, fuel):
        k = n + 2 * self.m + 2
        v = self.x.approx(k, fuel)
        if v == 0:
            raise CodeProducerError("inverse witness violated: sequence hit 0", n)
        return 1 / v


class DiagonalCode(ECode):
    """Diagonal over a rule n -> code, shifted by 2 to restore fast Cauchy.

    The caller promises level-n codes have limits within 2^-n of a common
    target; then value_at(n) = levels(n+2).approx(n+2) converges fast to it.
    """

    __slots__ = ("levels",)

    def __init__(self, levels: Callable[[int], ECode]):
        super().__init__()
        self.levels = levels

    def _compute(self, n, fuel):
        m = n + 2
        code = self.levels(m)
        if code is None:
            raise CodeProducerError("diagonal level producer failed", m)
        return code.approx(m, fuel)


def _const(value: Fraction) -> ConstCode:
    c = ConstCode.__new__(ConstCode)
    ECode.__init__(c)
    c.value = value
    return c


def add_codes(x: ECode, y: ECode) -> ECode:
    if x.is_const and y.is_const:
        return _const(rat_add(x.value, y.value))
    return SumCode(x, y)


def neg_code(x: ECode) -> ECode:
    if x.is_const:
        return _const(-x.value)
    return NegCode(x)


def sub_codes(x: ECode, y: ECode) -> ECode:
    return add_codes(x, neg_code(y))


def mul_codes(x: ECode, y: ECode) -> ECode:
    if x.is_const and y.is_const:
        return _const(rat_mul(x.value, y.value))
    return MulCode(x, y)


def abs_diff_code(x: ECode, y: ECode) -> ECode:
    if x.is_const and y.is_const:
        return _const(abs(rat_add(x.value, -y.value)))
    return AbsDiffCode(x, y)


def separation_witness(x: ECode, fuel: Fuel) -> Optional[int]:
    """Search m with |x| > 2^-m by refinement; None when fuel runs out.

    Never returns for an exact zero; callers decide that case separately
    (constants are inspected directly).
    """
    n = 0
    while fuel.take():
        try:
            v = x.approx(n, fuel)
        except OutOfFuel:
            return None
        if abs(v) > Fraction(2, 1 << n):  # |x| >= |v| - 2^-n > 2^-n
            return n
        n += 1
    return None


def inv_code(x: ECode, fuel: Fuel) -> tuple[Optional[ECode], str]:
    """Build 1/x. Returns (code, "ok"), (None, "zero") or (None, "fuel")."""
    if x.is_const:
        if x.value == 0:
            return None, "zero"
        return _const(rat_inv(x.value)), "ok"
    m = separation_witness(x, fuel)
    if m is None:
        return None, "fuel"
    return InvCode(x, m), "ok"


# ---------------------------------------------------------------------------
# builtin named codes


def _sqrt_rat_floor(a: Fraction, bits: int) -> Fraction:
    """floor(sqrt(a) * 2^bits) / 2^bits for a >= 0, exactly."""
    num = a.numerator << (2 * bits)
    return Fraction(isqrt(num * a.denominator), a.denominator << bits)


def sqrt_code(a) -> ECode:
    """Code for sqrt(a), a a non-negative rational (nested dyadic intervals)."""
    a = Fraction(a)
    if a < 0:
        raise ValueError("sqrt of a negative rational")

    def rule(n: int) -> Fraction:
        return _sqrt_rat_floor(a, n + 2)

    return RuleCode(rule, name=f"sqrt({a})")


def e_code() -> ECode:
    """Code for Euler's number via factorial-series partial sums."""

    def rule(n: int) -> Fraction:
        m = n + 3  # tail sum_{i>m} 1/i! < 2/(m+1)! <= 2^-(n+1)
        s = Fraction(0)
        t = Fraction(1)
        for i in range(m + 1):
            if i > 0:
                t /= i
            s += t
        return s

    return RuleCode(rule, name="e")


# ---------------------------------------------------------------------------
# registry (the Goedel table: pairing plus an append-only index store)


VALIDATION_PREFIX = 14


def check_fast_cauchy_prefix(code: ECode, upto: int = VALIDATION_PREFIX,
                             fuel: Optional[Fuel] = None) -> list[tuple[int, int]]:
    """Exact-rational check of |v(k) - v(n)| < 2^-n on a finite prefix."""
    budget = _budget(fuel)
    vals = [code.approx(i, budget) for i in range(upto + 1)]
    bad = []
    for n in range(min(12, upto)):
        for k in range(n + 1, upto + 1):
            if abs(vals[k] - vals[n]) >= Fraction(1, 1 << n):
                bad.append((n, k))
    return bad


class CodeRegistry:
    """Append-only store mapping natural indices to sequence rules.

    Indices are stable within a session; membership of an index in the code
    space is only ever validated on a finite prefix (the full predicate is
    undecidable). Internally minted arithmetic codes skip the prefix check:
    they are fast Cauchy by construction.
    """

    def __init__(self):
        self._codes: list[ECode] = []
        self._programs: dict[str, Callable[[int, int, Fuel], Fraction]] = {}
        self._named: dict[str, int] = {}
        self.register(ConstCode(0))  # index 0: the default real

    def __len__(self):
        return len(self._codes)

    def mint(self, code: ECode) -> int:
        """Register a construction-derived code without prefix validation."""
        self._codes.append(code)
        return len(self._codes) - 1

    def register(self, code: ECode, validate: bool = False,
                 prefix: int = VALIDATION_PREFIX, fuel: Optional[Fuel] = None) -> int:
        if validate:
            bad = check_fast_cauchy_prefix(code, prefix, fuel)
            if bad:
                raise FastCauchyError(bad)
        return self.mint(code)

    def code(self, index: int) -> ECode:
        return self._codes[index]

    def const(self, q) -> int:
        return self.mint(ConstCode(q))

    # named builtin codes (CLI input literals)

    def named(self, name: str) -> int:
        idx = self._named.get(name)
        if idx is None:
            if name == "sqrt2":
                idx = self.mint(sqrt_code(2))
            elif name == "e":
                idx = self.mint(e_code())
            else:
                raise KeyError(f"unknown named code {name!r}")
            self._named[name] = idx
        return idx

    # stored program rules ({e}(n) realized by a WhileCC* program over N)

    def add_program(self, program_id: str,
                    runner: Callable[[int, int, Fuel], Fraction]) -> None:
        """runner(arg, n, fuel) -> n-th rational of the sequence."""
        self._programs[program_id] = runner

    def program_code(self, program_id: str, arg: int) -> ECode:
        runner = self._programs[program_id]

        class _ProgCode(ECode):
            __slots__ = ()

            def _compute(self, n, fuel):
                return runner(arg, n, fuel)

        c = _ProgCode()
        return c

    # serialization for test fixtures

    def parse_code(self, text: str) -> ECode:
        kind, _, rest = text.partition(":")
        if kind == "const":
            return ConstCode(Fraction(rest))
        if kind == "prog":
            pid, _, arg = rest.rpartition(":")
            return self.program_code(pid, int(arg))
        raise ValueError(f"unparseable code literal {text!r}")

    @staticmethod
    def format_code(code: ECode) -> str:
        if code.is_const:
            return f"const:{code.value}"
        raise ValueError("only constant codes have a canonical serialization")
