"""Independent oracles for the shipped programs: direct summation, exact
rational interval enclosures, and closed-form root sets. None of these go
through the interpreter; they exist to check it."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def exp_partial_sum(x, m: int) -> Fraction:
    """sum_{i=0}^{m} x^i / i! by direct summation."""
    return exp_partial_sums_at(x, [m])[m]


def exp_partial_sums_at(x, checkpoints) -> dict[int, Fraction]:
    """Partial sums at several checkpoints, in one integer-accumulator pass
    over the common denominator q^m m! (one normalization per checkpoint)."""
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    want = set(checkpoints)
    out = {}
    num, den, pm = 1, 1, 1
    if 0 in want:
        out[0] = Fraction(1)
    for i in range(1, max(want, default=0) + 1):
        pm *= p
        scale = q * i
        num = num * scale + pm
        den *= scale
        if i in want:
            out[i] = Fraction(num, den)
    return out


def exp_enclosure(x, bits: int = 220) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of e^x for 0 <= x <= 1, width < 2^-bits.
    220 bits is beyond 64 decimal digits."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("enclosure implemented for the unit interval")
    m = 2
    fact = 2
    # tail sum_{i>m} x^i/i! <= 2 x^(m+1)/(m+1)! <= 2/(m+1)! for x <= 1
    while 2 * (1 << bits) >= fact:
        m += 1
        fact *= m
    lo = exp_partial_sum(x, m)
    return lo, lo + Fraction(2, fact)


def sqrt_enclosure(a, bits: int = 220) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of sqrt(a), width <= 2^-bits."""
    a = Fraction(a)
    if a < 0:
        raise ValueError("negative radicand")
    lo = Fraction(isqrt((a.numerator << (2 * bits)) * a.denominator),
                  a.denominator << bits)
    return lo, lo + Fraction(1, 1 << bits)


def poly_eval(coeffs, x) -> Fraction:
    """Host-side Horner; coeffs[i] multiplies X^i."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed([Fraction(c) for c in coeffs]):
        acc = acc * x + c
    return acc


def poly_simple_roots(coeffs, lo=-8, hi=8, prec_bits: int = 64,
                      grid_denom: int = 64) -> list[tuple[Fraction, Fraction]]:
    """Enclosures of the sign-change roots of the polynomial in [lo, hi].

    Scans a rational grid for sign changes and bisects each bracket with
    exact midpoint arithmetic down to width 2^-prec_bits. A grid point that
    is itself a root counts when the signs on both sides differ.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    step = Fraction(1, grid_denom)
    pts = []
    x = lo
    while x <= hi:
        pts.append(x)
        x += step
    roots = []
    for a, b in zip(pts, pts[1:]):
        fa, fb = poly_eval(coeffs, a), poly_eval(coeffs, b)
        if fa == 0:
            before = poly_eval(coeffs, a - step / 2)
            if before * fb < 0:
                roots.append((a, a))
            continue
        if fb == 0:
            continue  # handled as the left endpoint of the next cell
        if fa * fb < 0:
            while b - a > Fraction(1, 1 << prec_bits):
                m = (a + b) / 2
                fm = poly_eval(coeffs, m)
                if fm == 0:
                    a = b = m
                    break
                if fm * fa < 0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append((a, b))
    # the right edge: an exact root at hi with a sign change has no right cell
    fhi = poly_eval(coeffs, hi)
    if fhi == 0:
        before = poly_eval(coeffs, hi - step / 2)
        after = poly_eval(coeffs, hi + step / 2)
        if before * after < 0:
            roots.append((hi, hi))
    return roots


def fa_template(a) -> list[Fraction]:
    """Piece coefficients (constant, slope) for the three linear pieces of
    the one-parameter family at parameter a."""
    a = Fraction(a)
    return [a + 2, Fraction(1), a, Fraction(-1), a - 2, Fraction(1)]


def fa_value(a, x) -> Fraction:
    a, x = Fraction(a), Fraction(x)
    if x <= -1:
        return x + a + 2
    if x <= 1:
        return a - x
    return x + a - 2


def fa_roots(a) -> list[Fraction]:
    """The simple (non-repeated) roots of the family member at parameter a,
    in closed form. Repeated roots (|a| = 1) are excluded."""
    a = Fraction(a)
    roots = []
    r1 = -(a + 2)
    if r1 < -1 or (r1 == -1 and a != 1):
        roots.append(r1)
    if -1 < a < 1:
        roots.append(a)
    r3 = 2 - a
    if r3 > 1 or (r3 == 1 and a != 1):
        roots.append(r3)
    # a repeated root is not a sign change; drop duplicates
    out = []
    for r in roots:
        if fa_value(a, r - Fraction(1, 1024)) * fa_value(a, r + Fraction(1, 1024)) < 0:
            if r not in out:
                out.append(r)
    return sorted(out)


def piv_omega(xs) -> set[int]:
    """k is a pivot index iff x_k != 0 (1-indexed)."""
    return {i + 1 for i, x in enumerate(xs) if Fraction(x) != 0}


def least_divisor_oracle(n: int) -> int:
    if n < 2:
        return n
    d = 2
    while n % d:
        d += 1
    return d
