"""
Exact univariate polynomials over the rationals
Coefficient lists run from the constant term up. Root isolation uses Sturm chains and
bisection, so every reported root is a rational inside a known tiny bracket.
"""

import math
from fractions import Fraction
from typing import List, Optional, Sequence

Poly = List[Fraction]

# bisection halvings after a root is isolated
REFINE_STEPS = 64


def _trim(p: Sequence[Fraction]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    size = max(len(p), len(q))
    return _trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(size)
    )


def poly_sub(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    return poly_add(p, [-c for c in q])


def poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def poly_derivative(p: Sequence[Fraction]) -> Poly:
    return _trim(i * c for i, c in enumerate(p) if i)


def poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    value = Fraction(0)
    for c in reversed(p):
        value = value * x + c
    return value


def _remainder(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    r = _trim(p)
    q = _trim(q)
    lead = q[-1]
    while len(r) >= len(q):
        factor = r[-1] / lead
        shift = len(r) - len(q)
        for i, c in enumerate(q):
            r[shift + i] -= factor * c
        r.pop()
        r = _trim(r)
    return r


def sturm_chain(p: Sequence[Fraction]) -> List[Poly]:
    chain = [_trim(p), poly_derivative(p)]
    while chain[-1]:
        rem = _remainder(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    if not chain[-1]:
        chain.pop()
    return chain


def sign_changes(chain: Sequence[Poly], x: Fraction) -> int:
    changes = 0
    last = 0
    for p in chain:
        v = poly_eval(p, x)
        if v == 0:
            continue
        sign = 1 if v > 0 else -1
        if last and sign != last:
            changes += 1
        last = sign
    return changes


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in [lo, hi]"""
    if lo > hi:
        lo, hi = hi, lo
    floor = math.floor(lo)
    if floor == lo:
        return Fraction(floor)
    if floor + 1 <= hi:
        return Fraction(floor + 1)
    # lo and hi share their integer part
    return floor + 1 / simplest_between(1 / (hi - floor), 1 / (lo - floor))


def _refine(p: Sequence[Fraction], lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    f_lo, f_hi = poly_eval(p, lo), poly_eval(p, hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        # even multiplicity, no sign change
        return None
    for _ in range(REFINE_STEPS):
        mid = (lo + hi) / 2
        f_mid = poly_eval(p, mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return simplest_between(lo, hi)


def _deflate(p: Sequence[Fraction], root: Fraction) -> Poly:
    """p / (x - root) by synthetic division; root must be a root of p"""
    quotient = []
    carry = Fraction(0)
    for c in reversed(p[1:]):
        carry = carry * root + c
        quotient.append(carry)
    return _trim(reversed(quotient))


def _without_root_at(p: Poly, x: Fraction) -> Poly:
    while len(p) > 1 and poly_eval(p, x) == 0:
        p = _deflate(p, x)
    return p


def sign_change_roots(p: Sequence[Fraction], lo: Fraction, hi: Fraction) -> List[Fraction]:
    """Rational approximations of the roots of p in the open interval (lo, hi) where p
    changes sign; an exact rational root comes back exactly when bisection meets it or
    when it is the simplest rational of the final bracket"""
    p = _trim(p)
    if len(p) < 2 or not lo < hi:
        return []
    roots = set()
    pending = [(lo, hi, p)]
    while pending:
        a, b, poly = pending.pop()
        # Sturm counts need ends that are not roots; dividing them out keeps the
        # sign of poly on (a, b) up to a constant factor
        poly = _without_root_at(_without_root_at(poly, a), b)
        if len(poly) < 2:
            continue
        chain = sturm_chain(poly)
        count = sign_changes(chain, a) - sign_changes(chain, b)
        if count == 0:
            continue
        if count == 1:
            root = _refine(poly, a, b)
            if root is not None:
                roots.add(root)
            continue
        mid = (a + b) / 2
        if poly_eval(poly, mid) == 0:
            roots.add(mid)
        pending.append((a, mid, poly))
        pending.append((mid, b, poly))
    return sorted(roots)
