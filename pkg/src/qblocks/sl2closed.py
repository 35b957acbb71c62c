"""Closed-form rank-1 building series, used as an independent oracle.

The series is a binomial-weighted sum over sign vectors with quadratic
exponents; the n-loop terminates once the smallest exponent over all
sign branches exceeds the truncation bound, which is certified because
the branch offsets are positive and grow linearly in n.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, prod

from .errors import QBlocksError
from .blocks import validate_ps
from . import qser


def example3_series(ps, rs_, s: int, trunc) -> qser.QSeries:
    """The displayed rank-1 closed form.

    sum_{n>=0} binom(n+N-1, N-1) sum_{eps in {+-1}^N} prod(eps)
        q^{(p/4) (2n + N + s - 1 - sum eps_i r_i / p_i)^2},
    carrying the symbolic eta(q)^(-1) prefactor.
    """
    ps = validate_ps(ps)
    rs_ = tuple(int(r) for r in rs_)
    if len(rs_) != len(ps):
        raise QBlocksError("one label entry per level is required")
    if any(not 1 <= r <= p for r, p in zip(rs_, ps)):
        raise QBlocksError(f"label entries out of range for levels {ps}: {rs_}")
    if s not in (1, 2):
        raise QBlocksError("s must be 1 or 2")
    trunc = Fraction(trunc)
    n_levels = len(ps)
    p = prod(ps)
    offsets = [Fraction(r, pm) for r, pm in zip(rs_, ps)]
    branches = [([1], Fraction(0))]
    for off in offsets:
        branches = [(signs + [e], acc + e * off)
                    for signs, acc in branches for e in (1, -1)]
    terms: dict[Fraction, int] = {}
    n = 0
    while True:
        base = 2 * n + n_levels + s - 1
        # smallest branch exponent at this n; monotone in n since the
        # argument stays positive (sum r_i/p_i < N <= base).
        low = Fraction(p, 4) * (base - sum(offsets)) ** 2
        if low > trunc:
            break
        for signs, acc in branches:
            expo = Fraction(p, 4) * (base - acc) ** 2
            if expo <= trunc:
                coeff = prod(signs) * comb(n + n_levels - 1, n_levels - 1)
                terms[expo] = terms.get(expo, 0) + coeff
        n += 1
    out = qser.zero(trunc, eta_power=-1)
    denom = 4 * p
    scaled = {}
    for expo, c in terms.items():
        e = expo * denom
        assert e.denominator == 1
        scaled[e.numerator] = scaled.get(e.numerator, 0) + c
    return qser.QSeries(denom, scaled, trunc, eta_power=-1)


def compositions_identity_check(n_levels: int, n_max: int) -> bool:
    """Count compositions of n into N nonnegative parts against the binomial."""
    for n in range(n_max + 1):
        count = _count_compositions(n, n_levels)
        if count != comb(n + n_levels - 1, n_levels - 1):
            return False
    return True


def _count_compositions(n: int, parts: int) -> int:
    if parts == 1:
        return 1
    return sum(_count_compositions(n - k, parts - 1) for k in range(n + 1))


def min_exponent(ps, rs_, s: int) -> Fraction:
    """Smallest exponent of the closed form (attained at n = 0)."""
    ps = validate_ps(ps)
    p = prod(ps)
    offsets = [Fraction(r, pm) for r, pm in zip(rs_, ps)]
    base = len(ps) + s - 1
    best = None
    signs = [(1, -1)] * len(ps)
    for eps in itertools.product(*signs):
        acc = sum(e * o for e, o in zip(eps, offsets))
        expo = Fraction(p, 4) * (base - acc) ** 2
        if best is None or expo < best:
            best = expo
    return best
