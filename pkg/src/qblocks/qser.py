"""Exact sparse q-series with rational exponents.

A series is a finite table of terms ``c * q^(e/denom)`` with integer
coefficients, an explicit truncation bound ``trunc`` (terms with exponent
above the bound are meaningless and never stored), and an integer
``eta_power`` recording a symbolic prefactor eta(q)^k that is carried
along instead of being multiplied out.  All arithmetic is exact.

Two series compare equal when, after rebasing to a common exponent
denominator and a common eta power, their term tables agree on the
overlap of their truncation ranges.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .errors import QBlocksError


def _normalized(denom: int, terms: dict[int, int], trunc: Fraction):
    if denom <= 0:
        raise ValueError("denominator must be positive")
    terms = {e: c for e, c in terms.items() if c != 0 and Fraction(e, denom) <= trunc}
    g = denom
    for e in terms:
        g = gcd(g, e)
        if g == 1:
            break
    if g > 1:
        denom //= g
        terms = {e // g: c for e, c in terms.items()}
    return denom, terms


@dataclass
class QSeries:
    denom: int
    terms: dict[int, int]
    trunc: Fraction
    eta_power: int = 0

    def __post_init__(self):
        self.trunc = Fraction(self.trunc)
        self.denom, self.terms = _normalized(self.denom, self.terms, self.trunc)

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponent(self) -> Fraction | None:
        if not self.terms:
            return None
        return Fraction(min(self.terms), self.denom)

    def coefficient(self, exponent) -> int:
        e = Fraction(exponent) * self.denom
        if e.denominator != 1:
            return 0
        return self.terms.get(e.numerator, 0)

    def items(self) -> list[tuple[Fraction, int]]:
        """Terms as (exponent, coefficient) pairs, exponents ascending."""
        return [(Fraction(e, self.denom), self.terms[e]) for e in sorted(self.terms)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self, other
        if a.eta_power != b.eta_power:
            k = min(a.eta_power, b.eta_power)
            a = mul(strip_eta(a), eta_power_series(a.eta_power - k, a.trunc))
            b = mul(strip_eta(b), eta_power_series(b.eta_power - k, b.trunc))
        window = min(a.trunc, b.trunc)
        d = lcm(a.denom, b.denom)
        ta = {e * (d // a.denom): c for e, c in a.terms.items()
              if Fraction(e, a.denom) <= window}
        tb = {e * (d // b.denom): c for e, c in b.terms.items()
              if Fraction(e, b.denom) <= window}
        return ta == tb

    # -- operator sugar (thin wrappers over the module functions) --------

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return scale(self, -1)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "denom": self.denom,
            "eta_power": self.eta_power,
            "trunc": str(self.trunc),
            "terms": [[e, self.terms[e]] for e in sorted(self.terms)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(", ", ": "))

    @classmethod
    def from_json_dict(cls, data: dict) -> "QSeries":
        return cls(
            denom=int(data["denom"]),
            terms={int(e): int(c) for e, c in data["terms"]},
            trunc=Fraction(data["trunc"]),
            eta_power=int(data.get("eta_power", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_json_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["exponent", "coefficient"])
        for e, c in self.items():
            writer.writerow([str(e), c])
        return buf.getvalue()


def zero(trunc, eta_power: int = 0) -> QSeries:
    return QSeries(1, {}, Fraction(trunc), eta_power)


def monomial(exponent, coeff: int, trunc, eta_power: int = 0) -> QSeries:
    """Single-term series coeff * q^exponent (empty if beyond the bound)."""
    e = Fraction(exponent)
    return QSeries(e.denominator, {e.numerator: int(coeff)}, Fraction(trunc), eta_power)


def add(a: QSeries, b: QSeries) -> QSeries:
    if a.eta_power != b.eta_power:
        raise QBlocksError(
            f"cannot add series with eta powers {a.eta_power} and {b.eta_power}")
    d = lcm(a.denom, b.denom)
    terms = {e * (d // a.denom): c for e, c in a.terms.items()}
    for e, c in b.terms.items():
        k = e * (d // b.denom)
        terms[k] = terms.get(k, 0) + c
    return QSeries(d, terms, min(a.trunc, b.trunc), a.eta_power)


def scale(a: QSeries, c) -> QSeries:
    c = Fraction(c)
    if c == 0:
        return zero(a.trunc, a.eta_power)
    terms = {}
    for e, v in a.terms.items():
        w = c * v
        if w.denominator != 1:
            raise QBlocksError(
                f"scaling by {c} makes coefficient of q^{Fraction(e, a.denom)} non-integral")
        terms[e] = w.numerator
    return QSeries(a.denom, terms, a.trunc, a.eta_power)


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product; eta powers add.

    The result bound is the largest exponent up to which the product is
    fully determined by the inputs: min(Ta + mb, Tb + ma) capped at
    min(Ta, Tb), where ma, mb are the minimal exponents.  For series
    supported in q^(>=0) this is just min(Ta, Tb).
    """
    ma, mb = a.min_exponent(), b.min_exponent()
    trunc = min(a.trunc, b.trunc)
    if ma is not None and mb is not None:
        trunc = min(trunc, a.trunc + mb, b.trunc + ma)
    d = lcm(a.denom, b.denom)
    fa, fb = d // a.denom, d // b.denom
    bound = trunc * d
    terms: dict[int, int] = {}
    for ea, ca in a.terms.items():
        ea_s = ea * fa
        for eb, cb in b.terms.items():
            e = ea_s + eb * fb
            if e <= bound:
                terms[e] = terms.get(e, 0) + ca * cb
    return QSeries(d, terms, trunc, a.eta_power + b.eta_power)


def euler_product(trunc) -> QSeries:
    """prod_{n>=1} (1 - q^n) via the pentagonal number expansion."""
    trunc = Fraction(trunc)
    if trunc < 0:
        raise ValueError("truncation bound must be nonnegative")
    terms: dict[int, int] = {}
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e <= trunc:
                terms[e] = terms.get(e, 0) + (-1) ** (kk % 2)
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return QSeries(1, terms, trunc)


def _euler_inverse(trunc: Fraction) -> QSeries:
    # 1 / prod (1 - q^n) = partition generating function.
    n_max = int(trunc)
    parts = [1] + [0] * n_max
    for k in range(1, n_max + 1):
        for n in range(k, n_max + 1):
            parts[n] += parts[n - k]
    return QSeries(1, {n: parts[n] for n in range(n_max + 1)}, trunc)


def eta_power_series(k: int, trunc) -> QSeries:
    """Expansion of eta(q)^k = q^(k/24) * prod (1-q^n)^k, eta_power 0."""
    trunc = Fraction(trunc)
    shift = Fraction(k, 24)
    base_trunc = max(trunc - shift, Fraction(0))
    result = monomial(0, 1, base_trunc)
    if k != 0:
        base = euler_product(base_trunc) if k > 0 else _euler_inverse(base_trunc)
        for _ in range(abs(k)):
            result = mul(result, base)
    out = QSeries(result.denom * shift.denominator,
                  {e * shift.denominator + shift.numerator * result.denom: c
                   for e, c in result.terms.items()},
                  trunc)
    return out


def strip_eta(a: QSeries) -> QSeries:
    return QSeries(a.denom, dict(a.terms), a.trunc, 0)


def expand_eta(a: QSeries) -> QSeries:
    """Multiply the symbolic eta prefactor out; result has eta_power 0."""
    if a.eta_power == 0:
        return a
    return mul(strip_eta(a), eta_power_series(a.eta_power, a.trunc))


def false_theta(p: int, a: int, trunc) -> QSeries:
    """The false theta function with half-period p and offset a in [0, 2p].

    sum_{n>=0} q^((2pn+a)^2/4p) - q^((2pn+2p-a)^2/4p), truncated.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    if not 0 <= a <= 2 * p:
        raise ValueError("offset must lie in [0, 2p]")
    trunc = Fraction(trunc)
    terms: dict[int, int] = {}
    bound = trunc * 4 * p
    n = 0
    while True:
        e_plus = (2 * p * n + a) ** 2
        e_minus = (2 * p * n + 2 * p - a) ** 2
        if min(e_plus, e_minus) > bound:
            break
        if e_plus <= bound:
            terms[e_plus] = terms.get(e_plus, 0) + 1
        if e_minus <= bound:
            terms[e_minus] = terms.get(e_minus, 0) - 1
        n += 1
    return QSeries(4 * p, terms, trunc)
