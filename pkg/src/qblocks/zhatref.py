"""Reference q-series oracle from negative-definite plumbing trees.

A Seifert homology sphere is realized as a star-shaped plumbing tree
via negative continued fractions; the invariant series is a lattice sum
over the unimodular linking form, with the symmetric (principal-value)
Laurent expansion regularizing the vertex factors of valence three and
higher.  A matcher then looks for an exact rational linear combination
of candidate series reproducing the oracle up to one global q-power.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, prod

from .errors import QBlocksError, AmbiguousMatchError
from .exactlin import det_fraction, invert_matrix, sqrt_upper, solve_linear
from . import qser
from .qser import QSeries


@dataclass(frozen=True)
class PlumbingGraph:
    framings: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def n_vertices(self) -> int:
        return len(self.framings)

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def linking_matrix(self) -> list[list[int]]:
        n = self.n_vertices
        m = [[0] * n for _ in range(n)]
        for i, f in enumerate(self.framings):
            m[i][i] = f
        for a, b in self.edges:
            m[a][b] = m[b][a] = 1
        return m

    def to_json_dict(self) -> dict:
        return {"framings": list(self.framings),
                "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PlumbingGraph":
        return make_plumbing(data["framings"], [tuple(e) for e in data["edges"]])


def make_plumbing(framings, edges) -> PlumbingGraph:
    """Validated tree with negative-definite, unimodular linking matrix."""
    framings = tuple(int(f) for f in framings)
    edges = tuple((int(a), int(b)) for a, b in edges)
    n = len(framings)
    if len(edges) != n - 1:
        raise QBlocksError("plumbing graph must be a tree (|E| = |V| - 1)")
    adj = [[] for _ in range(n)]
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise QBlocksError(f"bad edge ({a}, {b})")
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        raise QBlocksError("plumbing graph must be connected")
    g = PlumbingGraph(framings, edges)
    m = g.linking_matrix()
    det = Fraction(1)
    for k in range(1, n + 1):
        minor = det_fraction([[Fraction(m[i][j]) for j in range(k)] for i in range(k)])
        if minor * (-1) ** k <= 0:
            raise QBlocksError("linking matrix is not negative definite")
        det = minor
    if abs(det) != 1:
        raise QBlocksError(f"|det M| = {abs(det)}; not an integer homology sphere")
    return g


@dataclass(frozen=True)
class SeifertData:
    fibers: tuple[int, ...]


def negative_continued_fraction(num: int, den: int) -> list[int]:
    """num/den = a1 - 1/(a2 - 1/(...)) with all a_i >= 2, for num > den >= 1."""
    if not num > den >= 1:
        raise QBlocksError("expected num > den >= 1")
    out = []
    x = Fraction(num, den)
    while True:
        a = -((-x.numerator) // x.denominator)  # ceil
        out.append(a)
        if x == a:
            break
        x = 1 / (a - x)
    if any(a < 2 for a in out):
        raise AssertionError("continued fraction produced an entry below 2")
    return out


def seifert_to_plumbing(data: SeifertData | tuple) -> PlumbingGraph:
    """Star-shaped plumbing for the Seifert sphere with the given fibers.

    The central framing b0 and the leg parameters q_j solve
    b0 + sum q_j / s_j = -1 / (s_1 ... s_k) with 0 < q_j < s_j; each leg
    is the negative continued fraction of s_j / q_j.
    """
    fibers = tuple(data.fibers) if isinstance(data, SeifertData) else tuple(data)
    if len(fibers) < 3:
        raise QBlocksError("at least three exceptional fibers are required")
    if any(s < 2 for s in fibers):
        raise QBlocksError("fibers must be >= 2")
    for i in range(len(fibers)):
        for j in range(i + 1, len(fibers)):
            if gcd(fibers[i], fibers[j]) != 1:
                raise QBlocksError("fibers must be pairwise coprime")
    total = prod(fibers)
    qs = []
    for s in fibers:
        rest = total // s
        q = (-pow(rest, -1, s)) % s
        if q == 0:
            raise AssertionError("leg parameter vanished for coprime data")
        qs.append(q)
    b0_num = -1 - sum(q * (total // s) for q, s in zip(qs, fibers))
    if b0_num % total:
        raise AssertionError("central framing did not come out integral")
    b0 = b0_num // total
    framings = [b0]
    edges = []
    for s, q in zip(fibers, qs):
        prev = 0
        for a in negative_continued_fraction(s, q):
            framings.append(-a)
            edges.append((prev, len(framings) - 1))
            prev = len(framings) - 1
    return make_plumbing(framings, edges)


def vertex_factor_support(degree: int, max_abs: int) -> dict[int, Fraction]:
    """Laurent coefficients of (z - 1/z)^(2 - degree), |exponent| <= max_abs.

    For degree <= 2 this is a Laurent polynomial; for degree >= 3 the
    two geometric expansions (inside and outside the unit circle) are
    averaged, which is the symmetric principal-value prescription.
    """
    e = 2 - degree
    out: dict[int, Fraction] = {}
    if e >= 0:
        for k in range(e + 1):
            out[2 * k - e] = Fraction((-1) ** (e - k) * comb(e, k))
    else:
        m = -e
        j = 0
        while m + 2 * j <= max_abs:
            c = Fraction(comb(m + j - 1, j), 2)
            out[-(m + 2 * j)] = c
            out[m + 2 * j] = (-1) ** m * c
            j += 1
    return {k: v for k, v in out.items() if abs(k) <= max_abs and v != 0}


def zhat_series(graph: PlumbingGraph, trunc) -> QSeries:
    """The homological-block series of a negative-definite unimodular tree.

    q^c0 * sum over lattice vectors ell (congruent to the degree vector
    mod 2) of prod_v F_v(ell_v) * q^(-(ell, M^-1 ell)/4), truncated; the
    enumeration box is certified from the positive definiteness of the
    quadratic form.
    """
    trunc = Fraction(trunc)
    m = graph.linking_matrix()
    n = graph.n_vertices
    minv = invert_matrix(m)
    for row in minv:
        for v in row:
            if Fraction(v).denominator != 1:
                raise AssertionError("unimodular matrix with non-integral inverse")
    trace = sum(m[i][i] for i in range(n))
    signature = -n  # negative definite
    c0 = Fraction(-(3 * signature + trace), 4)
    if trunc < c0:
        return qser.zero(trunc)
    # -(ell, M^-1 ell)/4 >= |ell|^2 / (4 lambda_max(-M)); Gershgorin bound.
    degs = graph.degrees()
    lam_max = max(-m[i][i] + degs[i] for i in range(n))
    budget = trunc - c0
    max_abs = int(sqrt_upper(4 * budget * lam_max)) + 1
    supports = [vertex_factor_support(d, max_abs) for d in degs]
    for d, sup in zip(degs, supports):
        if not sup:
            raise QBlocksError("empty vertex factor support; increase truncation")
    terms: dict[Fraction, Fraction] = {}
    for ell in itertools.product(*(sorted(s) for s in supports)):
        coeff = prod(supports[v][ell[v]] for v in range(n))
        quad = Fraction(0)
        for i in range(n):
            if ell[i]:
                row = minv[i]
                quad += ell[i] * sum(row[j] * ell[j] for j in range(n) if ell[j])
        expo = c0 - quad / 4
        if expo <= trunc:
            terms[expo] = terms.get(expo, 0) + coeff
    int_terms: dict[Fraction, int] = {}
    for e, c in terms.items():
        if c == 0:
            continue
        if Fraction(c).denominator != 1:
            raise AssertionError("half-integer coefficient survived symmetrization")
        int_terms[e] = int(c)
    denom = 1
    for e in int_terms:
        denom = denom * e.denominator // gcd(denom, e.denominator)
    scaled = {e.numerator * (denom // e.denominator): c for e, c in int_terms.items()}
    return QSeries(denom, scaled, trunc)


@dataclass
class MatchResult:
    shift: Fraction
    coeffs: list[Fraction]
    fit_window: Fraction
    verify_window: Fraction
    residual_nonzero_terms: int

    def to_json_dict(self) -> dict:
        return {
            "shift": str(self.shift),
            "coeffs": [str(c) for c in self.coeffs],
            "fit_window": str(self.fit_window),
            "verify_window": str(self.verify_window),
            "residual_nonzero_terms": self.residual_nonzero_terms,
        }


@dataclass
class NoMatch:
    best_shift: Fraction | None
    best_residual: int | None

    def to_json_dict(self) -> dict:
        return {
            "match": False,
            "best_shift": None if self.best_shift is None else str(self.best_shift),
            "best_residual": self.best_residual,
        }


def _grid(series: QSeries, shift: Fraction, window: Fraction) -> dict[Fraction, int]:
    return {Fraction(e, series.denom) + shift: c for e, c in series.terms.items()
            if Fraction(e, series.denom) + shift <= window}


def match_linear_combination(candidates: list[QSeries], target: QSeries,
                             fit_window, verify_window):
    """Exact-coefficient match of target against shifted candidates.

    Tries global shifts given by differences of minimal exponents; for
    each, solves the exact linear system on all exponents up to
    fit_window, then verifies exact agreement up to verify_window.
    Returns a MatchResult, or NoMatch with the best residual seen.  An
    underdetermined consistent fit raises AmbiguousMatchError.
    """
    fit_window = Fraction(fit_window)
    verify_window = Fraction(verify_window)
    if verify_window < fit_window:
        raise QBlocksError("verify window must contain the fit window")
    etas = {s.eta_power for s in candidates} | {target.eta_power}
    if len(etas) > 1:
        candidates = [qser.expand_eta(s) for s in candidates]
        target = qser.expand_eta(target)
    if target.is_zero():
        raise QBlocksError("empty target")
    if any(c.trunc < verify_window for c in candidates):
        raise QBlocksError("candidate series truncated below the verify window")
    t_min = target.min_exponent()
    shifts = sorted({t_min - c.min_exponent() for c in candidates
                     if c.min_exponent() is not None})
    best: tuple[int, Fraction] | None = None
    for shift in shifts:
        if target.trunc - shift < verify_window:
            raise QBlocksError("target series truncated below the verify window")
        shifted_target = _grid(target, -shift, verify_window)
        cand_grids = [_grid(c, Fraction(0), verify_window) for c in candidates]
        fit_exps = sorted({e for g in cand_grids for e in g if e <= fit_window}
                          | {e for e in shifted_target if e <= fit_window})
        matrix = [[g.get(e, 0) for g in cand_grids] for e in fit_exps]
        rhs = [shifted_target.get(e, 0) for e in fit_exps]
        sol, nullspace, consistent = solve_linear(matrix, rhs)
        if not consistent:
            continue
        if nullspace:
            raise AmbiguousMatchError(
                f"fit window {fit_window} leaves {len(nullspace)} free directions",
                nullspace)
        verify_exps = sorted({e for g in cand_grids for e in g} | set(shifted_target))
        residual = 0
        for e in verify_exps:
            lhs = sum(c * g.get(e, 0) for c, g in zip(sol, cand_grids))
            if lhs != shifted_target.get(e, 0):
                residual += 1
        if residual == 0:
            return MatchResult(shift, sol, fit_window, verify_window, 0)
        if best is None or residual < best[0]:
            best = (residual, shift)
    if best is None:
        return NoMatch(None, None)
    return NoMatch(best[1], best[0])
