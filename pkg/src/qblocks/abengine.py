"""Euler-characteristic transform and the iterated character engine.

The transform turns a family of weight-space characters into the signed
Weyl-group sum over dot-action translates, weighted by irreducible
dimensions.  Iterating it on the lattice building data collapses (after
taking a single distinguished weight space) into a finite sum over a
box of nonnegative root-lattice vectors times tuples of Weyl elements;
the box is certified complete from the quadratic growth of the
exponents before any term is evaluated.

Both printed forms of the iterated sum are implemented: the convolution
form driven by the partition function, and the multiplicity form driven
by nested weight-multiplicity sums.  They are compared term by term in
the test suite rather than trusted to agree.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import lcm, prod

import numpy as np

from .errors import QBlocksError, TruncationError
from . import qser, rootsys, repdata
from .blocks import BlockLabel, ShiftedLabel, star_act, star_orbit_label
from .exactlin import min_eigenvalue_lower, sqrt_upper
from .rootsys import (
    RootSystem, Weight, add_weights, sub_weights, scale_weight, norm_sq,
    weyl_group, longest_element, dot_action, is_dominant, is_integral,
    weight_to_root, zero_weight,
)

MAX_GROUP_TUPLES = 2_000_000


def atiyah_bott_euler(rs: RootSystem, charfam, trunc, beta_bound: int,
                      weyl_bound: int = rootsys.DEFAULT_WEYL_BOUND) -> qser.QSeries:
    """Signed fixed-point sum of a weight-space character family.

    ``charfam`` maps a weight to a QSeries (or None for zero).  Dominant
    weights are enumerated with fundamental coordinates up to
    ``beta_bound``; the caller certifies that no dominant weight outside
    that range contributes below the truncation bound.
    """
    trunc = Fraction(trunc)
    group = weyl_group(rs, weyl_bound)
    acc: qser.QSeries | None = None
    for coords in itertools.product(range(beta_bound + 1), repeat=rs.rank):
        beta = tuple(Fraction(c) for c in coords)
        dim = repdata.weyl_dim(rs, beta)
        for w in group:
            val = charfam(dot_action(rs, w, beta))
            if val is None or val.is_zero():
                continue
            val = qser.scale(val, dim * w.sign)
            acc = val if acc is None else qser.add(acc, val)
    if acc is None:
        return qser.zero(trunc)
    return qser.QSeries(acc.denom, dict(acc.terms), min(acc.trunc, trunc), acc.eta_power)


def _level_actions(label: BlockLabel, weyl_bound: int):
    """star_act of every group element on every level label.

    The first level is pre-acted by the longest element (its integral
    part discarded) before the per-element action is applied.
    """
    rs = label.rs
    group = weyl_group(rs, weyl_bound)
    labels = label.shifted_labels()
    w0 = longest_element(rs, weyl_bound)
    bases = [star_orbit_label(rs, w0, labels[0])] + labels[1:]
    return group, [[star_act(rs, w, base) for w in group] for base in bases]


def _tuple_data(label: BlockLabel, group, actions):
    """Per Weyl-tuple sign and displacement data for the quadratic form.

    For the tuple (w_1..w_N) the h-weight is gamma + lhat + (N-1) rho
    - sum eps_i and the exponent is (p/2)|gamma + u|^2 with
    u = lhat + (N-1) rho - sum eps_i + mu'_1 - sum_{i>=2} mu'_i.
    """
    rs = label.rs
    n = label.n_levels
    if len(group) ** n > MAX_GROUP_TUPLES:
        raise QBlocksError(
            f"|W|^N = {len(group)}^{n} exceeds the engine bound {MAX_GROUP_TUPLES}")
    const = add_weights(label.lhat, scale_weight(n - 1, rs.rho))
    out = []
    for widx in itertools.product(range(len(group)), repeat=n):
        u = const
        sign = 1
        for i, wi in enumerate(widx):
            mu_i, eps_i = actions[i][wi]
            sign *= group[wi].sign
            u = sub_weights(u, eps_i)
            u = add_weights(u, mu_i.mu) if i == 0 else sub_weights(u, mu_i.mu)
        out.append((sign, u, norm_sq(rs, u)))
    return out


def _certified_box(rs: RootSystem, p: int, trunc: Fraction, max_usq: Fraction) -> int:
    """Coordinate cap A such that any gamma in Q+ with a coordinate
    beyond A has exponent strictly above the truncation bound."""
    if trunc < 0:
        return 0
    s = Fraction(2) * trunc / p
    bound_sq = max_usq + 2 * sqrt_upper(max_usq * s) + s
    lam = min_eigenvalue_lower([list(r) for r in rs.cartan])
    if lam <= 0:
        raise TruncationError("could not certify a positive quadratic lower bound")
    return int(sqrt_upper(bound_sq / lam)) + 2


def nested_character(label: BlockLabel, trunc, threads: int = 1,
                     weyl_bound: int = rootsys.DEFAULT_WEYL_BOUND) -> qser.QSeries:
    """Convolution form of the iterated character (theta part).

    Returns sum over gamma in Q+ of K_N(gamma) times the signed sum over
    Weyl tuples of q^((p/2)|gamma+u|^2), carrying eta(q)^(-rank), with a
    certified complete enumeration below the truncation bound.

    The box sum is evaluated as integer numerators over one common
    exponent denominator, vectorized over the whole box per Weyl tuple,
    so higher-rank systems stay usable.
    """
    rs = label.rs
    trunc = Fraction(trunc)
    p = label.p_product
    group, actions = _level_actions(label, weyl_bound)
    tuples = _tuple_data(label, group, actions)
    max_usq = max(usq for _, _, usq in tuples)
    cap = _certified_box(rs, p, trunc, max_usq)
    conv = repdata.kostant_convolution_table(rs, label.n_levels, cap)

    # Delta = p*M/(2 d0) with M = d0*gsq + 2 gamma.(d0 u) + d0*|u|^2 integral,
    # d0 the common denominator of all u coordinates and norms.
    d0 = 1
    for _, u, usq in tuples:
        d0 = lcm(d0, usq.denominator)
        for v in u:
            d0 = lcm(d0, v.denominator)
    series_denom = 2 * d0

    grid = np.indices(conv.shape).reshape(rs.rank, -1).T.astype(np.int64)
    kvec = conv.reshape(-1)
    cartan = np.array(rs.cartan, dtype=np.int64)
    gsq = np.einsum("ij,jk,ik->i", grid, cartan, grid)
    gsq_max = int(gsq.max(initial=0))
    bound_num = (trunc * series_denom).__floor__()

    worst = max(p * (d0 * gsq_max
                     + 2 * sum(abs(int(v * d0)) * cap for v in u)
                     + abs(int(usq * d0)))
                for _, u, usq in tuples)
    if worst >= (1 << 61):
        raise QBlocksError("exponent numerators exceed the int64 guard")

    def run_chunk(chunk) -> dict[int, int]:
        terms: dict[int, int] = {}
        for sign, u, usq in chunk:
            uvec = np.array([int(v * d0) for v in u], dtype=np.int64)
            nums = p * (d0 * gsq + 2 * (grid @ uvec) + int(usq * d0))
            keep = nums <= bound_num
            for e, k in zip(nums[keep].tolist(), kvec[keep].tolist()):
                terms[e] = terms.get(e, 0) + sign * k
        return terms

    if threads > 1 and len(tuples) > 1:
        chunks = [tuples[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run_chunk, chunks))
        terms: dict[int, int] = {}
        for part in partials:
            for e, c in part.items():
                terms[e] = terms.get(e, 0) + c
    else:
        terms = run_chunk(tuples)
    return qser.QSeries(series_denom, terms, trunc, eta_power=-rs.rank)


def nested_min_anchor(label: BlockLabel,
                      weyl_bound: int = rootsys.DEFAULT_WEYL_BOUND) -> Fraction:
    """Smallest exponent over Weyl tuples at gamma = 0.

    A lower bound for every surviving exponent is not implied (terms at
    gamma = 0 may cancel), so this anchors search windows only.
    """
    p = label.p_product
    group, actions = _level_actions(label, weyl_bound)
    tuples = _tuple_data(label, group, actions)
    return min(Fraction(p, 2) * usq for _, _, usq in tuples)


def _series_from_fraction_terms(terms: dict[Fraction, int], trunc: Fraction,
                                eta_power: int) -> qser.QSeries:
    acc = qser.zero(trunc, eta_power=eta_power)
    if not terms:
        return acc
    denom = 1
    for e in terms:
        denom = lcm(denom, e.denominator)
    scaled = {}
    for e, c in terms.items():
        if c:
            scaled[e.numerator * (denom // e.denominator)] = c
    return qser.QSeries(denom, scaled, trunc, eta_power)


_mult_memo: dict[tuple, dict] = {}
_box_memo: dict[tuple, list] = {}


def _dominant_box(rs: RootSystem, norm_bound_sq: Fraction):
    """Dominant integral weights with |beta|^2 <= norm_bound_sq."""
    cached = _box_memo.get((rs.key, norm_bound_sq))
    if cached is not None:
        return cached
    caps = []
    for j in range(rs.rank):
        cjj = rs.inverse_cartan[j][j]
        caps.append(int(sqrt_upper(norm_bound_sq / cjj)) + 1)
    out = []
    for coords in itertools.product(*(range(c + 1) for c in caps)):
        beta = tuple(Fraction(v) for v in coords)
        if norm_sq(rs, beta) <= norm_bound_sq:
            out.append(beta)
    _box_memo[(rs.key, norm_bound_sq)] = out
    return out


def nested_character_mform(label: BlockLabel, trunc,
                           weyl_bound: int = rootsys.DEFAULT_WEYL_BOUND) -> qser.QSeries:
    """Multiplicity form of the iterated character, evaluated as printed.

    Nested dominant sums weighted by weight multiplicities, innermost
    weight space evaluated on the same quadratic form as the
    convolution form.  Intended to agree with nested_character; any
    disagreement is surfaced by the tests, not patched here.
    """
    rs = label.rs
    trunc = Fraction(trunc)
    p = label.p_product
    n = label.n_levels
    group, actions = _level_actions(label, weyl_bound)
    if len(group) ** n > MAX_GROUP_TUPLES:
        raise QBlocksError("group tuple bound exceeded")
    rho_norm = sqrt_upper(norm_sq(rs, rs.rho))
    max_eps_norm = max(sqrt_upper(norm_sq(rs, eps))
                       for acts in actions for _, eps in acts)
    half_p = Fraction(p, 2)

    mult_cache = _mult_memo.setdefault(rs.key, {})

    def mult(beta: Weight, mu: Weight) -> int:
        key = (beta, mu)
        val = mult_cache.get(key)
        if val is None:
            val = repdata.multiplicity_kostant(rs, beta, mu, weyl_bound)
            mult_cache[key] = val
        return val

    terms: dict[Fraction, int] = {}
    s = Fraction(2) * trunc / p if trunc >= 0 else None
    for widx in itertools.product(range(len(group)), repeat=n):
        sign = prod(group[wi].sign for wi in widx)
        mus = [actions[i][wi][0] for i, wi in enumerate(widx)]
        epss = [actions[i][wi][1] for i, wi in enumerate(widx)]
        v1 = scale_weight(-1, epss[0])
        v1 = add_weights(v1, mus[0].mu)
        for m in mus[1:]:
            v1 = sub_weights(v1, m.mu)
        if s is None:
            continue
        v1_norm = sqrt_upper(norm_sq(rs, v1))
        bounds = [v1_norm + sqrt_upper(s)]
        for _ in range(1, n):
            bounds.append(bounds[-1] + max_eps_norm + rho_norm)
        boxes = [_dominant_box(rs, (b + 1) ** 2) for b in bounds]
        # top level: multiplicity of lhat in L(beta_n)
        f = {}
        for beta in boxes[n - 1]:
            mv = mult(beta, label.lhat)
            if mv:
                f[beta] = mv
        for i in range(n - 2, -1, -1):
            eps_next = epss[i + 1]
            g = {}
            for beta_next, coeff in f.items():
                target = add_weights(sub_weights(beta_next, eps_next), rs.rho)
                for beta in boxes[i]:
                    mv = mult(beta, target)
                    if mv:
                        g[beta] = g.get(beta, 0) + coeff * mv
            f = g
        for beta1, coeff in f.items():
            delta = half_p * norm_sq(rs, add_weights(beta1, v1))
            if delta <= trunc:
                terms[delta] = terms.get(delta, 0) + sign * coeff
    return _series_from_fraction_terms(terms, trunc, eta_power=-rs.rank)
