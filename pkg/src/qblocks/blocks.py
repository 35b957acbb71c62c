"""Label calculus for the lattice building data.

Labels are stored internally as rho/p-shifted vectors whose coordinates
are r_i/p in the half-open window (0, 1]; the reflection-group action on
them is the plain linear action followed by the unique reduction back
into the window, and the integral part discarded by that reduction is
the epsilon weight driving the character engine.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .errors import QBlocksError
from . import qser
from .rootsys import (
    RootSystem, Weight, WeylElement, add_weights, sub_weights, scale_weight,
    norm_sq, minuscule_weights, weyl_inverse, zero_weight, is_integral,
)


@dataclass(frozen=True)
class ShiftedLabel:
    """A single-level label: coordinates r_i/pm, each in (0, 1]."""
    pm: int
    mu: Weight

    def r_values(self) -> tuple[int, ...]:
        return tuple(int(v * self.pm) for v in self.mu)


@dataclass(frozen=True)
class BlockLabel:
    """Full parameter pack naming one building series."""
    rs: RootSystem
    ps: tuple[int, ...]
    rmat: tuple[tuple[int, ...], ...]  # shape (N, rank)
    lhat: Weight

    @property
    def n_levels(self) -> int:
        return len(self.ps)

    @property
    def p_product(self) -> int:
        return prod(self.ps)

    def shifted_labels(self) -> list[ShiftedLabel]:
        return [make_shifted(self.rs, pm, row) for pm, row in zip(self.ps, self.rmat)]


def validate_ps(ps) -> tuple[int, ...]:
    ps = tuple(int(p) for p in ps)
    if not ps:
        raise QBlocksError("at least one level is required")
    if any(p < 2 for p in ps):
        raise QBlocksError(f"levels must be >= 2, got {ps}")
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if gcd(ps[i], ps[j]) != 1:
                raise QBlocksError(f"levels must be pairwise coprime, got {ps}")
    return ps


def make_shifted(rs: RootSystem, pm: int, r_values) -> ShiftedLabel:
    r_values = tuple(int(r) for r in r_values)
    if len(r_values) != rs.rank:
        raise QBlocksError(f"expected {rs.rank} label entries, got {len(r_values)}")
    if any(not 1 <= r <= pm for r in r_values):
        raise QBlocksError(f"label entries must lie in [1, {pm}], got {r_values}")
    return ShiftedLabel(pm, tuple(Fraction(r, pm) for r in r_values))


def make_block_label(rs: RootSystem, ps, rmat, lhat) -> BlockLabel:
    ps = validate_ps(ps)
    rmat = tuple(tuple(int(r) for r in row) for row in rmat)
    if len(rmat) != len(ps):
        raise QBlocksError("one label row per level is required")
    for pm, row in zip(ps, rmat):
        make_shifted(rs, pm, row)
    lhat = tuple(map(Fraction, lhat))
    if lhat not in set(minuscule_weights(rs)):
        raise QBlocksError(f"{lhat} is not minuscule for {rs.series}{rs.rank}")
    return BlockLabel(rs, ps, rmat, lhat)


def q0(ps) -> Fraction:
    """The background-charge coefficient 1/p1 - 1/p2 - ... - 1/pN."""
    ps = validate_ps(ps)
    return Fraction(1, ps[0]) - sum((Fraction(1, p) for p in ps[1:]), Fraction(0))


def shifted_from_weight(rs: RootSystem, pm: int, lam: Weight) -> ShiftedLabel:
    """Convert a label given as rho/pm - mu back to the shifted form."""
    mu = sub_weights(scale_weight(Fraction(1, pm), rs.rho), tuple(map(Fraction, lam)))
    rvals = []
    for v in mu:
        r = v * pm
        if r.denominator != 1 or not 1 <= r <= pm:
            raise QBlocksError(f"label coordinate {v} outside the window (0, 1]")
        rvals.append(r.numerator)
    return make_shifted(rs, pm, rvals)


def to_weight_label(rs: RootSystem, s: ShiftedLabel) -> Weight:
    """Inverse of shifted_from_weight."""
    return sub_weights(scale_weight(Fraction(1, s.pm), rs.rho), s.mu)


def star_act(rs: RootSystem, w: WeylElement, s: ShiftedLabel) -> tuple[ShiftedLabel, Weight]:
    """Act on a shifted label and split off the integral part.

    w * mu decomposes uniquely as mu' + eps with every coordinate of mu'
    in (0, 1] and eps an integral weight; returns (mu', eps).
    """
    v = w.apply(s.mu)
    eps = []
    mu = []
    for x in v:
        k = -((-x.numerator) // x.denominator) - 1  # ceil(x) - 1
        eps.append(Fraction(k))
        mu.append(x - k)
    return ShiftedLabel(s.pm, tuple(mu)), tuple(eps)


def star_orbit_label(rs: RootSystem, w: WeylElement, s: ShiftedLabel) -> ShiftedLabel:
    """The acted label alone, integral part discarded."""
    return star_act(rs, w, s)[0]


def conformal_exponent(rs: RootSystem, p: int, mus, tau: Weight) -> Fraction:
    """Quadratic exponent (p/2) |tau + mu_1 - sum_{m>=2} mu_m|^2."""
    vec = tuple(map(Fraction, tau))
    vec = add_weights(vec, mus[0].mu)
    for s in mus[1:]:
        vec = sub_weights(vec, s.mu)
    return Fraction(p, 2) * norm_sq(rs, vec)


def weight_space_character(rs: RootSystem, p: int, mus, tau: Weight, trunc) -> qser.QSeries:
    """Character of a single weight space: one Fock line per weight.

    Returns q^Delta(tau) carrying the symbolic eta(q)^(-rank) prefactor.
    """
    delta = conformal_exponent(rs, p, mus, tau)
    return qser.monomial(delta, 1, trunc, eta_power=-rs.rank)


def condition1_transport(rs: RootSystem, w: WeylElement,
                         s: ShiftedLabel) -> tuple[ShiftedLabel, Weight]:
    """Label and weight shift matching the dot action on weight spaces.

    Returns (label', eps~) with eps~ integral such that for every
    integral beta the single-line character model satisfies

        Delta_label(w o beta) = Delta_label'(beta - eps~),

    where o is the rho-shifted dot action.  Concretely label' is the
    window reduction of w^{-1} mu and eps~ = w^{-1} rho - rho - eps with
    eps the integral part discarded by that reduction.
    """
    winv = weyl_inverse(rs, w)
    label, eps = star_act(rs, winv, s)
    shift = sub_weights(sub_weights(winv.apply(rs.rho), rs.rho), eps)
    if not is_integral(shift):
        raise AssertionError("transport shift left the weight lattice")
    return label, shift


# -- CLI-facing parsing ----------------------------------------------------

def parse_r_matrix(text: str, n_levels: int, rank: int) -> tuple[tuple[int, ...], ...]:
    """Parse 'r11,r12;r21,r22' (rows = levels); a flat list works for rank 1."""
    rows = [row for row in text.replace(" ", "").split(";") if row]
    if len(rows) == 1 and rank == 1 and n_levels > 1:
        entries = rows[0].split(",")
        if len(entries) == n_levels:
            rows = entries
    if len(rows) != n_levels:
        raise QBlocksError(f"expected {n_levels} label rows, got {len(rows)}")
    out = []
    for row in rows:
        entries = [int(v) for v in row.split(",") if v]
        if len(entries) != rank:
            raise QBlocksError(f"expected {rank} entries per row, got {entries}")
        out.append(tuple(entries))
    return tuple(out)


def parse_lhat(rs: RootSystem, text: str | None, s: int | None) -> Weight:
    """Resolve the minuscule weight from --lhat or the rank-1 shorthand --s."""
    minus = minuscule_weights(rs)
    if s is not None:
        if rs.rank != 1:
            raise QBlocksError("--s is a rank-1 shorthand; use --lhat")
        if s not in (1, 2):
            raise QBlocksError("--s must be 1 or 2")
        return minus[s - 1]
    if text is None:
        return zero_weight(rs)
    text = text.strip()
    if text.startswith("s="):
        return parse_lhat(rs, None, int(text[2:]))
    coords = tuple(Fraction(v) for v in text.split(","))
    if len(coords) != rs.rank:
        raise QBlocksError(f"expected {rs.rank} coordinates for --lhat")
    if coords not in set(minus):
        raise QBlocksError(f"{text} is not a minuscule weight of {rs.series}{rs.rank}")
    return coords
