"""Quick invariant suites behind the ``check`` subcommand.

Each suite returns a list of (name, ok, detail) triples; the CLI prints
one line per entry and exits nonzero when anything fails.  These are
smaller and faster than the full pytest suite.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from . import abengine, blocks, qser, repdata, rootsys, sl2closed, zhatref

Check = tuple[str, bool, str]


def _result(name: str, ok: bool, detail: str = "") -> Check:
    return (name, bool(ok), detail)


def suite_rootsys() -> list[Check]:
    out = []
    for series, rank in (("A", 1), ("A", 2), ("A", 3), ("D", 4)):
        rs = rootsys.build_root_system(series, rank)
        group = rootsys.weyl_group(rs)
        ok = len(group) == rootsys.weyl_order(series, rank)
        ok = ok and 2 * len(rs.positive_roots) == rs.rank * rs.coxeter
        ok = ok and all(rootsys.inversion_count(rs, w) == w.length for w in group)
        two_rho = rootsys.zero_weight(rs)
        for a in rs.positive_roots:
            two_rho = rootsys.add_weights(two_rho, rootsys.root_to_weight(rs, a))
        ok = ok and two_rho == rootsys.scale_weight(2, rs.rho)
        out.append(_result(f"rootsys {series}{rank}", ok,
                           f"|W|={len(group)}, positives={len(rs.positive_roots)}"))
    return out


def suite_qser(trunc) -> list[Check]:
    trunc = Fraction(trunc)
    out = []
    euler = qser.euler_product(trunc)
    literal = qser.monomial(0, 1, trunc)
    for n in range(1, int(trunc) + 1):
        factor = qser.add(qser.monomial(0, 1, trunc),
                          qser.monomial(n, -1, trunc))
        literal = qser.mul(literal, factor)
    out.append(_result("euler product vs literal product", euler == literal))
    ft_ok = all(qser.add(qser.false_theta(p, a, trunc),
                         qser.false_theta(p, 2 * p - a, trunc)).is_zero()
                for p in (2, 3, 5) for a in range(0, 2 * p + 1))
    out.append(_result("false theta antisymmetry", ft_ok))
    return out


def suite_blocks() -> list[Check]:
    out = []
    for series, rank, pm in (("A", 1, 5), ("A", 2, 4)):
        rs = rootsys.build_root_system(series, rank)
        group = rootsys.weyl_group(rs)
        ok = True
        for rvec in itertools.product(range(1, pm + 1), repeat=rank):
            s = blocks.make_shifted(rs, pm, rvec)
            for u in group:
                mu_u, eps_u = blocks.star_act(rs, u, s)
                for v in group:
                    mu_vu, eps_vu = blocks.star_act(rs, rootsys.weyl_compose(rs, v, u), s)
                    mu2, eps2 = blocks.star_act(rs, v, mu_u)
                    combined = rootsys.add_weights(v.apply(eps_u), eps2)
                    ok = ok and mu_vu == mu2 and eps_vu == combined
        out.append(_result(f"star action cocycle {series}{rank}, p={pm}", ok))
    return out


def suite_sl2(trunc) -> list[Check]:
    window = Fraction(trunc)
    out = []
    for ps in ((2,), (3,), (2, 3)):
        ok = True
        for rvec in itertools.product(*(range(1, p) for p in ps)):
            for s in (1, 2):
                rs = rootsys.build_root_system("A", 1)
                label = blocks.make_block_label(
                    rs, ps, tuple((r,) for r in rvec),
                    rootsys.minuscule_weights(rs)[s - 1])
                t = sl2closed.min_exponent(ps, rvec, s) + window
                ok = ok and (abengine.nested_character(label, t)
                             == sl2closed.example3_series(ps, rvec, s, t))
        out.append(_result(f"nested vs closed form, levels {ps}", ok))
    ident_ok = True
    for p in range(2, 7):
        for r in range(1, p + 1):
            t = sl2closed.min_exponent((p,), (r,), 1) + window
            lhs = sl2closed.example3_series((p,), (r,), 1, t)
            rhs = qser.false_theta(p, p - r, t)
            ident_ok = ident_ok and lhs == qser.QSeries(
                rhs.denom, dict(rhs.terms), rhs.trunc, eta_power=-1)
    out.append(_result("closed form at one level is a false theta", ident_ok))
    return out


def suite_zhat(trunc) -> list[Check]:
    out = []
    g = zhatref.seifert_to_plumbing((2, 3, 5))
    ok = g.framings == tuple([-2] * 8)
    out.append(_result("star plumbing for fibers (2,3,5)", ok))
    series = zhatref.zhat_series(g, Fraction(trunc))
    mins = series.min_exponent()
    ok = mins is not None and all(c != 0 for _, c in series.items())
    out.append(_result("plumbing series nonempty", ok, f"min exponent {mins}"))
    return out


SUITES = {
    "rootsys": lambda trunc: suite_rootsys(),
    "qser": suite_qser,
    "blocks": lambda trunc: suite_blocks(),
    "sl2": suite_sl2,
    "zhat": suite_zhat,
}


def run_suite(name: str, trunc) -> list[Check]:
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(SUITES[key](trunc))
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](trunc)
