"""Representation-theoretic quantities over ADE root systems.

Two independent routes to weight multiplicities are provided: the
alternating Weyl sum over the Kostant partition function, and the
Freudenthal recursion over weight levels.  The partition function is
tabulated over a coordinate box with a coin-change dynamic program so
the nested character engine can query it densely.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np

from .errors import QBlocksError
from . import rootsys
from .rootsys import (
    RootSystem, Weight, add_weights, sub_weights, inner_product, norm_sq,
    root_to_weight, weight_to_root, is_dominant, is_integral,
    dominant_representative, weyl_group, weyl_orbit,
)

_INT64_GUARD = 1 << 61


def _int_root_coords(rs: RootSystem, gamma) -> tuple[int, ...] | None:
    """Root coordinates as ints, or None when not in the root lattice."""
    coords = []
    for v in gamma:
        f = Fraction(v)
        if f.denominator != 1:
            return None
        coords.append(f.numerator)
    return tuple(coords)


class KostantTable:
    """Partition-function values over the box 0 <= gamma_i <= cap."""

    def __init__(self, rs: RootSystem, cap: int):
        self.rs = rs
        self.cap = cap
        shape = (cap + 1,) * rs.rank
        table = np.zeros(shape, dtype=np.int64)
        table[(0,) * rs.rank] = 1
        for root in rs.positive_roots:
            c = tuple(int(v) for v in root)
            axis = next(i for i, v in enumerate(c) if v > 0)
            base = [slice(o, None) if o else slice(None) for o in c]
            src_base = [slice(None, (-o) or None) for o in c]
            for x in range(c[axis], cap + 1):
                dst = list(base)
                src = list(src_base)
                dst[axis] = x
                src[axis] = x - c[axis]
                table[tuple(dst)] += table[tuple(src)]
            if table.max() >= _INT64_GUARD:
                raise QBlocksError("partition table exceeds the int64 guard")
        self.table = table

    def value(self, coords: tuple[int, ...]) -> int:
        if any(v < 0 for v in coords):
            return 0
        if any(v > self.cap for v in coords):
            raise QBlocksError(
                f"partition table cap {self.cap} exceeded by {coords}")
        return int(self.table[coords])


_kostant_tables: dict[tuple[str, int], KostantTable] = {}


def kostant_table(rs: RootSystem, cap: int) -> KostantTable:
    cached = _kostant_tables.get(rs.key)
    if cached is None or cached.cap < cap:
        # grow with headroom so repeated slightly-larger queries stay linear
        old_cap = cached.cap if cached is not None else 0
        cached = KostantTable(rs, max(cap, 2 * old_cap, 8))
        _kostant_tables[rs.key] = cached
    return cached


def kostant_partition(rs: RootSystem, gamma) -> int:
    """Number of ways to write gamma as a multiset of positive roots."""
    coords = _int_root_coords(rs, gamma)
    if coords is None:
        raise QBlocksError(f"non-integral root coordinates: {tuple(gamma)}")
    if any(v < 0 for v in coords):
        return 0
    return kostant_table(rs, max(coords)).value(coords)


_convolution_cache: dict[tuple[str, int, int, int], np.ndarray] = {}


def kostant_convolution_table(rs: RootSystem, n: int, cap: int) -> np.ndarray:
    """N-fold convolution power of the partition function over a box."""
    if n < 1:
        raise ValueError("N must be at least 1")
    key = (*rs.key, n, cap)
    cached = _convolution_cache.get(key)
    if cached is not None:
        return cached
    base = kostant_table(rs, cap).table
    sl = tuple(slice(0, cap + 1) for _ in range(rs.rank))
    base = base[sl]
    out = base
    for _ in range(n - 1):
        nxt = np.zeros_like(base)
        for idx in np.ndindex(base.shape):
            a = out[idx]
            if a == 0:
                continue
            dst = tuple(slice(i, None) for i in idx)
            src = tuple(slice(None, (cap + 1) - i) for i in idx)
            nxt[dst] += a * base[src]
        if nxt.max() >= _INT64_GUARD:
            raise QBlocksError("convolution table exceeds the int64 guard")
        out = nxt
    _convolution_cache[key] = out
    return out


def kostant_convolution(rs: RootSystem, n: int, gamma) -> int:
    """Number of ordered N-tuples of partitions summing to gamma."""
    coords = _int_root_coords(rs, gamma)
    if coords is None:
        raise QBlocksError(f"non-integral root coordinates: {tuple(gamma)}")
    if any(v < 0 for v in coords):
        return 0
    table = kostant_convolution_table(rs, n, max(coords) if coords else 0)
    return int(table[coords])


def weyl_dim(rs: RootSystem, beta: Weight) -> int:
    """Dimension of the irreducible module with highest weight beta."""
    beta = tuple(map(Fraction, beta))
    if not (is_integral(beta) and is_dominant(beta)):
        raise QBlocksError(f"{beta} is not dominant integral")
    num = Fraction(1)
    for a in rs.positive_roots:
        pairing_beta = sum((beta[i] + 1) * a[i] for i in range(rs.rank))
        pairing_rho = sum(a)
        num *= Fraction(pairing_beta, pairing_rho)
    if num.denominator != 1:
        raise AssertionError("Weyl dimension did not come out integral")
    return num.numerator


def multiplicity_kostant(rs: RootSystem, beta: Weight, mu: Weight,
                         bound: int = rootsys.DEFAULT_WEYL_BOUND) -> int:
    """Weight multiplicity via the alternating partition-function sum."""
    beta = tuple(map(Fraction, beta))
    mu = tuple(map(Fraction, mu))
    if not (is_integral(beta) and is_dominant(beta)):
        raise QBlocksError(f"{beta} is not dominant integral")
    if not is_integral(mu):
        raise QBlocksError(f"{mu} is not integral")
    beta_rho = add_weights(beta, rs.rho)
    mu_rho = add_weights(mu, rs.rho)
    total = 0
    for w in weyl_group(rs, bound):
        arg = sub_weights(w.apply(beta_rho), mu_rho)
        coords = _int_root_coords(rs, weight_to_root(rs, arg))
        if coords is None:
            return 0  # mu not in the same coset as beta: every term vanishes
        if all(v >= 0 for v in coords):
            total += w.sign * kostant_table(rs, max(coords) if coords else 0).value(coords)
    if total < 0:
        raise AssertionError("negative multiplicity from the Kostant sum")
    return total


# -- weight diagrams and the Freudenthal recursion ------------------------

def _diagram_box(rs: RootSystem, beta: Weight) -> tuple[int, ...]:
    """Per-coordinate bound for beta - mu in root coordinates."""
    lowest = rootsys.scale_weight(-1, dominant_representative(
        rs, rootsys.scale_weight(-1, beta)))
    coords = _int_root_coords(rs, weight_to_root(rs, sub_weights(beta, lowest)))
    if coords is None:
        raise AssertionError("beta - w0(beta) left the root lattice")
    return coords


def dominant_weights(rs: RootSystem, beta: Weight) -> list[Weight]:
    """Dominant weights of L(beta), i.e. dominant mu with beta - mu in Q+."""
    beta = tuple(map(Fraction, beta))
    box = _diagram_box(rs, beta)
    out = []
    for idx in np.ndindex(*(b + 1 for b in box)):
        mu = sub_weights(beta, root_to_weight(rs, idx))
        if is_dominant(mu):
            out.append(mu)
    return out


def _int_inverse_data(rs: RootSystem) -> tuple[list[list[int]], int]:
    """Inverse Cartan as (integer matrix, common denominator)."""
    from math import gcd, lcm
    d = 1
    for row in rs.inverse_cartan:
        for v in row:
            d = lcm(d, v.denominator)
    adj = [[int(v * d) for v in row] for row in rs.inverse_cartan]
    return adj, d


def weight_multiplicities_freudenthal(rs: RootSystem, beta: Weight) -> dict[Weight, int]:
    """Multiplicities of all dominant weights of L(beta), by Freudenthal.

    The recursion runs over weight levels from the top; string sums
    along each positive root are memoized so the total work is linear
    in (number of weights) x (number of positive roots).  Everything is
    integer arithmetic: pairings with roots are exact integers in
    fundamental-weight coordinates, and norms are carried times the
    common denominator of the inverse Cartan matrix.
    """
    beta = tuple(map(Fraction, beta))
    if not (is_integral(beta) and is_dominant(beta)):
        raise QBlocksError(f"{beta} is not dominant integral")
    if rs.rank == 1:
        return _freudenthal_rank1(beta)
    rank = rs.rank
    b = tuple(int(v) for v in beta)
    box = _diagram_box(rs, beta)
    adj, dd = _int_inverse_data(rs)
    cartan = rs.cartan
    # positive roots: root coordinates (for pairings) and weight coords
    pos_rc = [tuple(int(v) for v in a) for a in rs.positive_roots]
    pos_w = [tuple(int(v) for v in root_to_weight(rs, a)) for a in rs.positive_roots]
    rho = (1,) * rank

    def scaled_norm(x: tuple[int, ...]) -> int:
        # dd * |x|^2, an exact integer
        return sum(x[i] * adj[i][j] * x[j] for i in range(rank) for j in range(rank))

    def root_coords(x: tuple[int, ...]):
        g = [0] * rank
        for i in range(rank):
            acc = 0
            row = adj[i]
            for j in range(rank):
                acc += row[j] * x[j]
            q, r = divmod(acc, dd)
            if r:
                return None
            g[i] = q
        return tuple(g)

    # dominant weights mu = b - C*g over the diagram box, sorted by height
    doms: list[tuple[int, tuple[int, ...]]] = []
    for idx in np.ndindex(*(v + 1 for v in box)):
        mu = tuple(b[i] - sum(cartan[i][j] * idx[j] for j in range(rank))
                   for i in range(rank))
        if all(v >= 0 for v in mu):
            doms.append((sum(idx), mu))
    doms.sort()
    top_norm = scaled_norm(tuple(v + 1 for v in b))
    mult: dict[tuple[int, ...], int] = {}
    domrep_cache: dict[tuple[int, ...], tuple[int, ...]] = {}
    string_sums: dict[tuple[int, tuple[int, ...]], int] = {}

    def domrep(nu: tuple[int, ...]) -> tuple[int, ...]:
        cached = domrep_cache.get(nu)
        if cached is not None:
            return cached
        y = list(nu)
        while True:
            i = next((i for i, v in enumerate(y) if v < 0), None)
            if i is None:
                break
            yi = y[i]
            for j in range(rank):
                y[j] -= yi * cartan[j][i]
        out = tuple(y)
        domrep_cache[nu] = out
        return out

    def string_sum(ai: int, nu: tuple[int, ...]) -> int:
        # sum_{k>=0} m(nu + k*alpha) * (nu + k*alpha, alpha), integer exact
        key = (ai, nu)
        cached = string_sums.get(key)
        if cached is not None:
            return cached
        g = root_coords(tuple(x - y for x, y in zip(b, nu)))
        if g is None or any(v < 0 for v in g):
            string_sums[key] = 0
            return 0
        pairing = sum(nu[i] * pos_rc[ai][i] for i in range(rank))
        here = mult.get(domrep(nu), 0) * pairing
        val = here + string_sum(ai, tuple(x + y for x, y in zip(nu, pos_w[ai])))
        string_sums[key] = val
        return val

    for _, mu in doms:
        if mu == b:
            mult[mu] = 1
            continue
        s = 0
        for ai in range(len(pos_rc)):
            s += string_sum(ai, tuple(x + y for x, y in zip(mu, pos_w[ai])))
        denom = top_norm - scaled_norm(tuple(v + 1 for v in mu))
        num = 2 * s * dd
        val, rem = divmod(num, denom)
        if rem or val < 0:
            raise AssertionError("Freudenthal recursion produced a bad value")
        if val:
            mult[mu] = val
    return {tuple(Fraction(v) for v in mu): m for mu, m in mult.items()}


def _freudenthal_rank1(beta: Weight) -> dict[Weight, int]:
    # Same recursion, flattened: mu_j = (k-2j) w, string sums accumulate.
    # Keys use plain ints, which hash and compare equal to Fractions.
    k = int(beta[0])
    if k < 0:
        raise QBlocksError("not dominant")
    ms = [1]
    string = 0
    prev = 1
    for j in range(1, k // 2 + 1):
        string += prev * (k - 2 * (j - 1))
        q, r = divmod(string, j * (k + 1 - j))
        if r or q < 0:
            raise AssertionError("Freudenthal recursion produced a bad value")
        ms.append(q)
        prev = q
    return {(k - 2 * j,): m for j, m in enumerate(ms)}


def multiplicity_freudenthal(rs: RootSystem, beta: Weight, mu: Weight) -> int:
    """Weight multiplicity via the Freudenthal recursion."""
    mu = tuple(map(Fraction, mu))
    if not is_integral(mu):
        raise QBlocksError(f"{mu} is not integral")
    table = weight_multiplicities_freudenthal(rs, beta)
    return table.get(dominant_representative(rs, mu), 0)


def weight_multiset(rs: RootSystem, beta: Weight) -> dict[Weight, int]:
    """All weights of L(beta) with multiplicities (orbit expansion)."""
    table = weight_multiplicities_freudenthal(rs, beta)
    out: dict[Weight, int] = {}
    for mu, m in table.items():
        for nu in weyl_orbit(rs, mu):
            out[nu] = m
    return out


def _shift_overlap(dst_shape, src_shape, off):
    """Slices so that dst[idx] pairs with src[idx + off]; None if empty."""
    dst_sl, src_sl = [], []
    for n, t, o in zip(dst_shape, src_shape, off):
        lo = max(0, -o)
        hi = min(n, t - o)
        if lo >= hi:
            return None
        dst_sl.append(slice(lo, hi))
        src_sl.append(slice(lo + o, hi + o))
    return tuple(dst_sl), tuple(src_sl)


def multiplicity_array_kostant(rs: RootSystem, beta: Weight,
                               bound: int = rootsys.DEFAULT_WEYL_BOUND) -> np.ndarray:
    """All multiplicities of L(beta) at once via the alternating sum.

    Entry [g] is the multiplicity of beta - gamma(g) where g runs over
    the root-coordinate box of the weight diagram.  Vectorized over the
    whole box: each Weyl term is a single shifted array add.
    """
    beta = tuple(map(Fraction, beta))
    if not (is_integral(beta) and is_dominant(beta)):
        raise QBlocksError(f"{beta} is not dominant integral")
    box = _diagram_box(rs, beta)
    shape = tuple(b + 1 for b in box)
    beta_rho = add_weights(beta, rs.rho)
    offs = []
    for w in weyl_group(rs, bound):
        disp = sub_weights(w.apply(beta_rho), beta_rho)
        offs.append((w.sign, _int_root_coords(rs, weight_to_root(rs, disp))))
    cap = max(box[i] + max(0, max(off[i] for _, off in offs))
              for i in range(rs.rank))
    table = kostant_table(rs, cap).table
    out = np.zeros(shape, dtype=np.int64)
    for sign, off in offs:
        pair = _shift_overlap(shape, table.shape, off)
        if pair is None:
            continue
        dst, src = pair
        if sign > 0:
            out[dst] += table[src]
        else:
            out[dst] -= table[src]
    if out.min() < 0:
        raise AssertionError("negative multiplicity from the Kostant sum")
    return out


def multiplicity_array_freudenthal(rs: RootSystem, beta: Weight) -> np.ndarray:
    """Freudenthal multiplicities expanded over the whole weight diagram.

    Same indexing as multiplicity_array_kostant: entry [g] is the
    multiplicity of beta - gamma(g).  Orbit expansion of the dominant
    table is vectorized so the two arrays can be compared wholesale.
    """
    beta = tuple(map(Fraction, beta))
    table = weight_multiplicities_freudenthal(rs, beta)
    box = _diagram_box(rs, beta)
    out = np.zeros(tuple(v + 1 for v in box), dtype=np.int64)
    if rs.rank == 1:
        k = int(beta[0])
        for (w,), m in table.items():
            j = (k - int(w)) // 2
            out[j] = m
            out[k - j] = m
        return out
    adj, dd = _int_inverse_data(rs)
    adj_t = np.array(adj, dtype=np.int64).T
    b = np.array([int(v) for v in beta], dtype=np.int64)
    for mu, m in table.items():
        orbit = weyl_orbit(rs, mu)
        arr = np.array([[int(v) for v in nu] for nu in orbit], dtype=np.int64)
        scaled = (b - arr) @ adj_t
        if np.any(scaled % dd):
            raise AssertionError("orbit left the root-coordinate lattice")
        g = scaled // dd
        out[tuple(g.T)] = m
    return out


def save_partition_table(rs: RootSystem, table: KostantTable, path) -> None:
    """Plain-text dump: root coordinates then the value, one per line."""
    with open(path, "w") as fh:
        fh.write(f"# kostant {rs.series} {rs.rank} {table.cap}\n")
        for idx in np.ndindex(table.table.shape):
            fh.write(" ".join(str(v) for v in idx) + f" {int(table.table[idx])}\n")


def load_partition_table(rs: RootSystem, path) -> KostantTable:
    with open(path) as fh:
        header = fh.readline().split()
        if header[:2] != ["#", "kostant"] or header[2] != rs.series \
                or int(header[3]) != rs.rank:
            raise ValueError(f"cache file {path} does not match {rs.series}{rs.rank}")
        cap = int(header[4])
        table = np.zeros((cap + 1,) * rs.rank, dtype=np.int64)
        count = 0
        for line in fh:
            vals = [int(v) for v in line.split()]
            if len(vals) != rs.rank + 1:
                raise ValueError(f"malformed cache line in {path}")
            table[tuple(vals[:-1])] = vals[-1]
            count += 1
    if count != (cap + 1) ** rs.rank or table[(0,) * rs.rank] != 1:
        raise ValueError(f"cache file {path} is incomplete")
    out = KostantTable.__new__(KostantTable)
    out.rs = rs
    out.cap = cap
    out.table = table
    fresh = KostantTable(rs, min(cap, 6))
    probe = tuple(slice(0, min(cap, 6) + 1) for _ in range(rs.rank))
    if not np.array_equal(out.table[probe], fresh.table):
        raise ValueError(f"cache file {path} disagrees with recomputation")
    cached = _kostant_tables.get(rs.key)
    if cached is None or cached.cap < cap:
        _kostant_tables[rs.key] = out
    return out


def dominant_modules_up_to_dim(rs: RootSystem, dim_cap: int) -> list[Weight]:
    """All dominant integral beta with dim L(beta) <= dim_cap."""
    out: list[Weight] = []

    def rec(prefix: list[int], i: int):
        if i == rs.rank:
            out.append(tuple(Fraction(v) for v in prefix))
            return
        b = 0
        while True:
            cand = prefix + [b] + [0] * (rs.rank - i - 1)
            if weyl_dim(rs, tuple(Fraction(v) for v in cand)) > dim_cap:
                break
            rec(prefix + [b], i + 1)
            b += 1

    rec([], 0)
    return out
