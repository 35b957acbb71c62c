"""Simply-laced root systems and their Weyl groups, in exact arithmetic.

Weights are tuples of Fractions in the fundamental-weight basis; root
coordinates are tuples in the simple-root basis.  Weyl elements are
integer matrices acting on fundamental-weight coordinates, generated by
breadth-first closure over the simple reflections so that the BFS depth
is the Coxeter length.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import GroupTooLargeError
from .exactlin import invert_matrix

Weight = tuple[Fraction, ...]
RootCoord = tuple[Fraction, ...]

DEFAULT_WEYL_BOUND = 51840  # |W(E6)|

_EXCEPTIONAL_ORDERS = {6: 51840, 7: 2903040, 8: 696729600}


def _cartan_matrix(series: str, rank: int) -> tuple[tuple[int, ...], ...]:
    if series == "A":
        if rank < 1:
            raise ValueError("type A requires rank >= 1")
        edges = [(i, i + 1) for i in range(rank - 1)]
    elif series == "D":
        if rank < 4:
            raise ValueError("type D requires rank >= 4")
        edges = [(i, i + 1) for i in range(rank - 3)]
        edges += [(rank - 3, rank - 2), (rank - 3, rank - 1)]
    elif series == "E":
        if rank not in (6, 7, 8):
            raise ValueError("type E requires rank 6, 7 or 8")
        # Bourbaki: chain 1-3-4-5-...-rank with node 2 attached to node 4.
        chain = [1, 3, 4, 5, 6, 7, 8][: rank - 1]
        edges = [(a - 1, b - 1) for a, b in zip(chain, chain[1:])]
        edges.append((2 - 1, 4 - 1))
    else:
        raise ValueError(f"unknown series {series!r}; expected A, D or E")
    m = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in edges:
        m[i][j] = m[j][i] = -1
    return tuple(tuple(row) for row in m)


def weyl_order(series: str, rank: int) -> int:
    if series == "A":
        return factorial(rank + 1)
    if series == "D":
        return 2 ** (rank - 1) * factorial(rank)
    return _EXCEPTIONAL_ORDERS[rank]


@dataclass(frozen=True)
class WeylElement:
    matrix: tuple[tuple[int, ...], ...]  # acts on fundamental-weight coords
    length: int
    sign: int

    def apply(self, x: Weight) -> Weight:
        return tuple(sum(row[k] * x[k] for k in range(len(x))) for row in self.matrix)


@dataclass(frozen=True)
class RootSystem:
    series: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    inverse_cartan: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[RootCoord, ...]  # simple-root coordinates
    rho: Weight
    theta: Weight
    coxeter: int

    def __repr__(self):
        return f"RootSystem({self.series}{self.rank})"

    @property
    def key(self) -> tuple[str, int]:
        return (self.series, self.rank)


@lru_cache(maxsize=None)
def build_root_system(series: str, rank: int) -> RootSystem:
    """Construct the ADE root system of the given type.

    Positive roots are generated by reflection closure from the simple
    roots; the highest root and Coxeter number are read off from the
    result and cross-checked against rank * coxeter / 2.
    """
    cartan = _cartan_matrix(series, rank)
    inv = tuple(tuple(r) for r in invert_matrix([list(r) for r in cartan]))

    # Reflection closure on simple-root coordinates:
    # s_i(a) = a - (C a)_i e_i.
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for a in frontier:
            ca = [sum(cartan[i][j] * a[j] for j in range(rank)) for i in range(rank)]
            for i in range(rank):
                b = list(a)
                b[i] -= ca[i]
                b = tuple(b)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    positives = sorted(a for a in seen if all(x >= 0 for x in a))
    heights = [sum(a) for a in positives]
    coxeter = max(heights) + 1
    if 2 * len(positives) != rank * coxeter:
        raise AssertionError("positive root closure is inconsistent")
    theta_rc = positives[heights.index(max(heights))]
    theta = root_to_weight_static(cartan, theta_rc)
    rho = tuple(Fraction(1) for _ in range(rank))
    return RootSystem(series, rank, cartan, inv, tuple(positives), rho, theta, coxeter)


def root_to_weight_static(cartan, a) -> Weight:
    rank = len(cartan)
    return tuple(Fraction(sum(cartan[i][j] * a[j] for j in range(rank)))
                 for i in range(rank))


def root_to_weight(rs: RootSystem, a: RootCoord) -> Weight:
    return root_to_weight_static(rs.cartan, a)


def weight_to_root(rs: RootSystem, x: Weight) -> RootCoord:
    return tuple(sum(rs.inverse_cartan[i][j] * Fraction(x[j])
                     for j in range(rs.rank)) for i in range(rs.rank))


def inner_product(rs: RootSystem, x: Weight, y: Weight) -> Fraction:
    """Invariant form in fundamental-weight coordinates, (alpha, alpha) = 2."""
    if len(x) != rs.rank or len(y) != rs.rank:
        raise ValueError("weight length does not match the rank")
    return sum(Fraction(x[i]) * rs.inverse_cartan[i][j] * Fraction(y[j])
               for i in range(rs.rank) for j in range(rs.rank))


def norm_sq(rs: RootSystem, x: Weight) -> Fraction:
    return inner_product(rs, x, x)


def zero_weight(rs: RootSystem) -> Weight:
    return tuple(Fraction(0) for _ in range(rs.rank))


def fundamental_weight(rs: RootSystem, i: int) -> Weight:
    return tuple(Fraction(int(j == i)) for j in range(rs.rank))


def add_weights(x: Weight, y: Weight) -> Weight:
    return tuple(a + b for a, b in zip(x, y))


def sub_weights(x: Weight, y: Weight) -> Weight:
    return tuple(a - b for a, b in zip(x, y))


def scale_weight(c, x: Weight) -> Weight:
    c = Fraction(c)
    return tuple(c * a for a in x)


def is_integral(x: Weight) -> bool:
    return all(Fraction(a).denominator == 1 for a in x)


def is_dominant(x: Weight) -> bool:
    return all(a >= 0 for a in x)


def _simple_reflection_matrix(cartan, i: int) -> tuple[tuple[int, ...], ...]:
    rank = len(cartan)
    return tuple(tuple((1 if j == k else 0) - (cartan[j][i] if k == i else 0)
                       for k in range(rank)) for j in range(rank))


def _matmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


_weyl_cache: dict[tuple[str, int], tuple[WeylElement, ...]] = {}


def weyl_group(rs: RootSystem, bound: int = DEFAULT_WEYL_BOUND) -> tuple[WeylElement, ...]:
    """Full Weyl group with lengths and signs, or an explicit refusal.

    Elements are enumerated breadth-first over the simple reflections;
    the BFS depth is the Coxeter length.  Groups larger than ``bound``
    raise GroupTooLargeError rather than truncating silently.
    """
    order = weyl_order(rs.series, rs.rank)
    if order > bound:
        raise GroupTooLargeError(
            f"|W({rs.series}{rs.rank})| = {order} exceeds the enumeration bound {bound}")
    cached = _weyl_cache.get(rs.key)
    if cached is not None:
        return cached
    rank = rs.rank
    gens = [_simple_reflection_matrix(rs.cartan, i) for i in range(rank)]
    identity = tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))
    lengths = {identity: 0}
    frontier = [identity]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for m in frontier:
            for g in gens:
                p = _matmul(g, m)
                if p not in lengths:
                    lengths[p] = depth
                    nxt.append(p)
        frontier = nxt
    if len(lengths) != order:
        raise AssertionError(
            f"enumerated {len(lengths)} elements, expected {order}")
    group = tuple(WeylElement(m, l, -1 if l % 2 else 1)
                  for m, l in sorted(lengths.items(), key=lambda kv: (kv[1], kv[0])))
    _weyl_cache[rs.key] = group
    return group


def weyl_identity(rs: RootSystem) -> WeylElement:
    m = tuple(tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank))
    return WeylElement(m, 0, 1)


def longest_element(rs: RootSystem, bound: int = DEFAULT_WEYL_BOUND) -> WeylElement:
    group = weyl_group(rs, bound)
    top = max(w.length for w in group)
    longest = [w for w in group if w.length == top]
    if len(longest) != 1:
        raise AssertionError("longest element is not unique")
    return longest[0]


_weyl_lookup: dict[tuple[str, int], dict] = {}


def weyl_table(rs: RootSystem, bound: int = DEFAULT_WEYL_BOUND) -> dict:
    """Matrix -> element lookup for the full group (memoized)."""
    table = _weyl_lookup.get(rs.key)
    if table is None:
        table = {w.matrix: w for w in weyl_group(rs, bound)}
        _weyl_lookup[rs.key] = table
    return table


def weyl_compose(rs: RootSystem, u: WeylElement, v: WeylElement,
                 bound: int = DEFAULT_WEYL_BOUND) -> WeylElement:
    """The element u*v (apply v first), with its true length restored."""
    return weyl_table(rs, bound)[_matmul(u.matrix, v.matrix)]


def weyl_inverse(rs: RootSystem, w: WeylElement) -> WeylElement:
    inv_rows = invert_matrix([list(r) for r in w.matrix])
    m = tuple(tuple(int(v) for v in row) for row in inv_rows)
    return WeylElement(m, w.length, w.sign)


def inversion_count(rs: RootSystem, w: WeylElement) -> int:
    """Number of positive roots sent to negative roots (equals the length)."""
    count = 0
    for a in rs.positive_roots:
        y = w.apply(root_to_weight(rs, a))
        b = weight_to_root(rs, y)
        if all(v <= 0 for v in b):
            count += 1
    return count


def dot_action(rs: RootSystem, w: WeylElement, beta: Weight) -> Weight:
    """The rho-shifted action w(beta + rho) - rho."""
    shifted = add_weights(tuple(map(Fraction, beta)), rs.rho)
    return sub_weights(w.apply(shifted), rs.rho)


def minuscule_weights(rs: RootSystem) -> list[Weight]:
    """Zero together with the minuscule fundamental weights.

    A fundamental weight is minuscule exactly when the corresponding
    coefficient of the highest root is 1; the resulting list is a
    complete set of coset representatives of the weight lattice modulo
    the root lattice.
    """
    theta_rc = weight_to_root(rs, rs.theta)
    out = [zero_weight(rs)]
    for i, c in enumerate(theta_rc):
        if c == 1:
            out.append(fundamental_weight(rs, i))
    return out


def weyl_orbit(rs: RootSystem, x: Weight) -> set[Weight]:
    """Orbit of a weight under the Weyl group (no group table required)."""
    x = tuple(map(Fraction, x))
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for y in frontier:
            for i in range(rs.rank):
                z = tuple(y[j] - y[i] * rs.cartan[j][i] for j in range(rs.rank))
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return seen


def dominant_representative(rs: RootSystem, x: Weight) -> Weight:
    """The dominant weight in the Weyl orbit of x."""
    y = list(map(Fraction, x))
    while True:
        i = next((i for i, v in enumerate(y) if v < 0), None)
        if i is None:
            return tuple(y)
        yi = y[i]
        for j in range(rs.rank):
            y[j] -= yi * rs.cartan[j][i]


# -- plain-text cache for Weyl tables ------------------------------------

def save_weyl_table(rs: RootSystem, group, path) -> None:
    """One line per element: matrix entries row-major, then the length."""
    with open(path, "w") as fh:
        fh.write(f"# weyl {rs.series} {rs.rank} {len(group)}\n")
        for w in group:
            flat = [str(v) for row in w.matrix for v in row]
            fh.write(" ".join(flat + [str(w.length)]) + "\n")


def load_weyl_table(rs: RootSystem, path) -> tuple[WeylElement, ...]:
    with open(path) as fh:
        header = fh.readline().split()
        if header[:2] != ["#", "weyl"] or header[2] != rs.series or int(header[3]) != rs.rank:
            raise ValueError(f"cache file {path} does not match {rs.series}{rs.rank}")
        count = int(header[4])
        rank = rs.rank
        group = []
        for line in fh:
            vals = [int(v) for v in line.split()]
            if len(vals) != rank * rank + 1:
                raise ValueError(f"malformed cache line in {path}")
            m = tuple(tuple(vals[i * rank:(i + 1) * rank]) for i in range(rank))
            length = vals[-1]
            group.append(WeylElement(m, length, -1 if length % 2 else 1))
    if len(group) != count or count != weyl_order(rs.series, rs.rank):
        raise ValueError(f"cache file {path} has the wrong number of elements")
    _weyl_cache[rs.key] = tuple(group)
    return _weyl_cache[rs.key]
