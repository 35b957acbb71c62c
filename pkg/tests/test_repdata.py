"""Partition functions, dimensions, multiplicities: dual routes and oracles."""
import itertools
from fractions import Fraction as F
from math import comb

import numpy as np
import pytest

from qblocks import repdata, rootsys
from qblocks.errors import QBlocksError
from qblocks.repdata import (
    kostant_partition, kostant_convolution, weyl_dim, multiplicity_kostant,
    multiplicity_freudenthal, weight_multiplicities_freudenthal, weight_multiset,
    dominant_weights, multiplicity_array_kostant, dominant_modules_up_to_dim,
)
from qblocks.rootsys import build_root_system, fundamental_weight, zero_weight


def brute_partition(rs, gamma):
    """Independent oracle: enumerate multisets of positive roots directly."""
    roots = [tuple(int(v) for v in a) for a in rs.positive_roots]

    def rec(g, i):
        if all(v == 0 for v in g):
            return 1
        if i == len(roots):
            return 0
        total = 0
        step = roots[i]
        cur = g
        while all(v >= 0 for v in cur):
            total += rec(cur, i + 1)
            cur = tuple(a - b for a, b in zip(cur, step))
        return total

    return rec(tuple(gamma), 0)


def brute_convolution(rs, n, gamma):
    """Independent oracle: sum over all ordered splittings."""
    gamma = tuple(int(v) for v in gamma)
    if n == 1:
        return brute_partition(rs, gamma)
    total = 0
    for head in itertools.product(*(range(v + 1) for v in gamma)):
        rest = tuple(a - b for a, b in zip(gamma, head))
        total += brute_partition(rs, head) * brute_convolution(rs, n - 1, rest)
    return total


def test_partition_trivial_cases():
    for series, rank in (("A", 1), ("A", 2), ("D", 4)):
        rs = build_root_system(series, rank)
        assert kostant_partition(rs, (0,) * rank) == 1
    rs1 = build_root_system("A", 1)
    for n in range(0, 12):
        assert kostant_partition(rs1, (n,)) == 1


def test_partition_a2_example():
    rs = build_root_system("A", 2)
    assert kostant_partition(rs, (2, 1)) == 2  # {a1,a1,a2}, {a1, a1+a2}
    assert kostant_partition(rs, (2, 1)) == brute_partition(rs, (2, 1))


def test_partition_matches_brute_force_on_boxes():
    for series, rank, cap in (("A", 2, 4), ("A", 3, 2), ("D", 4, 1)):
        rs = build_root_system(series, rank)
        for coords in itertools.product(range(cap + 1), repeat=rank):
            assert kostant_partition(rs, coords) == brute_partition(rs, coords)


def test_partition_rejects_non_integral():
    rs = build_root_system("A", 2)
    with pytest.raises(QBlocksError):
        kostant_partition(rs, (F(1, 2), F(0)))
    assert kostant_partition(rs, (-1, 0)) == 0


def test_convolution_reduces_to_partition():
    rs = build_root_system("A", 2)
    for coords in itertools.product(range(3), repeat=2):
        assert kostant_convolution(rs, 1, coords) == kostant_partition(rs, coords)


def test_convolution_binomial_on_rank_one():
    rs = build_root_system("A", 1)
    for n_levels in range(1, 6):
        for n in range(0, 40):
            assert kostant_convolution(rs, n_levels, (n,)) == \
                comb(n + n_levels - 1, n_levels - 1)


def test_convolution_a2_splitting_oracle():
    rs = build_root_system("A", 2)
    # exhaustive splitting enumeration gives 6 for the highest root:
    # (0,theta), (theta,0) weigh p(theta)=2 each, plus (a1,a2), (a2,a1)
    assert brute_convolution(rs, 2, (1, 1)) == 6
    assert kostant_convolution(rs, 2, (1, 1)) == 6
    for coords in itertools.product(range(3), repeat=2):
        assert kostant_convolution(rs, 2, coords) == brute_convolution(rs, 2, coords)


def test_weyl_dim_examples():
    rs1 = build_root_system("A", 1)
    assert weyl_dim(rs1, (F(0),)) == 1
    for k in range(0, 10):
        assert weyl_dim(rs1, (F(k),)) == k + 1
    rs2 = build_root_system("A", 2)
    assert weyl_dim(rs2, (F(1), F(1))) == 8
    d4 = build_root_system("D", 4)
    assert weyl_dim(d4, fundamental_weight(d4, 1)) == 28  # adjoint node


def test_weyl_dim_rejects_bad_input():
    rs = build_root_system("A", 2)
    with pytest.raises(QBlocksError):
        weyl_dim(rs, (F(-1), F(0)))
    with pytest.raises(QBlocksError):
        weyl_dim(rs, (F(1, 2), F(0)))


def test_multiplicity_highest_weight_is_one():
    rs = build_root_system("A", 2)
    for beta in ((F(1), F(1)), (F(2), F(0)), (F(3), F(2))):
        assert multiplicity_kostant(rs, beta, beta) == 1
        assert multiplicity_freudenthal(rs, beta, beta) == 1


def test_multiplicity_rank1_strings():
    rs = build_root_system("A", 1)
    for k in range(0, 8):
        for m in range(-k - 3, k + 4):
            expected = 1 if (k - m) % 2 == 0 and abs(m) <= k else 0
            assert multiplicity_kostant(rs, (F(k),), (F(m),)) == expected
            assert multiplicity_freudenthal(rs, (F(k),), (F(m),)) == expected
    assert multiplicity_freudenthal(rs, (F(3),), (F(1),)) == 1


def test_multiplicity_adjoint_examples():
    rs2 = build_root_system("A", 2)
    assert multiplicity_kostant(rs2, (F(1), F(1)), zero_weight(rs2)) == 2
    assert multiplicity_freudenthal(rs2, (F(1), F(1)), zero_weight(rs2)) == 2
    d4 = build_root_system("D", 4)
    adj = fundamental_weight(d4, 1)
    assert multiplicity_freudenthal(d4, adj, zero_weight(d4)) == 4
    assert multiplicity_kostant(d4, adj, zero_weight(d4)) == 4


def test_multiplicities_sum_to_dimension():
    for series, rank, betas in (
            ("A", 2, [(1, 1), (2, 1), (3, 0)]),
            ("A", 3, [(1, 0, 1), (0, 2, 0)]),
            ("D", 4, [(0, 1, 0, 0), (1, 0, 0, 0)])):
        rs = build_root_system(series, rank)
        for raw in betas:
            beta = tuple(F(v) for v in raw)
            total = sum(weight_multiset(rs, beta).values())
            assert total == weyl_dim(rs, beta)


def test_dual_route_equality_small_sweep():
    for series, rank, cap in (("A", 2, 60), ("A", 3, 64), ("D", 4, 29)):
        rs = build_root_system(series, rank)
        for beta in dominant_modules_up_to_dim(rs, cap):
            table = weight_multiplicities_freudenthal(rs, beta)
            for mu in dominant_weights(rs, beta):
                assert multiplicity_kostant(rs, beta, mu) == table.get(mu, 0)


def test_array_route_matches_pointwise_route():
    rs = build_root_system("A", 2)
    beta = (F(2), F(2))
    arr = multiplicity_array_kostant(rs, beta)
    for idx in np.ndindex(arr.shape):
        mu = rootsys.sub_weights(beta, rootsys.root_to_weight(rs, idx))
        assert arr[idx] == multiplicity_kostant(rs, beta, mu)


def test_dominant_modules_enumeration():
    rs = build_root_system("A", 1)
    assert [int(b[0]) for b in dominant_modules_up_to_dim(rs, 5)] == [0, 1, 2, 3, 4]
    rs2 = build_root_system("A", 2)
    mods = dominant_modules_up_to_dim(rs2, 10)
    assert (F(1), F(1)) in mods and (F(2), F(1)) not in mods


def test_partition_table_cache_roundtrip(tmp_path):
    rs = build_root_system("A", 2)
    table = repdata.kostant_table(rs, 9)
    path = tmp_path / "kostant_A2.txt"
    repdata.save_partition_table(rs, table, path)
    loaded = repdata.load_partition_table(rs, path)
    assert np.array_equal(loaded.table, table.table)
    bad = tmp_path / "bad.txt"
    bad.write_text("# kostant A 2 1\n0 0 1\n")
    with pytest.raises(ValueError):
        repdata.load_partition_table(rs, bad)
