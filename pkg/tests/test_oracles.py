"""Partition counts and rank statistics against brute-force enumeration."""

import pytest

from klexact.oracles import (
    DEFAULT_TABLE_CAP,
    A_ab,
    N_abn,
    Zeta3,
    brute_force_rank_counts,
    build_rank_table,
    get_rank_table,
    partitions,
    pentagonal_p,
)

TABLE = build_rank_table(100)


# --------------------------------------------------------- pentagonal_p


def test_pentagonal_values():
    assert pentagonal_p(0) == 1
    assert pentagonal_p(4) == 5
    assert pentagonal_p(100) == 190569292
    assert pentagonal_p(200) == 3972999029388


def test_pentagonal_matches_enumeration():
    for n in range(26):
        assert pentagonal_p(n) == sum(1 for _ in partitions(n))


def test_pentagonal_rejects_negative():
    with pytest.raises(ValueError):
        pentagonal_p(-1)


# ------------------------------------------------------------ partitions


def test_partitions_shape():
    for n in (1, 5, 9):
        seen = set()
        for parts in partitions(n):
            assert sum(parts) == n
            assert all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1))
            seen.add(tuple(parts))
        assert len(seen) == pentagonal_p(n)


# ------------------------------------------------------------ rank table


def test_rank_table_n1():
    assert TABLE.count(0, 1) == 1
    assert all(TABLE.count(m, 1) == 0 for m in range(-6, 7) if m != 0)


def test_rank_table_row_sums():
    for n in range(TABLE.max_n + 1):
        assert sum(TABLE.row(n).values()) == pentagonal_p(n)


def test_rank_table_symmetry():
    for n in range(TABLE.max_n + 1):
        for m in range(n + 1):
            assert TABLE.count(m, n) == TABLE.count(-m, n)


def test_rank_table_matches_brute_force():
    for n in range(21):
        assert TABLE.row(n) == {
            m: v for m, v in brute_force_rank_counts(n).items() if v
        }


def test_rank_table_window():
    assert TABLE.count(50, 10) == 0
    with pytest.raises(ValueError):
        TABLE.count(0, TABLE.max_n + 1)


def test_get_rank_table_growth_and_cap():
    t = get_rank_table(10)
    assert t.max_n >= 10
    bigger = get_rank_table(40)
    assert bigger.max_n >= 40
    with pytest.raises(ValueError):
        get_rank_table(DEFAULT_TABLE_CAP + 1)


# ---------------------------------------------------------------- N_abn


def test_N_abn_examples():
    for n in range(1, 40):
        assert N_abn(0, 1, n, TABLE) == pentagonal_p(n)
    assert N_abn(0, 2, 1, TABLE) == 1
    assert N_abn(1, 2, 1, TABLE) == 0
    for n in range(1, 60):
        assert N_abn(1, 3, n, TABLE) == N_abn(2, 3, n, TABLE)


def test_N_abn_partitions_by_residue():
    for n in range(1, 40):
        for b in (2, 3, 5):
            assert sum(N_abn(a, b, n, TABLE) for a in range(b)) == pentagonal_p(n)


# ------------------------------------------------------------------ A_ab


def test_A_ab_examples():
    for n in range(1, 60):
        assert A_ab(0, 1, n, TABLE) == pentagonal_p(n)
        assert A_ab(1, 2, n, TABLE) == N_abn(0, 2, n, TABLE) - N_abn(1, 2, n, TABLE)
        assert A_ab(1, 3, n, TABLE) == N_abn(0, 3, n, TABLE) - N_abn(1, 3, n, TABLE)


def test_A_ab_rejects_unsupported_modulus():
    with pytest.raises(ValueError):
        A_ab(1, 5, 3, TABLE)


# ----------------------------------------------------------------- Zeta3


def test_zeta3_powers_cycle():
    z = Zeta3.from_power(1)
    assert z * z == Zeta3.from_power(2)
    assert z * z * z == Zeta3(1, 0)
    assert Zeta3.from_power(5) == Zeta3.from_power(2)


def test_zeta3_ring_laws():
    vals = [Zeta3(x, y) for x in (-2, 0, 3) for y in (-1, 0, 2)]
    for u in vals:
        for v in vals:
            assert u + v == v + u
            assert u * v == v * u
            assert u - v == -(v - u)
    a, b, c = vals[1], vals[5], vals[7]
    assert a * (b + c) == a * b + a * c


def test_zeta3_as_int():
    assert Zeta3(7, 0).as_int() == 7
    with pytest.raises(ValueError):
        Zeta3(1, 1).as_int()


def test_bN_relation():
    # b N(a,b;n) = p(n) + sum_{j=1}^{b-1} zeta_b^{-aj} A(j/b;n) in Z[zeta_b]
    for n in range(1, 80):
        p = pentagonal_p(n)
        for b in (2, 3):
            for a in range(b):
                lhs = Zeta3(b * N_abn(a, b, n, TABLE), 0)
                rhs = Zeta3(p, 0)
                for j in range(1, b):
                    root = Zeta3.from_power((-a * j) % 3) if b == 3 else Zeta3(
                        1 if (a * j) % 2 == 0 else -1, 0
                    )
                    rhs = rhs + root * A_ab(j, b, n, TABLE)
                assert lhs == rhs, (a, b, n)
