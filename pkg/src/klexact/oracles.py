"""Exact combinatorial oracles: partition counts and rank statistics.

Everything here is integer arithmetic with no modular forms in sight,
so these values can sit on the other side of an equals sign from the
analytic series.  The rank table is built from the q-series

    sum_{k>=0} q^(k^2) / ((w q; q)_k (w^(-1) q; q)_k)

with each q-coefficient (a Laurent polynomial in w) packed into one big
integer, 128 bits per w-slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

_SLOT_BITS = 128
_SLOT_BYTES = _SLOT_BITS // 8

# auto-grown singleton cap; build explicit tables for anything larger
DEFAULT_TABLE_CAP = 1200

_pentagonal_cache = [1]


def pentagonal_p(n: int) -> int:
    """p(n) by the pentagonal number recurrence, memoized."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cache = _pentagonal_cache
    while len(cache) <= n:
        target = len(cache)
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > target:
                break
            sgn = 1 if k % 2 else -1
            total += sgn * cache[target - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= target:
                total += sgn * cache[target - g2]
            k += 1
        cache.append(total)
    return cache[n]


@dataclass(frozen=True, slots=True)
class RankTable:
    """N(m, n) for 0 <= n <= max_n; zero outside |m| <= n."""

    max_n: int
    _rows: tuple[tuple[int, ...], ...]  # row n has entries for m = -n .. n

    def count(self, m: int, n: int) -> int:
        if n < 0 or n > self.max_n:
            raise ValueError(f"n = {n} outside table range 0..{self.max_n}")
        if abs(m) > n:
            return 0
        return self._rows[n][m + n]

    def row(self, n: int) -> dict[int, int]:
        if n < 0 or n > self.max_n:
            raise ValueError(f"n = {n} outside table range 0..{self.max_n}")
        return {m: v for m, v in zip(range(-n, n + 1), self._rows[n]) if v}


def build_rank_table(max_n: int) -> RankTable:
    if max_n < 0:
        raise ValueError("max_n must be nonnegative")
    width = 2 * max_n + 1
    offset = max_n
    one = 1 << (_SLOT_BITS * offset)  # the monomial w^0
    acc = [0] * (max_n + 1)
    acc[0] = one
    summand = [0] * (max_n + 1)
    summand[0] = one
    k = 1
    while k * k <= max_n:
        # w-degree of any kept coefficient stays within |m| <= n, so the
        # shifts below never spill outside the packed window
        shift = 2 * k - 1
        summand = [0] * shift + summand[: max_n + 1 - shift]
        for n in range(k, max_n + 1):  # divide by (1 - w q^k)
            summand[n] += summand[n - k] << _SLOT_BITS
        for n in range(k, max_n + 1):  # divide by (1 - w^(-1) q^k)
            summand[n] += summand[n - k] >> _SLOT_BITS
        for n in range(k * k, max_n + 1):
            acc[n] += summand[n]
        k += 1
    rows = []
    nbytes = _SLOT_BYTES * width
    for n in range(max_n + 1):
        data = acc[n].to_bytes(nbytes, "little")
        row = tuple(
            int.from_bytes(
                data[_SLOT_BYTES * (m + offset) : _SLOT_BYTES * (m + offset + 1)],
                "little",
            )
            for m in range(-n, n + 1)
        )
        rows.append(row)
    return RankTable(max_n, tuple(rows))


_table: RankTable | None = None


def get_rank_table(max_n: int) -> RankTable:
    """Shared table, grown on demand up to DEFAULT_TABLE_CAP."""
    global _table
    if max_n > DEFAULT_TABLE_CAP:
        raise ValueError(
            f"shared rank table capped at {DEFAULT_TABLE_CAP}; "
            "call build_rank_table directly for more"
        )
    if _table is None or _table.max_n < max_n:
        _table = build_rank_table(max_n)
    return _table


def N_abn(a: int, b: int, n: int, table: RankTable) -> int:
    """Number of partitions of n whose rank is congruent to a mod b."""
    if b < 1:
        raise ValueError("modulus must be positive")
    if n < 0 or n > table.max_n:
        raise ValueError(f"n = {n} outside table range 0..{table.max_n}")
    return sum(table.count(m, n) for m in range(-n, n + 1) if (m - a) % b == 0)


@dataclass(frozen=True, slots=True)
class Zeta3:
    """An element x + y z of Z[z], z a primitive cube root of unity."""

    x: int
    y: int

    @classmethod
    def from_power(cls, e: int) -> Zeta3:
        e %= 3
        if e == 0:
            return cls(1, 0)
        if e == 1:
            return cls(0, 1)
        return cls(-1, -1)  # z^2 = -1 - z

    def __add__(self, other: Zeta3) -> Zeta3:
        return Zeta3(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Zeta3) -> Zeta3:
        return Zeta3(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Zeta3:
        return Zeta3(-self.x, -self.y)

    def __mul__(self, other: Zeta3 | int) -> Zeta3:
        if isinstance(other, int):
            return Zeta3(self.x * other, self.y * other)
        # (x1 + y1 z)(x2 + y2 z) with z^2 = -1 - z
        return Zeta3(
            self.x * other.x - self.y * other.y,
            self.x * other.y + self.y * other.x - self.y * other.y,
        )

    __rmul__ = __mul__

    def as_int(self) -> int:
        if self.y:
            raise ValueError(f"{self} is not rational")
        return self.x


def A_ab(a: int, b: int, n: int, table: RankTable) -> int:
    """The rank generating value A(a/b; n) = sum_m e(am/b) N(m, n), exact.

    Supported moduli are b = 1 (this is just p(n)), b = 2 and b = 3; the
    result is an integer in each case because the irrational parts of
    the root-of-unity combination cancel.
    """
    if n < 0 or n > table.max_n:
        raise ValueError(f"n = {n} outside table range 0..{table.max_n}")
    if b == 1:
        return sum(table.count(m, n) for m in range(-n, n + 1))
    if b == 2:
        return sum(
            (v if (a * m) % 2 == 0 else -v)
            for m, v in zip(range(-n, n + 1), table._rows[n])
        )
    if b == 3:
        total = Zeta3(0, 0)
        for m, v in zip(range(-n, n + 1), table._rows[n]):
            if v:
                total = total + Zeta3.from_power(a * m) * v
        return total.as_int()
    raise ValueError("only moduli 1, 2 and 3 are supported")


def partitions(n: int) -> Iterator[list[int]]:
    """All partitions of n as weakly decreasing part lists."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def rec(remaining: int, cap: int, prefix: list[int]) -> Iterator[list[int]]:
        if remaining == 0:
            yield prefix
            return
        for part in range(min(cap, remaining), 0, -1):
            yield from rec(remaining - part, part, prefix + [part])

    yield from rec(n, n, [])


def brute_force_rank_counts(n: int) -> dict[int, int]:
    """N(m, n) by enumerating partitions and taking largest part - #parts."""
    counts: dict[int, int] = {}
    if n == 0:
        return {0: 1}
    for parts in partitions(n):
        r = parts[0] - len(parts)
        counts[r] = counts.get(r, 0) + 1
    return counts
