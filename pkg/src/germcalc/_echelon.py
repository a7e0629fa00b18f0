"""Incremental sparse row echelon over the rationals.

Rows are sparse mappings from column id to coefficient.  Incoming rows are
scaled to primitive integer vectors, then reduced against the stored pivot
rows by fraction-free cancellation on the largest column id present (so the
non-pivot columns that survive are the smallest ones, which downstream code
uses as least representatives of quotient classes).  Rank queries are exact;
there is no floating point anywhere.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd

_STRIP_BITS = 512


def _to_primitive(row: dict[int, int | Fraction]) -> dict[int, int]:
    """Clear denominators and divide by the content."""
    lcm = 1
    fractional = False
    for v in row.values():
        if isinstance(v, Fraction):
            fractional = True
            d = v.denominator
            lcm = lcm // gcd(lcm, d) * d
    if fractional:
        ints = {c: int(v * lcm) for c, v in row.items() if v != 0}
    else:
        ints = {c: v for c, v in row.items() if v != 0}
    if not ints:
        return {}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def _strip_content(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


class RowSpan:
    """Accumulates a row space and answers rank and membership queries."""

    __slots__ = ("_pivots",)

    def __init__(self):
        self._pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def pivot_columns(self) -> set[int]:
        return set(self._pivots)

    def reduce(self, row: dict[int, int | Fraction]) -> dict[int, int]:
        """Reduce a row against the stored pivots; the residual is primitive."""
        r = _to_primitive(row)
        if not r:
            return r
        # lazy max-heap over candidate lead columns; stale entries are
        # skipped on pop, fill-in columns are pushed as they appear
        heap = [-c for c in r]
        heapq.heapify(heap)
        pivots = self._pivots
        while True:
            lead = None
            while heap:
                c = -heap[0]
                if c in r:
                    lead = c
                    break
                heapq.heappop(heap)
            if lead is None:
                return {}
            piv = pivots.get(lead)
            if piv is None:
                return _strip_content(r)
            a = r[lead]
            b = piv[lead]
            g = gcd(a, b)
            mult_r = b // g
            mult_p = a // g
            if mult_r != 1:
                for c in r:
                    r[c] *= mult_r
            for c, w in piv.items():
                if c in r:
                    nv = r[c] - mult_p * w
                    if nv:
                        r[c] = nv
                    else:
                        del r[c]
                else:
                    r[c] = -mult_p * w
                    heapq.heappush(heap, -c)
            if r and mult_r.bit_length() + mult_p.bit_length() > _STRIP_BITS:
                r = _strip_content(r)

    def insert(self, row: dict[int, int | Fraction]) -> bool:
        """Add a row to the span; True when the rank grew."""
        r = self.reduce(row)
        if not r:
            return False
        lead = max(r)
        if r[lead] < 0:
            r = {c: -v for c, v in r.items()}
        self._pivots[lead] = r
        return True

    def contains(self, row: dict[int, int | Fraction]) -> bool:
        return not self.reduce(row)


def matrix_rank(rows: list[list[Fraction | int]]) -> int:
    """Exact rank of a small dense matrix."""
    span = RowSpan()
    for row in rows:
        span.insert({i: v for i, v in enumerate(row) if v != 0})
    return span.rank
