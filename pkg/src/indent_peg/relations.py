"""Binary relations on the naturals and sets of indentation columns.

Every relation used by the layout operators is a *difference relation*:
``{(n, m) : lo <= n - m <= hi}`` with ``lo`` possibly ``-inf`` and ``hi``
possibly ``+inf``.  Sets of candidate baselines are kept as sorted,
merged unions of closed intervals whose upper end may be ``+inf``.

Following the usual convention, the image ``r(Y)`` collects the *second*
components of pairs whose first component lies in ``Y``; the preimage
``r^-1(Y)`` collects first components.
"""
from __future__ import annotations

import bisect
import math
import re
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple, Union

INF = math.inf

Bound = Union[int, float]  # ints, or +-inf


class OverApproximationWarning(UserWarning):
    """Raised (as a warning) when a composition is not exact over the naturals."""


def _check_bound(x: Bound) -> Bound:
    if isinstance(x, bool):
        raise TypeError(f"not a bound: {x!r}")
    if isinstance(x, float):
        if not math.isinf(x):
            if not x.is_integer():
                raise ValueError(f"bound must be integral: {x!r}")
            return int(x)
    elif not isinstance(x, int):
        raise TypeError(f"not a bound: {x!r}")
    return x


@dataclass(frozen=True)
class DiffRel:
    """The relation ``{(n, m) in N x N : lo <= n - m <= hi}``."""

    lo: Bound
    hi: Bound

    def __post_init__(self):
        lo = _check_bound(self.lo)
        hi = _check_bound(self.hi)
        if lo == INF or hi == -INF:
            raise ValueError(f"bad difference interval [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"empty difference interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def member(self, n: int, m: int) -> bool:
        return self.lo <= n - m <= self.hi

    def image(self, ys: IndentSet) -> IndentSet:
        """``{x : exists y in ys, (y, x) in self}``."""
        return IndentSet.from_intervals(
            (a - self.hi, b - self.lo) for a, b in ys.intervals
        )

    def preimage(self, ys: IndentSet) -> IndentSet:
        """``{x : exists y in ys, (x, y) in self}``."""
        return IndentSet.from_intervals(
            (a + self.lo, b + self.hi) for a, b in ys.intervals
        )

    def inverse(self) -> DiffRel:
        return DiffRel(-self.hi, -self.lo)

    def compose(self, other: DiffRel) -> DiffRel:
        """``self o other``: first ``self``, then ``other``.

        Computed as the interval sum of the two difference ranges.  This is
        the exact composition over N when both relations only allow
        nonnegative differences, or when either is ``any``; otherwise the
        intermediate column may be forced below zero and the sum
        over-approximates (an :class:`OverApproximationWarning` is issued).
        """
        if not composition_is_exact(self, other):
            warnings.warn(
                f"composition of {self} and {other} over-approximates near column 0",
                OverApproximationWarning,
                stacklevel=2,
            )
        return DiffRel(self.lo + other.lo, self.hi + other.hi)

    @property
    def is_total(self) -> bool:
        # r(N) = N iff every column has some r-predecessor, i.e. hi >= 0
        return self.hi >= 0

    @property
    def is_nonnegative(self) -> bool:
        return self.lo >= 0

    @property
    def slug(self) -> str:
        """Identifier-safe name, used for generated rule names."""
        name = _SLUGS.get(self)
        if name is not None:
            return name

        def part(x: Bound) -> str:
            if x == INF:
                return "inf"
            if x == -INF:
                return "minf"
            return f"m{-x}" if x < 0 else str(x)

        return f"d{part(self.lo)}_{part(self.hi)}"

    def __str__(self) -> str:
        name = _NAMES.get(self)
        if name is not None:
            return name
        lo = "" if self.lo == -INF else str(self.lo)
        hi = "" if self.hi == INF else str(self.hi)
        return f"diff[{lo}..{hi}]"


EQ = DiffRel(0, 0)
GT = DiffRel(1, INF)
GE = DiffRel(0, INF)
ANY = DiffRel(-INF, INF)

_NAMES = {EQ: "=", GT: ">", GE: ">=", ANY: "any"}
_SLUGS = {EQ: "eq", GT: "gt", GE: "ge", ANY: "any"}
_BY_NAME = {
    "=": EQ, "eq": EQ,
    ">": GT, "gt": GT,
    ">=": GE, "ge": GE,
    "any": ANY,
}
_DIFF_RE = re.compile(r"diff\[\s*(-?\d+)?\s*\.\.\s*(-?\d+)?\s*\]\Z")


def composition_is_exact(s: DiffRel, r: DiffRel) -> bool:
    return (s.lo >= 0 and r.lo >= 0) or s == ANY or r == ANY


def parse_relation(text: str) -> DiffRel:
    """Read ``=``, ``>``, ``>=``, ``any``, ``diff[lo..hi]`` (or ``eq``/``gt``/``ge``)."""
    text = text.strip()
    rel = _BY_NAME.get(text)
    if rel is not None:
        return rel
    m = _DIFF_RE.match(text)
    if m is None:
        raise ValueError(f"malformed relation literal: {text!r}")
    lo = -INF if m.group(1) is None else int(m.group(1))
    hi = INF if m.group(2) is None else int(m.group(2))
    if lo > hi:
        raise ValueError(f"empty relation literal: {text!r}")
    return DiffRel(lo, hi)


Interval = Tuple[int, Bound]


@dataclass(frozen=True)
class IndentSet:
    """A set of naturals stored as sorted, pairwise non-adjacent intervals.

    Use :meth:`from_intervals` (or :meth:`of`, :meth:`naturals`) to build
    one from arbitrary input; the constructor only accepts canonical form.
    """

    intervals: Tuple[Interval, ...] = ()

    def __post_init__(self):
        prev_hi = None
        for lo, hi in self.intervals:
            if not isinstance(lo, int) or lo < 0 or lo > hi:
                raise ValueError(f"bad interval ({lo}, {hi})")
            if hi != INF and not isinstance(hi, int):
                raise ValueError(f"bad interval ({lo}, {hi})")
            if prev_hi is not None and lo <= prev_hi + 1:
                raise ValueError(f"intervals not normalized: {self.intervals}")
            prev_hi = hi

    @classmethod
    def from_intervals(cls, pairs: Iterable[Tuple[Bound, Bound]]) -> IndentSet:
        clipped = []
        for lo, hi in pairs:
            lo = max(lo, 0)
            if lo > hi:
                continue
            clipped.append((int(lo), hi if hi == INF else int(hi)))
        clipped.sort()
        merged: list = []
        for lo, hi in clipped:
            if merged and lo <= merged[-1][1] + 1:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        return cls(tuple(merged))

    @classmethod
    def of(cls, *cols: int) -> IndentSet:
        return cls.from_intervals((c, c) for c in cols)

    @classmethod
    def naturals(cls) -> IndentSet:
        return NATURALS

    @classmethod
    def empty(cls) -> IndentSet:
        return EMPTY

    def __contains__(self, n: int) -> bool:
        i = bisect.bisect_right(self.intervals, (n, INF)) - 1
        return i >= 0 and self.intervals[i][0] <= n <= self.intervals[i][1]

    def __bool__(self) -> bool:
        return bool(self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_finite(self) -> bool:
        return not self.intervals or self.intervals[-1][1] != INF

    def __iter__(self) -> Iterator[int]:
        """Iterate members in ascending order (infinite if unbounded)."""
        for lo, hi in self.intervals:
            n = lo
            while n <= hi:
                yield n
                n += 1

    def __and__(self, other: IndentSet) -> IndentSet:
        out = []
        a, b = self.intervals, other.intervals
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IndentSet(tuple(out))

    def __or__(self, other: IndentSet) -> IndentSet:
        return IndentSet.from_intervals(self.intervals + other.intervals)

    def issubset(self, other: IndentSet) -> bool:
        return (self & other) == self

    def __le__(self, other: IndentSet) -> bool:
        return self.issubset(other)

    def members_upto(self, bound: int) -> frozenset:
        return frozenset(n for lo, hi in self.intervals
                         for n in range(lo, int(min(hi, bound)) + 1))

    def to_json(self) -> list:
        return [[lo, None if hi == INF else hi] for lo, hi in self.intervals]

    @classmethod
    def from_json(cls, data) -> IndentSet:
        return cls.from_intervals((lo, INF if hi is None else hi) for lo, hi in data)

    def __str__(self) -> str:
        if self == NATURALS:
            return "N"
        parts = []
        for lo, hi in self.intervals:
            if hi == INF:
                parts.append(f"{lo}..")
            elif lo == hi:
                parts.append(str(lo))
            elif hi == lo + 1:
                parts.append(f"{lo},{hi}")
            else:
                parts.append(f"{lo}..{hi}")
        return "{" + ",".join(parts) + "}"


NATURALS = IndentSet(((0, INF),))
EMPTY = IndentSet(())
