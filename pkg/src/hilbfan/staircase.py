"""Staircases of finite-colength monomial ideals in k[[x, y]].

A staircase is stored by its complement column heights: heights[j] is the
least k with x**j * y**k in the ideal, so the complement (the finitely many
monomials outside the ideal) is {(j, k) : j < len(heights), k < heights[j]}.
Heights are positive and non-increasing; the empty tuple is the unit ideal.

The step form I(n1, ..., nr) records the successive height increments seen
from the shallow end of the staircase: heights[r - i] == n1 + ... + ni.
Steps may be zero (repeated heights), so for instance heights (2, 2) have
step form (2, 0).
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import DomainError


class Staircase:
    """A finite-colength monomial ideal in two variables."""

    __slots__ = ("heights",)

    def __init__(self, heights: Iterable[int]):
        h = tuple(heights)
        for k, v in enumerate(h):
            if not isinstance(v, int) or v < 1:
                raise DomainError(f"heights must be positive integers: {h!r}")
            if k and v > h[k - 1]:
                raise DomainError(f"heights must be non-increasing: {h!r}")
        self.heights = h

    @classmethod
    def from_steps(cls, steps: Iterable[int]) -> "Staircase":
        s = tuple(steps)
        if any(not isinstance(v, int) or v < 0 for v in s):
            raise DomainError(f"steps must be nonnegative integers: {s!r}")
        r = len(s)
        heights = []
        for j in range(r):
            c = sum(s[: r - j])
            if c == 0:
                break
            heights.append(c)
        return cls(heights)

    def steps(self) -> tuple[int, ...]:
        h = self.heights
        r = len(h)
        if r == 0:
            return ()
        out = [h[r - 1]]
        for i in range(2, r + 1):
            out.append(h[r - i] - h[r - i + 1])
        return tuple(out)

    def colength(self) -> int:
        return sum(self.heights)

    def height_at(self, j: int) -> int:
        """Least y-power k with x**j * y**k in the ideal."""
        if j < 0:
            raise DomainError("negative x-exponent")
        return self.heights[j] if j < len(self.heights) else 0

    def contains_monomial(self, xe: int, ye: int) -> bool:
        return ye >= self.height_at(xe)

    def cells(self) -> list[tuple[int, int]]:
        """The monomials outside the ideal, sorted by (x, y) exponent."""
        return [
            (j, k) for j, h in enumerate(self.heights) for k in range(h)
        ]

    def generators(self) -> list[tuple[int, int]]:
        """Minimal monomial generators as (x, y) exponent pairs."""
        h = self.heights
        r = len(h)
        gens = []
        for j in range(r + 1):
            c = h[j] if j < r else 0
            if j == 0 or c < h[j - 1]:
                gens.append((j, c))
        return gens

    def contains(self, other: "Staircase") -> bool:
        """Ideal containment: every monomial of other lies in self."""
        n = max(len(self.heights), len(other.heights))
        return all(self.height_at(j) <= other.height_at(j) for j in range(n))

    def __mul__(self, other: "Staircase") -> "Staircase":
        if not isinstance(other, Staircase):
            return NotImplemented
        # the product staircase comes from pairwise products of generators;
        # with N, M the step partial sums, the product's partial sums are
        # L[i] = min over alpha + beta == i of N[alpha] + M[beta]
        sn = self.steps()
        sm = other.steps()
        r, s = len(sn), len(sm)
        N = [0]
        for v in sn:
            N.append(N[-1] + v)
        M = [0]
        for v in sm:
            M.append(M[-1] + v)
        L = []
        for i in range(r + s + 1):
            L.append(
                min(
                    N[al] + M[i - al]
                    for al in range(max(0, i - s), min(r, i) + 1)
                )
            )
        return Staircase.from_steps(
            tuple(L[i] - L[i - 1] for i in range(1, r + s + 1))
        )

    def __pow__(self, n: int) -> "Staircase":
        if not isinstance(n, int) or n < 0:
            raise DomainError("staircase powers need a nonnegative integer")
        out = Staircase(())
        for _ in range(n):
            out = out * self
        return out

    def __add__(self, other: "Staircase") -> "Staircase":
        """Ideal sum: complement is the intersection of complements."""
        if not isinstance(other, Staircase):
            return NotImplemented
        n = max(len(self.heights), len(other.heights))
        heights = []
        for j in range(n):
            c = min(self.height_at(j), other.height_at(j))
            if c == 0:
                break
            heights.append(c)
        return Staircase(heights)

    def transpose(self) -> "Staircase":
        """Swap the roles of x and y (conjugate the complement partition)."""
        h = self.heights
        if not h:
            return self
        return Staircase(
            tuple(sum(1 for v in h if v > k) for k in range(h[0]))
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Staircase):
            return NotImplemented
        return self.heights == other.heights

    def __hash__(self) -> int:
        return hash(self.heights)

    def __lt__(self, other: "Staircase") -> bool:
        # arbitrary but stable order, for deterministic listings
        return self.heights < other.heights

    def __repr__(self) -> str:
        return f"Staircase({self.heights})"

    def __str__(self) -> str:
        return "I(" + ",".join(str(v) for v in self.steps()) + ")"


def from_cells(cells: Iterable[tuple[int, int]]) -> Staircase:
    """The staircase whose complement is exactly the given monomial set."""
    pts = set(cells)
    if not pts:
        return Staircase(())
    ncols = max(u for u, _ in pts) + 1
    heights = []
    for j in range(ncols):
        col = {v for u, v in pts if u == j}
        if col != set(range(len(col))):
            raise DomainError(f"cells are not downward closed in column {j}")
        heights.append(len(col))
    if 0 in heights:
        raise DomainError("cells are not downward closed across columns")
    return Staircase(heights)


def from_monomials(mons: Iterable[tuple[int, int]]) -> Staircase:
    """The smallest staircase ideal containing the given monomials."""
    pts = sorted(set(mons))
    if not pts:
        raise DomainError("no monomials given")
    if min(v for _, v in pts) > 0 or min(u for u, _ in pts) > 0:
        raise DomainError("monomials do not span finite colength")
    r = min(u for u, v in pts if v == 0)
    heights = []
    for j in range(r):
        heights.append(min(v for u, v in pts if u <= j))
    return Staircase(heights)


def measuring_sequence(sc: Staircase) -> tuple[int, int]:
    """The pair of largest jumps in the staircase profile.

    First component: the largest drop between consecutive column heights,
    including the drop off the final column. Second: the same for the rows
    of the complement (equivalently the first component of the transpose).
    Both are at least 1. The unit ideal measures (1, 1).
    """

    def max_jump(heights: tuple[int, ...]) -> int:
        best = 1
        prev = None
        for v in heights:
            if prev is not None and prev - v > best:
                best = prev - v
            prev = v
        if prev is not None and prev > best:
            best = prev
        return best

    return max_jump(sc.heights), max_jump(sc.transpose().heights)


def enumerate_between(
    colength: int, low: Staircase | None = None, high: Staircase | None = None
) -> list[Staircase]:
    """All staircases with the given colength and low <= S <= high as ideals.

    Containment runs upward: low is contained in every listed ideal, every
    listed ideal is contained in high. Returns [] when the colength is
    unreachable. Results are sorted by heights.
    """
    if colength < 0:
        return []
    max_r = len(low.heights) if low is not None else colength

    def upper(j: int) -> int:
        # tallest allowed column j: inside low's complement profile
        if low is None:
            return colength
        return low.height_at(j)

    def lower(j: int) -> int:
        if high is None:
            return 0
        return high.height_at(j)

    found: list[Staircase] = []
    prefix: list[int] = []

    def rec(j: int, remaining: int, cap: int) -> None:
        if remaining == 0:
            # all later columns must be allowed to vanish
            if high is None or len(high.heights) <= j:
                found.append(Staircase(tuple(prefix)))
            return
        if j >= max_r:
            return
        lo = max(lower(j), 1)
        hi = min(cap, upper(j), remaining)
        # the remaining columns can hold at most (max_r - j - 1) * c more
        for c in range(hi, lo - 1, -1):
            tail = remaining - c
            if tail > (max_r - j - 1) * c:
                continue
            prefix.append(c)
            rec(j + 1, tail, c)
            prefix.pop()

    rec(0, colength, colength)
    return sorted(found)
