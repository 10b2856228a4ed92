"""Flat limits of monomial ideals under one-parameter substitutions.

The combinatorial core is `line_limit_exponents`: a substitution
x -> x + t*h moves monomials only along one-dimensional "lines"
(fixed value of the grading that weights x like h), and on each line
the limit of a coordinate subspace is again a coordinate subspace,
with exponent set depending only on the ground characteristic.
`elementary_limit` assembles those per-line answers into the limit
ideal; `BoxIdeal` is the n-variable container it runs on.
"""

from __future__ import annotations

from math import comb
from typing import Iterable

from .errors import DomainError
from . import staircase
from .staircase import Staircase


def line_limit_exponents(exps: Iterable[int], char: int = 0) -> set[int]:
    """Limit positions of a one-line exponent set under a shear degeneration.

    The sheared basis vectors expand with binomial coefficients, and every
    size-k column minor of that expansion carries a single power of the
    deformation parameter, with exponent sum(S) - sum(exps).  The limit is
    therefore the coordinate subspace on the sum-minimal column set S whose
    binomial minor det[C(a, i)] (a in exps, i in S) survives reduction mod
    char.  Greedy column selection finds that matroid-minimal basis.  In
    characteristic zero every leading minor is a positive multiple of a
    Vandermonde determinant, so the result is {0, ..., k-1}.
    """
    items = sorted(set(exps))
    for t in items:
        if t < 0:
            raise DomainError(f"negative exponent {t}")
    k = len(items)
    if char == 0 or k == 0:
        return set(range(k))

    reduced: list[tuple[int, list[int]]] = []  # (pivot row, unit-pivot column)
    taken: set[int] = set()
    i = 0
    # the columns at the positions of exps themselves are triangular with
    # unit diagonal, so rank k is reached by i = max(exps)
    while len(taken) < k:
        assert i <= items[-1], "line limit escaped its line"
        v = [comb(a, i) % char for a in items]
        for piv, col in reduced:
            if v[piv]:
                f = v[piv]
                v = [(x - f * y) % char for x, y in zip(v, col)]
        piv = next((r for r, x in enumerate(v) if x), None)
        if piv is not None:
            inv = pow(v[piv], -1, char)
            reduced.append((piv, [x * inv % char for x in v]))
            taken.add(i)
        i += 1
    return taken


class BoxIdeal:
    """Finite-colength monomial ideal in n variables, stored by complement.

    `cells` is the set of exponent tuples of the standard monomials
    (those outside the ideal); it must be finite and downward closed.
    """

    __slots__ = ("nvars", "cells")

    def __init__(self, nvars: int, cells: Iterable[tuple[int, ...]]):
        if nvars < 1:
            raise DomainError("need at least one variable")
        pts = frozenset(tuple(c) for c in cells)
        for c in pts:
            if len(c) != nvars:
                raise DomainError(f"cell {c} has wrong arity")
            if any(e < 0 for e in c):
                raise DomainError(f"cell {c} has a negative exponent")
            for i in range(nvars):
                if c[i] > 0:
                    below = c[:i] + (c[i] - 1,) + c[i + 1:]
                    if below not in pts:
                        raise DomainError("complement is not downward closed")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "cells", pts)

    def __setattr__(self, name, value):
        raise AttributeError("BoxIdeal is immutable")

    @classmethod
    def from_generators(cls, nvars: int, gens: Iterable[tuple[int, ...]]) -> "BoxIdeal":
        gens = [tuple(g) for g in gens]
        for g in gens:
            if len(g) != nvars or any(e < 0 for e in g):
                raise DomainError(f"bad generator exponent {g}")
        # finite colength needs a pure power of every variable
        bound = []
        for i in range(nvars):
            pure = [g[i] for g in gens if all(g[j] == 0 for j in range(nvars) if j != i)]
            if not pure:
                raise DomainError(f"no pure power of variable {i}: colength is infinite")
            bound.append(min(pure))

        def member(m: tuple[int, ...]) -> bool:
            return any(all(m[i] >= g[i] for i in range(nvars)) for g in gens)

        box: list[tuple[int, ...]] = [()]
        for i in range(nvars):
            box = [pre + (e,) for pre in box for e in range(bound[i])]
        return cls(nvars, [m for m in box if not member(m)])

    @classmethod
    def from_staircase(cls, sc: Staircase) -> "BoxIdeal":
        return cls(2, sc.cells())

    def to_staircase(self) -> Staircase:
        if self.nvars != 2:
            raise DomainError("only 2-variable ideals convert to staircases")
        return staircase.from_cells(self.cells)

    def contains_monomial(self, exps: tuple[int, ...]) -> bool:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise DomainError(f"monomial {exps} has wrong arity")
        return exps not in self.cells

    def colength(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoxIdeal):
            return NotImplemented
        return self.nvars == other.nvars and self.cells == other.cells

    def __hash__(self) -> int:
        return hash((self.nvars, self.cells))

    def __repr__(self) -> str:
        return f"BoxIdeal({self.nvars}, {sorted(self.cells)})"


def elementary_limit_box(ideal: BoxIdeal, moved: int, shift: tuple[int, ...],
                         char: int = 0) -> BoxIdeal:
    """Flat limit of `ideal` as variable `moved` degenerates toward x^shift.

    The substitution is x_moved -> s*x_moved + x^shift with s -> 0, so the
    limit trades high powers of the moved variable for powers of the shift
    monomial.  `shift` must be a nonconstant monomial in the other variables.
    """
    n = ideal.nvars
    shift = tuple(shift)
    if not 0 <= moved < n:
        raise DomainError(f"no variable {moved}")
    if len(shift) != n or any(e < 0 for e in shift):
        raise DomainError(f"bad shift exponent {shift}")
    if shift[moved] != 0:
        raise DomainError("shift monomial may not involve the moved variable")
    if not any(shift):
        raise DomainError("constant shift does not define a degeneration")

    def on_line(key: tuple[int, ...], a: int) -> tuple[int, ...]:
        m = list(key)
        m[moved] = a
        for j in range(n):
            if j != moved:
                m[j] = key[j] - a * shift[j]
        return tuple(m)

    # Only lines through a complement cell can change; a line entirely
    # inside the ideal is sent to itself.
    keys = set()
    for c in ideal.cells:
        key = tuple(0 if j == moved else c[j] + c[moved] * shift[j] for j in range(n))
        keys.add(key)

    new_cells: list[tuple[int, ...]] = []
    for key in keys:
        top = min(key[j] // shift[j] for j in range(n) if shift[j])
        members = {a for a in range(top + 1)
                   if ideal.contains_monomial(on_line(key, a))}
        settled = line_limit_exponents(members, char)
        assert all(a <= top for a in settled), "line limit escaped its line"
        for a in range(top + 1):
            if a not in settled:
                new_cells.append(on_line(key, a))
    out = BoxIdeal(n, new_cells)
    assert out.colength() == ideal.colength()
    return out


def elementary_limit(sc: Staircase, var: str, power: int, char: int = 0) -> Staircase:
    """Two-variable elementary limit: var degenerates toward (other)^power."""
    if var not in ("x", "y"):
        raise DomainError(f"unknown variable {var!r}")
    if power < 1:
        raise DomainError("shift power must be positive")
    moved = 0 if var == "x" else 1
    shift = (0, power) if var == "x" else (power, 0)
    box = elementary_limit_box(BoxIdeal.from_staircase(sc), moved, shift, char)
    return box.to_staircase()
