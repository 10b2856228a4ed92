"""Sparse exact polynomials in the fixed variable set (t, a, b, c, x, y).

t is the deformation parameter and may carry negative (Laurent) exponents,
because one-parameter subgroups scale coordinates by arbitrary integer
powers of t. All other exponents are nonnegative. Coefficients are Scalars
sharing a single characteristic per polynomial.

Terms are stored as a dict mapping 6-tuples of exponents to nonzero Scalars.
The monomial order used for leading terms and exact division is lex with
t > a > b > c > x > y.
"""

from __future__ import annotations

from math import gcd, lcm
from typing import Mapping

from .errors import DomainError
from .scalars import Scalar

VARS = ("t", "a", "b", "c", "x", "y")
VAR_INDEX = {v: i for i, v in enumerate(VARS)}
NVARS = len(VARS)
ZERO_EXPS = (0,) * NVARS

Exps = tuple  # 6-tuple of ints


def _check_exps(exps: Exps) -> None:
    if len(exps) != NVARS:
        raise DomainError(f"exponent tuple must have length {NVARS}: {exps!r}")
    for i in range(1, NVARS):
        if exps[i] < 0:
            raise DomainError(f"negative exponent for {VARS[i]}: {exps!r}")


class MultiPoly:
    """An exact sparse polynomial, Laurent in t only."""

    __slots__ = ("char", "terms")

    def __init__(self, terms: Mapping[Exps, Scalar] | None = None, char: int = 0):
        clean: dict[Exps, Scalar] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(exps)
                _check_exps(exps)
                if not isinstance(coeff, Scalar):
                    coeff = Scalar(coeff, 1, char)
                elif coeff.char != char:
                    raise DomainError("coefficient characteristic mismatch")
                if coeff.num:
                    clean[exps] = coeff
        self.terms = clean
        self.char = char

    @classmethod
    def _make(cls, terms: dict[Exps, Scalar], char: int) -> "MultiPoly":
        # Trusted constructor: terms already canonical, no zero coefficients.
        p = object.__new__(cls)
        p.terms = terms
        p.char = char
        return p

    @classmethod
    def zero(cls, char: int = 0) -> "MultiPoly":
        return cls._make({}, char)

    @classmethod
    def constant(cls, value: int | Scalar, char: int = 0) -> "MultiPoly":
        if isinstance(value, Scalar):
            if value.char != char:
                raise DomainError("constant characteristic mismatch")
            s = value
        else:
            s = Scalar(value, 1, char)
        return cls._make({ZERO_EXPS: s} if s.num else {}, char)

    @classmethod
    def variable(cls, name: str, char: int = 0, power: int = 1) -> "MultiPoly":
        i = VAR_INDEX.get(name)
        if i is None:
            raise DomainError(f"unknown variable {name!r}")
        if power < 0 and i != 0:
            raise DomainError(f"negative power of {name}")
        exps = [0] * NVARS
        exps[i] = power
        return cls._make({tuple(exps): Scalar.one(char)}, char)

    @classmethod
    def monomial(
        cls, coeff: int | Scalar, exps: Mapping[str, int], char: int = 0
    ) -> "MultiPoly":
        e = [0] * NVARS
        for name, k in exps.items():
            i = VAR_INDEX.get(name)
            if i is None:
                raise DomainError(f"unknown variable {name!r}")
            e[i] = k
        key = tuple(e)
        _check_exps(key)
        if not isinstance(coeff, Scalar):
            coeff = Scalar(coeff, 1, char)
        elif coeff.char != char:
            raise DomainError("coefficient characteristic mismatch")
        return cls._make({key: coeff} if coeff.num else {}, char)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            if other.char != self.char:
                raise DomainError(
                    f"characteristic mismatch: {self.char} vs {other.char}"
                )
            return other
        if isinstance(other, (int, Scalar)):
            return MultiPoly.constant(other, self.char)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        big, small = (self, o) if len(self.terms) >= len(o.terms) else (o, self)
        terms = dict(big.terms)
        for e, c in small.terms.items():
            cur = terms.get(e)
            if cur is None:
                terms[e] = c
            else:
                s = cur + c
                if s.num:
                    terms[e] = s
                else:
                    del terms[e]
        return MultiPoly._make(terms, self.char)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.__add__(o.__neg__())

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._make({e: -c for e, c in self.terms.items()}, self.char)

    def scale(self, s: int | Scalar) -> "MultiPoly":
        if isinstance(s, int):
            s = Scalar(s, 1, self.char)
        elif s.char != self.char:
            raise DomainError("scalar characteristic mismatch")
        if not s.num:
            return MultiPoly.zero(self.char)
        return MultiPoly._make({e: c * s for e, c in self.terms.items()}, self.char)

    def mul_monomial(self, exps: Exps, coeff: Scalar | int = 1) -> "MultiPoly":
        """Multiply by a single term; much cheaper than a general product."""
        if not isinstance(coeff, Scalar):
            coeff = Scalar(coeff, 1, self.char)
        if not coeff.num:
            return MultiPoly.zero(self.char)
        terms = {}
        for e, c in self.terms.items():
            key = (
                e[0] + exps[0], e[1] + exps[1], e[2] + exps[2],
                e[3] + exps[3], e[4] + exps[4], e[5] + exps[5],
            )
            terms[key] = c * coeff
        return MultiPoly._make(terms, self.char)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.terms) == 1:
            ((e, c),) = o.terms.items()
            return self.mul_monomial(e, c)
        if len(self.terms) == 1:
            ((e, c),) = self.terms.items()
            return o.mul_monomial(e, c)
        terms: dict[Exps, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                key = (
                    e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2],
                    e1[3] + e2[3], e1[4] + e2[4], e1[5] + e2[5],
                )
                cur = terms.get(key)
                v = c1 * c2 if cur is None else cur + c1 * c2
                if v.num:
                    terms[key] = v
                elif cur is not None:
                    del terms[key]
        return MultiPoly._make(terms, self.char)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Scalar(other, 1, self.char)
        if isinstance(other, Scalar):
            return self.scale(other.inv())
        return NotImplemented

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            raise DomainError("negative polynomial power")
        result = MultiPoly.constant(1, self.char)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- t-structure ---------------------------------------------------------

    def shift_t(self, k: int) -> "MultiPoly":
        """Multiply by t**k."""
        if k == 0 or not self.terms:
            return self
        return MultiPoly._make(
            {(e[0] + k,) + e[1:]: c for e, c in self.terms.items()}, self.char
        )

    def t_range(self) -> tuple[int, int] | None:
        """(min, max) exponent of t across terms, None for the zero polynomial."""
        if not self.terms:
            return None
        lo = hi = next(iter(self.terms))[0]
        for e in self.terms:
            if e[0] < lo:
                lo = e[0]
            elif e[0] > hi:
                hi = e[0]
        return lo, hi

    def coeff_in_t(self, k: int) -> "MultiPoly":
        """The coefficient of t**k, as a polynomial with no t."""
        terms = {
            (0,) + e[1:]: c for e, c in self.terms.items() if e[0] == k
        }
        return MultiPoly._make(terms, self.char)

    def scale_vars_by_t(self, weights: Mapping[str, int]) -> "MultiPoly":
        """Apply the substitution v -> v * t**w for each (v, w) given.

        This is the monomial substitution induced by a one-parameter
        subgroup acting diagonally with the given weights.
        """
        idx_w = []
        for name, w in weights.items():
            i = VAR_INDEX.get(name)
            if i is None:
                raise DomainError(f"unknown variable {name!r}")
            if i == 0:
                raise DomainError("cannot scale t by itself")
            if w:
                idx_w.append((i, w))
        if not idx_w:
            return self
        terms = {}
        for e, c in self.terms.items():
            dt = 0
            for i, w in idx_w:
                dt += w * e[i]
            terms[(e[0] + dt,) + e[1:]] = c
        return MultiPoly._make(terms, self.char)

    # -- substitution ----------------------------------------------------------

    def substitute(self, assignments: Mapping[str, "MultiPoly | int | Scalar"]) -> "MultiPoly":
        """Simultaneously replace variables by polynomials.

        Unmentioned variables stay themselves. Substituting for t is
        rejected when the polynomial has negative t exponents.
        """
        polys: dict[int, MultiPoly] = {}
        for name, val in assignments.items():
            i = VAR_INDEX.get(name)
            if i is None:
                raise DomainError(f"unknown variable {name!r}")
            p = self._coerce(val)
            if p is None:
                raise DomainError(f"cannot substitute {val!r} for {name}")
            polys[i] = p
        if not polys:
            return self
        if 0 in polys:
            rng = self.t_range()
            if rng is not None and rng[0] < 0:
                raise DomainError("cannot substitute for t under Laurent exponents")
        # Powers of each replacement are cached: exponents repeat heavily
        # across the terms of a typical ideal generator.
        cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            got = cache.get((i, k))
            if got is None:
                got = polys[i] ** k
                cache[(i, k)] = got
            return got

        result = MultiPoly.zero(self.char)
        for e, c in self.terms.items():
            residual = list(e)
            factor = None
            for i in polys:
                k = e[i]
                if k:
                    residual[i] = 0
                    f = power(i, k)
                    factor = f if factor is None else factor * f
            base = MultiPoly._make({tuple(residual): c}, self.char)
            result = result + (base if factor is None else factor * base)
        return result

    # -- division and normal forms ----------------------------------------------

    def lead_term(self) -> tuple[Exps, Scalar] | None:
        """Lex-leading (exponents, coefficient), or None for zero."""
        if not self.terms:
            return None
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Return q with q * divisor == self, or raise ValueError.

        Works over the Laurent-in-t ring by shifting both operands to
        nonnegative t exponents first; lex division then terminates
        unconditionally.
        """
        d = self._coerce(divisor)
        if d is None or not isinstance(divisor, MultiPoly):
            raise DomainError("divisor must be a MultiPoly")
        if not d.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return MultiPoly.zero(self.char)
        off_n = self.t_range()[0]
        off_d = d.t_range()[0]
        num = self.shift_t(-off_n)
        den = d.shift_t(-off_d)
        dlead = max(den.terms)
        dcoeff = den.terms[dlead]
        rem = dict(num.terms)
        quo: dict[Exps, Scalar] = {}
        while rem:
            rlead = max(rem)
            diff = tuple(x - y for x, y in zip(rlead, dlead))
            if any(v < 0 for v in diff):
                raise ValueError("not exactly divisible")
            c = rem[rlead] / dcoeff
            quo[diff] = c
            for e, dc in den.terms.items():
                key = (
                    diff[0] + e[0], diff[1] + e[1], diff[2] + e[2],
                    diff[3] + e[3], diff[4] + e[4], diff[5] + e[5],
                )
                cur = rem.get(key)
                v = -(c * dc) if cur is None else cur - c * dc
                if v.num:
                    rem[key] = v
                elif cur is not None:
                    del rem[key]
        return MultiPoly._make(quo, self.char).shift_t(off_n - off_d)

    def normalized(self) -> "MultiPoly":
        """Canonical representative of self up to a scalar multiple.

        Char 0: content-1 integer coefficients, positive lex-leading sign.
        Char p: lex-leading coefficient 1. Zero stays zero.
        """
        if not self.terms:
            return self
        if self.char:
            lead = self.terms[max(self.terms)]
            return self.scale(lead.inv())
        denoms = 1
        for c in self.terms.values():
            denoms = lcm(denoms, c.den)
        nums = [c.num * (denoms // c.den) for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        lead_num = self.terms[max(self.terms)].num
        if lead_num < 0:
            g = -g
        return self.scale(Scalar(denoms, g, 0))

    # -- inspection ----------------------------------------------------------------

    def degree(self, name: str) -> int:
        """Largest exponent of the named variable; -1 for the zero polynomial."""
        i = VAR_INDEX.get(name)
        if i is None:
            raise DomainError(f"unknown variable {name!r}")
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def single_term(self) -> tuple[Exps, Scalar] | None:
        if len(self.terms) != 1:
            return None
        ((e, c),) = self.terms.items()
        return e, c

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ZERO_EXPS in self.terms)

    def constant_value(self) -> Scalar:
        if not self.terms:
            return Scalar.zero(self.char)
        if len(self.terms) == 1 and ZERO_EXPS in self.terms:
            return self.terms[ZERO_EXPS]
        raise ValueError(f"{self} is not constant")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Scalar)):
            o = self._coerce(other)
            return self.terms == o.terms
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.char == other.char and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.char, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self})" if not self.char else f"MultiPoly({self}, char={self.char})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{VARS[i]}^{e[i]}" if e[i] != 1 else VARS[i]
                for i in range(NVARS)
                if e[i]
            )
            if not mono:
                body = str(c) if c.num >= 0 else str(-c)
            else:
                mag = c if c.num >= 0 else -c
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(body if c.num >= 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c.num >= 0 else f"- {body}")
        return " ".join(parts)
