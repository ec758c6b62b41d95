"""Exact arithmetic in Q, Q[x] and Q(x).

Rationals are ``gmpy2.mpq`` values.  Polynomials are dense and immutable;
all canonical forms are deterministic so that equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz

MINUS_INF = float("-inf")

Rat = type(mpq(0))


def to_rat(value) -> "mpq":
    """Coerce int, Fraction, mpq or a string like ``"3/4"`` into ``mpq``."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        f = Fraction(value.strip())
        return mpq(f.numerator, f.denominator)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def rat_str(c) -> str:
    c = to_rat(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def bit_length(c) -> int:
    c = to_rat(c)
    return max(int(c.numerator).bit_length(), int(c.denominator).bit_length())


class UniPoly:
    """Polynomial in x with rational coefficients, stored low degree first."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=()):
        c = [to_rat(v) for v in coeffs]
        while c and not c[-1]:
            c.pop()
        self._c = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list) -> "UniPoly":
        # coeffs already mpq; trims trailing zeros
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        p = object.__new__(cls)
        p._c = tuple(coeffs)
        p._hash = None
        return p

    @classmethod
    def x(cls) -> "UniPoly":
        return cls._raw([mpq(0), mpq(1)])

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls._raw([to_rat(c)])

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        return cls._raw([mpq(0)] * k + [to_rat(c)])

    @classmethod
    def from_dict(cls, terms: dict) -> "UniPoly":
        if not terms:
            return cls._raw([])
        out = [mpq(0)] * (max(terms) + 1)
        for k, v in terms.items():
            out[k] += to_rat(v)
        return cls._raw(out)

    # -- inspection -----------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return self._c

    def terms(self) -> dict:
        return {k: v for k, v in enumerate(self._c) if v}

    @property
    def degree(self):
        return len(self._c) - 1 if self._c else MINUS_INF

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def lc(self):
        return self._c[-1] if self._c else mpq(0)

    def __getitem__(self, k: int):
        return self._c[k] if 0 <= k < len(self._c) else mpq(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction, Rat)):
            return self._c == UniPoly.const(other)._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("UniPoly", self._c))
        return self._hash

    # -- ring operations -----------------------------------------------
    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction, Rat, type(mpz(0)))):
            return UniPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return UniPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw([-v for v in self._c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rat, type(mpz(0)))):
            c = to_rat(other)
            if not c:
                return UniPoly._raw([])
            return UniPoly._raw([v * c for v in self._c])
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return UniPoly._raw([])
        out = [mpq(0)] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if not u:
                continue
            for j, v in enumerate(b):
                out[i + j] += u * v
        return UniPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result, base = UniPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other: "UniPoly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self._c)
        db = len(other._c) - 1
        inv = 1 / other._c[-1]
        if len(r) - 1 < db:
            return UniPoly._raw([]), self
        q = [mpq(0)] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if not c:
                continue
            t = c * inv
            q[k - db] = t
            for j, v in enumerate(other._c):
                r[k - db + j] -= t * v
        return UniPoly._raw(q), UniPoly._raw(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = divmod(self, other)
        if r:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "UniPoly") -> bool:
        if not self:
            return not other
        return not (other % self)

    # -- evaluation and substitution -----------------------------------
    def __call__(self, value):
        acc = 0
        for c in reversed(self._c):
            acc = acc * value + c
        return acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly._raw([])
        for c in reversed(self._c):
            acc = acc * inner + c
        return acc

    def shift(self, z) -> "UniPoly":
        """f(x + z), by Horner composition."""
        return self.compose(UniPoly._raw([to_rat(z), mpq(1)]))

    def scale(self, c) -> "UniPoly":
        """f(c*x)."""
        c = to_rat(c)
        out, p = [], mpq(1)
        for v in self._c:
            out.append(v * p)
            p *= c
        return UniPoly._raw(out)

    def derivative(self) -> "UniPoly":
        return UniPoly._raw([k * v for k, v in enumerate(self._c)][1:])

    # -- normalizations -------------------------------------------------
    def monic(self) -> "UniPoly":
        if not self._c:
            return self
        return self * (1 / self._c[-1])

    def content(self):
        """Positive rational c such that self / c is primitive over Z."""
        if not self._c:
            return mpq(0)
        num = mpz(0)
        den = mpz(1)
        for v in self._c:
            if v:
                num = gmpy2.gcd(num, v.numerator)
                den = gmpy2.lcm(den, v.denominator)
        return mpq(num, den)

    def primitive(self) -> "UniPoly":
        """Integer-primitive associate with positive leading coefficient."""
        if not self._c:
            return self
        c = self.content()
        if self._c[-1] < 0:
            c = -c
        return self * (1 / c)

    def __repr__(self) -> str:
        return f"UniPoly({self})"

    def __str__(self) -> str:
        return format_poly(self.terms(), "x")


def format_poly(terms: dict, var: str, compact: bool = False) -> str:
    """``3/4*x^2 - x + 1`` style, descending exponents; ``compact`` drops the spaces."""
    if not terms:
        return "0"
    parts = []
    for k in sorted(terms, reverse=True):
        c = to_rat(terms[k])
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = rat_str(a)
        else:
            mon = var if k == 1 else f"{var}^{k}"
            body = mon if a == 1 else f"{rat_str(a)}*{mon}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    sep = "{}{}" if compact else " {} {}"
    for sign, body in parts[1:]:
        out += sep.format(sign, body)
    return out


X = UniPoly.x()
ONE = UniPoly.const(1)
ZERO = UniPoly()


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd; gcd(a, 0) is a made monic and gcd(0, 0) = 0."""
    while b:
        a, b = b, (a % b).monic()
    return a.monic()


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if not a or not b:
        return ZERO
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: monic pairwise coprime square-free parts with multiplicities."""
    if f.is_zero():
        raise ValueError("square-free decomposition of zero")
    f = f.monic()
    if f.is_constant():
        return []
    out = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    i = 1
    while not b.is_constant():
        a = poly_gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        if not a.is_constant():
            out.append((a.monic(), i))
        i += 1
    return out


def _small_factorization(n: int) -> dict[int, int] | None:
    n = abs(n)
    if n > 10**12:
        return None
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(n: int) -> list[int] | None:
    fac = _small_factorization(n)
    if fac is None:
        return None
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _integer_coeffs(f: UniPoly) -> list[int]:
    g = f.primitive()
    return [int(v.numerator) for v in g.coeffs]


def _numeric_root_candidates(f: UniPoly) -> list:
    import numpy as np

    coeffs = [float(v) for v in reversed(f.coeffs)]
    lc = abs(_integer_coeffs(f)[-1])
    out = []
    for r in np.roots(coeffs):
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        out.append(to_rat(Fraction(float(r.real)).limit_denominator(lc)))
    return out


def rational_roots(f: UniPoly) -> list:
    """Distinct rational roots of a nonzero polynomial (see ``_rational_roots``)."""
    return _rational_roots(f)[0]


def _rational_roots(f: UniPoly) -> tuple[list, bool]:
    """(roots, exhaustive).  Exhaustive unless the constant or leading
    coefficient was too large to factor and numeric candidates were used."""
    if f.is_zero():
        raise ValueError("roots of zero polynomial")
    roots = []
    g = f
    if not g[0]:
        roots.append(mpq(0))
        while g and not g[0]:
            g = UniPoly._raw(list(g.coeffs[1:]))
    if g.is_constant():
        return roots, True
    ints = _integer_coeffs(g)
    a0, an = ints[0], ints[-1]
    num_divs, den_divs = _divisors(a0), _divisors(an)
    exhaustive = num_divs is not None and den_divs is not None
    if exhaustive:
        cands = {mpq(s * p, q) for p in num_divs for q in den_divs for s in (1, -1)}
    else:
        cands = set(_numeric_root_candidates(g))
    for r in sorted(cands):
        if not g(r):
            roots.append(r)
    return roots, exhaustive


@dataclass(frozen=True)
class FactorSet:
    """scalar * prod(f**m) with primitive, non-constant, pairwise non-associate f."""

    factors: tuple = ()
    scalar: object = field(default_factory=lambda: mpq(1))
    irreducibility_unverified: bool = False

    def expand(self) -> UniPoly:
        out = UniPoly.const(self.scalar)
        for f, m in self.factors:
            out = out * f**m
        return out

    def as_dict(self) -> dict:
        return {f: m for f, m in self.factors}


def _factor_key(f: UniPoly):
    return (f.degree, [abs(c) for c in f.coeffs], [c < 0 for c in f.coeffs])


def factor_partial(f: UniPoly) -> FactorSet:
    """Square-free decomposition, then split off every rational linear factor.

    Residual square-free factors without rational roots stay unsplit; in that
    case ``irreducibility_unverified`` is set unless the residual is
    quadratic or cubic (where having no rational root proves irreducibility)
    and the rational-root search was exhaustive.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    factors: list[tuple[UniPoly, int]] = []
    unverified = False
    for part, mult in squarefree_decomposition(f):
        rest = part
        roots, exhaustive = _rational_roots(part)
        for r in roots:
            lin = UniPoly._raw([-r, mpq(1)]).primitive()
            factors.append((lin, mult))
            rest = rest.exact_div(lin)
        if not rest.is_constant():
            factors.append((rest.primitive(), mult))
            if rest.degree > 3 or not exhaustive:
                unverified = True
    factors.sort(key=lambda fm: _factor_key(fm[0]))
    prod = UniPoly.const(1)
    for g, m in factors:
        prod = prod * g**m
    scalar = f.lc() / prod.lc()
    return FactorSet(tuple(factors), scalar, unverified)


def substitute_shift(f: UniPoly, z: int) -> UniPoly:
    return f.shift(z)


def substitute_scale(f: UniPoly, c) -> UniPoly:
    return f.scale(c)


class RatFunc:
    """num/den with gcd(num, den) = 1 and monic den."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        num = num if isinstance(num, UniPoly) else UniPoly.const(num)
        den = ONE if den is None else (den if isinstance(den, UniPoly) else UniPoly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = ZERO, ONE
        elif not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num, self.den = num, den
        self._hash = None

    @classmethod
    def _raw(cls, num: UniPoly, den: UniPoly) -> "RatFunc":
        r = object.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @classmethod
    def from_poly(cls, p: UniPoly) -> "RatFunc":
        return cls._raw(p, ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, UniPoly):
            return RatFunc._raw(other, ONE)
        if isinstance(other, (int, Fraction, Rat)):
            return RatFunc._raw(UniPoly.const(other), ONE)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc._raw(self.num * o.num, ONE)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.num) if self.den == ONE else hash((self.num, self.den))
        return self._hash

    def compose(self, inner: UniPoly) -> "RatFunc":
        return RatFunc(self.num.compose(inner), self.den.compose(inner))

    def shift(self, z) -> "RatFunc":
        return RatFunc(self.num.shift(z), self.den.shift(z))

    def scale(self, c) -> "RatFunc":
        return RatFunc(self.num.scale(c), self.den.scale(c))

    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


def poly_from_roots(*roots) -> UniPoly:
    out = ONE
    for r in roots:
        out = out * UniPoly._raw([-to_rat(r), mpq(1)])
    return out
