"""Skew polynomials sum c_b(x) * d^b over Q[x] or Q(x).

Four presets for the commutation rule d*x = sigma(x)*d + delta(x):

    weyl         sigma = id,        delta = d/dx
    shift        sigma(x) = x + 1,  delta = 0
    qcomm        sigma(x) = q*x,    delta = 0
    commutative  sigma = id,        delta = 0
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from gmpy2 import mpq

from .coeff import MINUS_INF, ONE, RatFunc, UniPoly, format_poly, poly_lcm, rat_str, to_rat

KINDS = ("weyl", "shift", "qcomm", "commutative")
DEFAULT_SYMBOLS = {"weyl": "d", "shift": "s", "qcomm": "y", "commutative": "y"}

POLYNOMIAL = "polynomial"
RATIONAL = "rational"


class AlgebraError(ValueError):
    pass


class InvolutionError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraSpec:
    kind: str
    q: object = None
    symbol: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise AlgebraError(f"unknown algebra kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "qcomm":
            if self.q is None:
                raise AlgebraError("qcomm algebra requires a parameter q")
            q = to_rat(self.q)
            if q == 0 or q == 1:
                raise AlgebraError("qcomm parameter q must differ from 0 and 1")
            object.__setattr__(self, "q", q)
        elif self.q is not None:
            raise AlgebraError(f"parameter q is only meaningful for qcomm, not {self.kind}")
        if self.symbol is None:
            object.__setattr__(self, "symbol", DEFAULT_SYMBOLS[self.kind])
        if self.symbol == "x" or not self.symbol.isidentifier():
            raise AlgebraError(f"invalid operator symbol {self.symbol!r}")

    # the coefficient maps act on UniPoly and RatFunc alike
    def sigma(self, c):
        if self.kind == "shift":
            return c.shift(1)
        if self.kind == "qcomm":
            return c.scale(self.q)
        return c

    def sigma_power(self, c, k: int):
        """sigma^k(c) for any integer k."""
        if k == 0 or self.kind in ("weyl", "commutative"):
            return c
        if self.kind == "shift":
            return c.shift(k)
        return c.scale(self.q**k)

    def delta(self, c):
        if self.kind == "weyl":
            return c.derivative()
        return None

    def describe(self) -> dict:
        out = {"kind": self.kind, "symbol": self.symbol}
        if self.q is not None:
            out["q"] = rat_str(self.q)
        return out


def _zero_of(layer):
    return UniPoly() if layer == POLYNOMIAL else RatFunc(0)


def _coerce_coeff(c, layer):
    if layer == POLYNOMIAL:
        if isinstance(c, UniPoly):
            return c
        if isinstance(c, RatFunc):
            if not c.is_polynomial():
                raise AlgebraError("rational coefficient in polynomial layer")
            return c.num * (1 / c.den.lc())
        return UniPoly.const(c)
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, UniPoly):
        return RatFunc._raw(c, ONE)
    return RatFunc(UniPoly.const(c))


class OrePoly:
    """Element of R* = K[x][d; sigma, delta] or R = K(x)[d; sigma, delta]."""

    __slots__ = ("algebra", "layer", "_t", "_hash")

    def __init__(self, algebra: AlgebraSpec, coeffs: dict | None = None, layer: str = POLYNOMIAL):
        if layer not in (POLYNOMIAL, RATIONAL):
            raise AlgebraError(f"unknown layer {layer!r}")
        self.algebra = algebra
        self.layer = layer
        t = {}
        for b, c in (coeffs or {}).items():
            if b < 0:
                raise AlgebraError("negative operator exponent")
            c = _coerce_coeff(c, layer)
            if c:
                t[b] = c
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, algebra, t: dict, layer) -> "OrePoly":
        f = object.__new__(cls)
        f.algebra, f.layer, f._t, f._hash = algebra, layer, t, None
        return f

    @classmethod
    def x(cls, algebra, layer=POLYNOMIAL) -> "OrePoly":
        return cls(algebra, {0: UniPoly.x()}, layer)

    @classmethod
    def op(cls, algebra, layer=POLYNOMIAL) -> "OrePoly":
        return cls(algebra, {1: ONE}, layer)

    @classmethod
    def const(cls, algebra, c, layer=POLYNOMIAL) -> "OrePoly":
        return cls(algebra, {0: c}, layer)

    @classmethod
    def zero(cls, algebra, layer=POLYNOMIAL) -> "OrePoly":
        return cls._raw(algebra, {}, layer)

    @classmethod
    def one(cls, algebra, layer=POLYNOMIAL) -> "OrePoly":
        return cls.const(algebra, 1, layer)

    @classmethod
    def from_terms(cls, algebra, terms: dict, layer=POLYNOMIAL) -> "OrePoly":
        """Build from {(op_exp, x_exp): coefficient}."""
        by_op: dict = {}
        for (b, a), c in terms.items():
            by_op.setdefault(b, {})[a] = c
        return cls(algebra, {b: UniPoly.from_dict(d) for b, d in by_op.items()}, layer)

    # -- inspection -----------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._t)

    def coeff(self, b: int):
        return self._t.get(b, _zero_of(self.layer))

    @property
    def degree(self):
        """Weighted degree: 1 for the operator, 0 for x."""
        return max(self._t) if self._t else MINUS_INF

    def lc(self):
        return self._t[max(self._t)] if self._t else _zero_of(self.layer)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_scalar(self) -> bool:
        """Operator-free (degree 0 or zero)."""
        return all(b == 0 for b in self._t)

    def is_constant(self) -> bool:
        return self.is_scalar() and all(c.is_constant() for c in self._t.values())

    def constant_value(self):
        if not self.is_constant():
            raise AlgebraError(f"{self} is not a constant")
        c = self.coeff(0)
        if self.layer == RATIONAL:
            return c.num[0] / c.den.lc()
        return c[0]

    def terms(self) -> dict:
        """{(op_exp, x_exp): rational} for the polynomial layer."""
        if self.layer != POLYNOMIAL:
            raise AlgebraError("terms() needs the polynomial layer")
        return {(b, a): v for b, c in self._t.items() for a, v in enumerate(c.coeffs) if v}

    def x_degree(self) -> int:
        if self.layer != POLYNOMIAL:
            raise AlgebraError("x_degree() needs the polynomial layer")
        return max((c.degree for c in self._t.values()), default=MINUS_INF)

    # -- layer conversion ----------------------------------------------
    def to_rational(self) -> "OrePoly":
        if self.layer == RATIONAL:
            return self
        return OrePoly._raw(self.algebra, {b: RatFunc._raw(c, ONE) for b, c in self._t.items()}, RATIONAL)

    def is_polynomial(self) -> bool:
        return self.layer == POLYNOMIAL or all(c.is_polynomial() for c in self._t.values())

    def to_polynomial(self) -> "OrePoly":
        if self.layer == POLYNOMIAL:
            return self
        if not self.is_polynomial():
            raise AlgebraError(f"{self} has denominators")
        return OrePoly(self.algebra, {b: c for b, c in self._t.items()}, POLYNOMIAL)

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "OrePoly"):
        if self.algebra != other.algebra:
            raise AlgebraError(f"algebra mismatch: {self.algebra} vs {other.algebra}")
        if self.layer != other.layer:
            raise AlgebraError(f"layer mismatch: {self.layer} vs {other.layer}")

    def _lift(self, other):
        if isinstance(other, OrePoly):
            self._check(other)
            return other
        if isinstance(other, (UniPoly, RatFunc)) or _is_number(other):
            return OrePoly(self.algebra, {0: other}, self.layer)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t = dict(self._t)
        for b, c in o._t.items():
            s = t[b] + c if b in t else c
            if s:
                t[b] = s
            else:
                t.pop(b, None)
        return OrePoly._raw(self.algebra, t, self.layer)

    __radd__ = __add__

    def __neg__(self):
        return OrePoly._raw(self.algebra, {b: -c for b, c in self._t.items()}, self.layer)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if _is_number(other):
            c = to_rat(other)
            if not c:
                return OrePoly.zero(self.algebra, self.layer)
            return OrePoly._raw(self.algebra, {b: v * c for b, v in self._t.items()}, self.layer)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return mul(self, o)

    def __rmul__(self, other):
        if _is_number(other):
            return self * other
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return mul(o, self)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = OrePoly.one(self.algebra, self.layer)
        for _ in range(n):
            result = mul(result, self)
        return result

    def left_scale(self, c) -> "OrePoly":
        """c(x) * self for c in K[x] or K(x): multiplies every coefficient."""
        c = _coerce_coeff(c, self.layer)
        if not c:
            return OrePoly.zero(self.algebra, self.layer)
        return OrePoly._raw(self.algebra, {b: c * v for b, v in self._t.items()}, self.layer)

    def __eq__(self, other) -> bool:
        if isinstance(other, OrePoly):
            if self.algebra != other.algebra:
                return False
            if self.layer == other.layer:
                return self._t == other._t
            return self.to_rational()._t == other.to_rational()._t
        if _is_number(other):
            return self._t == OrePoly.const(self.algebra, other, self.layer)._t
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self._t.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"OrePoly({self})"

    def __str__(self) -> str:
        return format_orepoly(self)


def _is_number(v) -> bool:
    from fractions import Fraction

    return isinstance(v, (int, Fraction, type(mpq(0)))) and not isinstance(v, bool)


def _left_op(algebra: AlgebraSpec, t: dict) -> dict:
    """d * (sum c_j d^j) = sum sigma(c_j) d^(j+1) + delta(c_j) d^j."""
    out: dict = {}
    for j, c in t.items():
        s = algebra.sigma(c)
        out[j + 1] = out[j + 1] + s if j + 1 in out else s
        d = algebra.delta(c)
        if d:
            out[j] = out[j] + d if j in out else d
    return {j: c for j, c in out.items() if c}


def mul(f: OrePoly, g: OrePoly) -> OrePoly:
    """Product in normal form, by iterating the first-order commutation rule."""
    f._check(g)
    if not f._t or not g._t:
        return OrePoly.zero(f.algebra, f.layer)
    alg = f.algebra
    out: dict = {}
    h = g._t
    for b in range(max(f._t) + 1):
        if b:
            h = _left_op(alg, h)
        c = f._t.get(b)
        if not c:
            continue
        for j, v in h.items():
            p = c * v
            out[j] = out[j] + p if j in out else p
    return OrePoly._raw(alg, {j: c for j, c in out.items() if c}, f.layer)


# -- canonical text ----------------------------------------------------------

def _coeff_text(c, layer) -> tuple[str, str, bool]:
    """(sign, body, is_single_term) for a coefficient."""
    if layer == RATIONAL and not c.is_polynomial():
        num = c.num
        sign = "-" if num.lc() < 0 else "+"
        if sign == "-":
            num = -num
        return sign, f"({format_poly(num.terms(), 'x', compact=True)})/({format_poly(c.den.terms(), 'x', compact=True)})", False
    p = c if layer == POLYNOMIAL else c.num * (1 / c.den.lc())
    sign = "-" if p.lc() < 0 else "+"
    if sign == "-":
        p = -p
    terms = p.terms()
    if len(terms) == 1:
        (k, a), = terms.items()
        mon = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        if not mon:
            return sign, rat_str(a), True
        return sign, mon if a == 1 else f"{rat_str(a)}*{mon}", True
    return sign, f"({format_poly(terms, 'x', compact=True)})", False


def format_orepoly(f: OrePoly) -> str:
    if not f._t:
        return "0"
    sym = f.algebra.symbol
    parts = []
    for b in sorted(f._t, reverse=True):
        c = f._t[b]
        if b == 0:
            if f.layer == POLYNOMIAL or c.is_polynomial():
                p = c if f.layer == POLYNOMIAL else c.num * (1 / c.den.lc())
                for k in sorted(p.terms(), reverse=True):
                    a = p[k]
                    sign = "-" if a < 0 else "+"
                    mon = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
                    a = abs(a)
                    body = rat_str(a) if not mon else (mon if a == 1 else f"{rat_str(a)}*{mon}")
                    parts.append((sign, body))
            else:
                sign, body, _ = _coeff_text(c, f.layer)
                parts.append((sign, body))
            continue
        opm = sym if b == 1 else f"{sym}^{b}"
        sign, body, _ = _coeff_text(c, f.layer)
        if body == "1":
            parts.append((sign, opm))
        else:
            parts.append((sign, f"{body}*{opm}"))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- involutions -------------------------------------------------------------

@dataclass(frozen=True)
class Involution:
    """Anti-automorphism determined by the images of x and the operator."""

    image_of_x: OrePoly
    image_of_op: OrePoly
    _op_powers: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        ix, iop = self.image_of_x, self.image_of_op
        if ix.algebra != iop.algebra:
            raise InvolutionError("images live in different algebras")
        if ix.layer != POLYNOMIAL or iop.layer != POLYNOMIAL:
            raise InvolutionError("involution images must be polynomial-layer")
        alg = ix.algebra
        x = OrePoly.x(alg)
        d = OrePoly.op(alg)
        # image of d*x - sigma(x)*d - delta(x) must vanish
        lhs = mul(ix, iop)
        sig_x = alg.sigma(UniPoly.x())
        rhs = mul(iop, self._subst(sig_x))
        dx = alg.delta(UniPoly.x())
        if dx:
            rhs = rhs + self._subst(dx)
        if lhs != rhs:
            raise InvolutionError(
                f"x -> {ix}, {alg.symbol} -> {iop} does not respect the commutation rule"
            )
        if self.apply(ix) != x or self.apply(iop) != d:
            raise InvolutionError(f"x -> {ix}, {alg.symbol} -> {iop} is not an involution")

    @property
    def algebra(self) -> AlgebraSpec:
        return self.image_of_x.algebra

    @cached_property
    def x_image_poly(self) -> UniPoly | None:
        """theta(x) as a polynomial in x when it is operator-free."""
        if self.image_of_x.is_scalar():
            return self.image_of_x.coeff(0)
        return None

    def _subst(self, p: UniPoly) -> OrePoly:
        """theta(p(x)) = p(theta(x))."""
        alg = self.algebra
        xp = self.x_image_poly
        if xp is not None:
            return OrePoly.const(alg, p.compose(xp))
        acc = OrePoly.zero(alg)
        for c in reversed(p.coeffs):
            acc = mul(acc, self.image_of_x) + OrePoly.const(alg, c)
        return acc

    def _op_power(self, b: int, layer) -> OrePoly:
        key = (b, layer)
        if key not in self._op_powers:
            base = self.image_of_op if layer == POLYNOMIAL else self.image_of_op.to_rational()
            self._op_powers[key] = OrePoly.one(self.algebra, layer) if b == 0 else mul(self._op_power(b - 1, layer), base)
        return self._op_powers[key]

    def apply(self, f: OrePoly) -> OrePoly:
        """theta(sum c_b d^b) = sum theta(d)^b * c_b(theta(x))."""
        if f.algebra != self.algebra:
            raise InvolutionError("involution applied to an element of another algebra")
        out = OrePoly.zero(f.algebra, f.layer)
        for b, c in f._t.items():
            if f.layer == POLYNOMIAL:
                tc = self._subst(c)
            else:
                xp = self.x_image_poly
                if xp is None:
                    raise InvolutionError("rational-layer involution needs an operator-free image of x")
                tc = OrePoly.const(f.algebra, c.compose(xp), RATIONAL)
            out = out + mul(self._op_power(b, f.layer), tc)
        return out

    def describe(self) -> dict:
        return {"x": str(self.image_of_x), "op": str(self.image_of_op)}


def default_involution(algebra: AlgebraSpec) -> Involution:
    x, d = OrePoly.x(algebra), OrePoly.op(algebra)
    if algebra.kind == "weyl":
        return Involution(x, -d)
    if algebra.kind == "shift":
        return Involution(-x, d)
    if algebra.kind == "commutative":
        return Involution(x, d)
    raise InvolutionError("qcomm algebras have no default involution; supply one explicitly")


def apply_involution(theta: Involution, f: OrePoly) -> OrePoly:
    return theta.apply(f)


# -- matrices ----------------------------------------------------------------

class OreMatrix:
    """Dense p x q matrix of OrePoly sharing one algebra and layer."""

    __slots__ = ("algebra", "layer", "rows", "cols", "entries")

    def __init__(self, algebra: AlgebraSpec, entries, layer: str | None = None):
        grid = [list(r) for r in entries]
        if not grid or not grid[0]:
            raise AlgebraError("matrix needs at least one row and one column")
        q = len(grid[0])
        if any(len(r) != q for r in grid):
            raise AlgebraError("ragged matrix rows")
        if layer is None:
            layer = POLYNOMIAL
            for r in grid:
                for e in r:
                    if isinstance(e, OrePoly) and e.layer == RATIONAL:
                        layer = RATIONAL
                    if isinstance(e, RatFunc):
                        layer = RATIONAL
        out = []
        for r in grid:
            row = []
            for e in r:
                if isinstance(e, OrePoly):
                    if e.algebra != algebra:
                        raise AlgebraError("matrix entry from another algebra")
                    if e.layer != layer:
                        e = e.to_rational() if layer == RATIONAL else e.to_polynomial()
                else:
                    e = OrePoly(algebra, {0: e}, layer)
                row.append(e)
            out.append(tuple(row))
        self.algebra = algebra
        self.layer = layer
        self.rows = len(out)
        self.cols = q
        self.entries = tuple(out)

    @classmethod
    def identity(cls, algebra, n: int, layer=POLYNOMIAL) -> "OreMatrix":
        return cls(algebra, [[1 if i == j else 0 for j in range(n)] for i in range(n)], layer)

    @classmethod
    def zeros(cls, algebra, p: int, q: int, layer=POLYNOMIAL) -> "OreMatrix":
        return cls(algebra, [[0] * q for _ in range(p)], layer)

    @classmethod
    def diagonal(cls, algebra, diag, p: int | None = None, q: int | None = None, layer=None) -> "OreMatrix":
        diag = list(diag)
        p = p or len(diag)
        q = q or len(diag)
        rows = [[0] * q for _ in range(p)]
        for i, e in enumerate(diag):
            rows[i][i] = e
        return cls(algebra, rows, layer)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "OreMatrix":
        return OreMatrix(self.algebra, list(zip(*self.entries)), self.layer)

    def to_rational(self) -> "OreMatrix":
        return OreMatrix(self.algebra, self.entries, RATIONAL)

    def to_polynomial(self) -> "OreMatrix":
        return OreMatrix(self.algebra, [[e.to_polynomial() for e in r] for r in self.entries], POLYNOMIAL)

    def map(self, fn) -> "OreMatrix":
        return OreMatrix(self.algebra, [[fn(e) for e in r] for r in self.entries], self.layer)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def zero_rows(self) -> list[int]:
        return [i for i, r in enumerate(self.entries) if all(e.is_zero() for e in r)]

    def __matmul__(self, other: "OreMatrix") -> "OreMatrix":
        if self.cols != other.rows:
            raise AlgebraError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.algebra != other.algebra:
            raise AlgebraError("algebra mismatch in matrix product")
        a, b = self, other
        if a.layer != b.layer:
            a, b = a.to_rational(), b.to_rational()
        out = []
        for i in range(a.rows):
            row = []
            for j in range(b.cols):
                acc = OrePoly.zero(a.algebra, a.layer)
                for k in range(a.cols):
                    u, v = a.entries[i][k], b.entries[k][j]
                    if u and v:
                        acc = acc + mul(u, v)
                row.append(acc)
            out.append(row)
        return OreMatrix(a.algebra, out, a.layer)

    def __add__(self, other: "OreMatrix") -> "OreMatrix":
        if self.shape != other.shape:
            raise AlgebraError("shape mismatch in matrix sum")
        return OreMatrix(
            self.algebra,
            [[u + v for u, v in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            self.layer,
        )

    def __neg__(self) -> "OreMatrix":
        return self.map(lambda e: -e)

    def __sub__(self, other: "OreMatrix") -> "OreMatrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OreMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            u == v for r, s in zip(self.entries, other.entries) for u, v in zip(r, s)
        )

    def __hash__(self):
        return hash(self.entries)

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in r] for r in self.entries]

    def __repr__(self) -> str:
        return "OreMatrix(" + repr(self.to_strings()) + ")"

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(r) + "]" for r in self.to_strings())


def theta_transpose(theta: Involution, m: OreMatrix) -> OreMatrix:
    """Entrywise involution of the transpose; theta~(AB) = theta~(B) theta~(A)."""
    return OreMatrix(m.algebra, [[theta.apply(e) for e in col] for col in zip(*m.entries)], m.layer)


def clear_denominators(m: OreMatrix) -> tuple[OreMatrix, OreMatrix]:
    """Diagonal T over K[x] with T*M fraction-free; T[i,i] is the lcm of row i's denominators."""
    zr = m.zero_rows()
    if zr:
        raise AlgebraError(f"matrix has zero row(s) {zr}")
    alg = m.algebra
    if m.layer == POLYNOMIAL:
        return OreMatrix.identity(alg, m.rows), m
    diag, rows = [], []
    for r in m.entries:
        den = ONE
        for e in r:
            for c in e._t.values():
                den = poly_lcm(den, c.den)
        diag.append(OrePoly.const(alg, den))
        rows.append([e.left_scale(RatFunc._raw(den, ONE)).to_polynomial() for e in r])
    t = OreMatrix.diagonal(alg, diag, layer=POLYNOMIAL)
    return t, OreMatrix(alg, rows, POLYNOMIAL)
