"""Left Groebner bases of submodules of R*^(1 x q).

Monomials x^a d^b e_k are ordered position over term: the component index
decides first (larger index is larger), then the operator exponent, then the
x exponent.  Internally a vector is a dict {(k, b, a): rational}, so the
module order is plain tuple comparison of the keys.

Components are numbered from 0.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import comb

import gmpy2
from gmpy2 import mpq

from .ore import POLYNOMIAL, AlgebraError, AlgebraSpec, OreMatrix, OrePoly

_ONE = mpq(1)


@dataclass(frozen=True, order=True)
class ModuleMonomial:
    component: int
    op_exp: int
    x_exp: int

    def divides(self, other: "ModuleMonomial") -> bool:
        return (
            self.component == other.component
            and self.op_exp <= other.op_exp
            and self.x_exp <= other.x_exp
        )

    def __str__(self) -> str:
        return f"x^{self.x_exp}*d^{self.op_exp}*e{self.component}"


@dataclass(frozen=True)
class ModuleOrder:
    """Position over term on q components."""

    q: int

    def key(self, m: ModuleMonomial) -> tuple:
        if not 0 <= m.component < self.q:
            raise ValueError(f"component {m.component} outside 0..{self.q - 1}")
        return (m.component, m.op_exp, m.x_exp)

    def less(self, a: ModuleMonomial, b: ModuleMonomial) -> bool:
        return self.key(a) < self.key(b)


# -- multiplication table ----------------------------------------------------

class _MulTable:
    """Memo of d^v * x^a as tuples of ((op_exp, x_exp), coefficient)."""

    def __init__(self, algebra: AlgebraSpec):
        self.algebra = algebra
        self._rows: dict = {}
        self._sigma: dict = {}

    def _sigma_mono(self, e: int) -> tuple:
        r = self._sigma.get(e)
        if r is None:
            kind = self.algebra.kind
            if kind == "shift":
                r = tuple((i, mpq(comb(e, i))) for i in range(e + 1))
            elif kind == "qcomm":
                r = ((e, self.algebra.q**e),)
            else:
                r = ((e, _ONE),)
            self._sigma[e] = r
        return r

    def get(self, v: int, a: int) -> tuple:
        key = (v, a)
        r = self._rows.get(key)
        if r is not None:
            return r
        if v == 0:
            r = (((0, a), gmpy2.mpz(1)),)
        else:
            weyl = self.algebra.kind == "weyl"
            out: dict = {}
            for (j, e), c in self.get(v - 1, a):
                for e2, c2 in self._sigma_mono(e):
                    k = (j + 1, e2)
                    out[k] = out.get(k, 0) + c * c2
                if weyl and e:
                    k = (j, e - 1)
                    out[k] = out.get(k, 0) + c * e
            # integer entries stay mpz so the fraction-free engine never sees mpq
            r = tuple((k, gmpy2.mpz(c) if c.denominator == 1 else c) for k, c in out.items() if c)
        self._rows[key] = r
        return r

    def lead_factor(self, v: int, a: int):
        """Leading coefficient of d^v * x^a."""
        if self.algebra.kind == "qcomm":
            return self.algebra.q ** (v * a)
        return _ONE


_TABLES: dict = {}


def _table(algebra: AlgebraSpec) -> _MulTable:
    t = _TABLES.get(algebra)
    if t is None:
        t = _TABLES[algebra] = _MulTable(algebra)
    return t


def _lmul_mono(table: _MulTable, u: int, v: int, vec: dict, coef=None) -> dict:
    """coef * x^u d^v * vec."""
    out: dict = {}
    for (k, b, a), c in vec.items():
        cc = c if coef is None else c * coef
        for (j, e), t in table.get(v, a):
            key = (k, j + b, e + u)
            out[key] = out.get(key, 0) + cc * t
    return {key: c for key, c in out.items() if c}


def _lmul_poly(table: _MulTable, poly: dict, vec: dict) -> dict:
    """poly * vec for poly given as {(op_exp, x_exp): c}."""
    out: dict = {}
    for (v, u), coef in poly.items():
        for key, c in _lmul_mono(table, u, v, vec, coef).items():
            out[key] = out.get(key, 0) + c
    return {key: c for key, c in out.items() if c}


def _integerize(f: dict) -> tuple[dict, object]:
    """(L*f, L) with L the lcm of the coefficient denominators, as mpz values."""
    L = gmpy2.mpz(1)
    for c in f.values():
        if isinstance(c, type(_ONE)):
            L = gmpy2.lcm(L, c.denominator)
    if L == 1:
        return {k: gmpy2.mpz(c) for k, c in f.items()}, L
    return {k: gmpy2.mpz(c * L) for k, c in f.items()}, L


def _combine(f: dict, a, b, g: dict) -> None:
    """f = a*f - b*g in place, integer coefficients."""
    if a != 1:
        for key in f:
            f[key] *= a
    for key, c in g.items():
        nv = f.get(key, 0) - b * c
        if nv:
            f[key] = nv
        else:
            f.pop(key, None)


def _content(f: dict):
    if not f:
        return gmpy2.mpz(0)
    vals = list(f.values())
    # a few coefficients usually settle it
    g = gmpy2.gcd(*vals[:3])
    if g == 1 or len(vals) <= 3:
        return g
    return gmpy2.gcd(g, *vals[3:])


def _divide(f: dict, s) -> None:
    if s != 1:
        for key in f:
            f[key] = gmpy2.divexact(f[key], s)


class _Cof:
    """Cofactor row num/den with integer num and positive den."""

    __slots__ = ("num", "den")

    def __init__(self, num: dict, den):
        self.num = num
        self.den = den

    def combine(self, a, b, other: "_Cof") -> None:
        # self = a*self - b*other
        den = gmpy2.lcm(self.den, other.den)
        _combine(self.num, a * gmpy2.divexact(den, self.den), b * gmpy2.divexact(den, other.den), other.num)
        self.den = den

    def scale_down(self, s) -> None:
        """self /= s for a positive integer s."""
        self.den *= s
        g = gmpy2.gcd(_content(self.num), self.den)
        if g != 1:
            _divide(self.num, g)
            self.den = gmpy2.divexact(self.den, g)

    def copy(self) -> "_Cof":
        return _Cof(dict(self.num), self.den)

    def rational(self) -> dict:
        return {k: mpq(c, self.den) for k, c in self.num.items()}


def _primitive_factor(f: dict):
    """s with s*f integer, primitive, and sign unchanged."""
    den = gmpy2.mpz(1)
    num = gmpy2.mpz(0)
    for c in f.values():
        den = gmpy2.lcm(den, c.denominator)
        num = gmpy2.gcd(num, c.numerator)
    return mpq(den, num) if num else _ONE


def _max_bits(f: dict) -> int:
    """Largest coefficient bit length of an integer vector."""
    return max(map(gmpy2.bit_length, f.values()), default=0)


# -- public vector type ------------------------------------------------------

class ModuleVector:
    """Row vector of q polynomial-layer OrePoly entries."""

    __slots__ = ("algebra", "q", "_t")

    def __init__(self, algebra: AlgebraSpec, q: int, terms: dict):
        self.algebra = algebra
        self.q = q
        self._t = {k: mpq(c) for k, c in terms.items() if c}

    @classmethod
    def from_entries(cls, entries) -> "ModuleVector":
        entries = list(entries)
        if not entries:
            raise AlgebraError("empty vector")
        alg = entries[0].algebra
        t = {}
        for k, e in enumerate(entries):
            if e.algebra != alg:
                raise AlgebraError("entries from different algebras")
            if e.layer != POLYNOMIAL:
                e = e.to_polynomial()
            for (b, a), c in e.terms().items():
                t[(k, b, a)] = c
        return cls(alg, len(entries), t)

    def entries(self) -> list[OrePoly]:
        return _entries(self.algebra, self.q, self._t)

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    @property
    def lm(self) -> ModuleMonomial:
        if not self._t:
            raise ValueError("zero vector has no leading monomial")
        return ModuleMonomial(*max(self._t))

    @property
    def lc(self):
        return self._t[max(self._t)]

    @property
    def lpos(self) -> int:
        return self.lm.component

    @property
    def degree(self) -> int:
        return self.lm.op_exp

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.algebra == other.algebra and self.q == other.q and self._t == other._t

    def __hash__(self) -> int:
        return hash((self.q, frozenset(self._t.items())))

    def __repr__(self) -> str:
        return "ModuleVector([" + ", ".join(str(e) for e in self.entries()) + "])"


def _entries(algebra, q: int, t: dict) -> list[OrePoly]:
    per: list[dict] = [{} for _ in range(q)]
    for (k, b, a), c in t.items():
        per[k][(b, a)] = c
    return [OrePoly.from_terms(algebra, d) for d in per]


def _matrix_rows(m: OreMatrix) -> list[dict]:
    if m.layer != POLYNOMIAL:
        raise AlgebraError("Groebner bases need polynomial-layer input")
    rows = []
    for r in m.entries:
        t = {}
        for k, e in enumerate(r):
            for (b, a), c in e.terms().items():
                t[(k, b, a)] = c
        rows.append(t)
    return rows


# -- engine ------------------------------------------------------------------

@dataclass
class GBStats:
    reductions: int = 0
    spolys: int = 0
    max_bits: int = 0

    def as_dict(self) -> dict:
        return {"reductions": self.reductions, "spolys": self.spolys, "max_bits": self.max_bits}


class _Engine:
    """Fraction-free Buchberger on integer vectors.

    vecs[i] is primitive with mpz coefficients; cofs[i] expresses it in the
    input rows.  Reduction steps use f <- a*f - b*(m*g) with a, b coprime.
    """

    def __init__(self, algebra: AlgebraSpec, track: bool, stats: GBStats | None = None):
        self.table = _table(algebra)
        self.track = track
        self.stats = stats or GBStats()
        self.vecs: list[dict] = []
        self.cofs: list[_Cof | None] = []
        self.lms: list[tuple] = []
        self.alive: list[bool] = []
        self.by_comp: dict[int, list[int]] = {}
        self.pending: set = set()
        self.created: set = set()

    def _divisor(self, key: tuple, skip: int = -1) -> int | None:
        k, b, a = key
        for i in self.by_comp.get(k, ()):
            if i != skip and self.alive[i]:
                _, gb, ga = self.lms[i]
                if gb <= b and ga <= a:
                    return i
        return None

    def _multiple(self, i: int, key: tuple):
        """(m*g_i, cofactor of it, lc) for the monomial m with lm(m*g_i) = key, scaled to integers."""
        _, b, a = key
        _, gb, ga = self.lms[i]
        u, v = a - ga, b - gb
        mg, L = _integerize(_lmul_mono(self.table, u, v, self.vecs[i]))
        mc = None
        if self.track:
            c = self.cofs[i]
            raw = _lmul_mono(self.table, u, v, c.num)
            if L != 1:
                raw = {k: x * L for k, x in raw.items()}
            num, L2 = _integerize(raw)
            mc = _Cof(num, c.den * L2)
        return mg, mc, mg[key]

    def _normalize(self, f: dict, fc: _Cof | None) -> None:
        s = _content(f)
        if s != 1:
            _divide(f, s)
            if fc is not None:
                fc.scale_down(s)

    def reduce(self, f: dict, fc: _Cof | None, full: bool, skip: int = -1):
        """Reduce integer f (and its cofactor) in place against the live basis.

        The result is a nonzero rational multiple of the true remainder; the
        cofactor follows the same scaling.
        """
        frontier = None
        while f:
            if frontier is None:
                t = max(f)
            else:
                below = [key for key in f if key < frontier]
                if not below:
                    break
                t = max(below)
            i = self._divisor(t, skip)
            if i is None:
                if not full:
                    break
                frontier = t
                continue
            mg, mc, lc = self._multiple(i, t)
            g = gmpy2.gcd(f[t], lc)
            a, b = gmpy2.divexact(lc, g), gmpy2.divexact(f[t], g)
            if a < 0:
                a, b = -a, -b
            _combine(f, a, b, mg)
            if fc is not None:
                fc.combine(a, b, mc)
            f.pop(t, None)
            self.stats.reductions += 1
            if f:
                self._normalize(f, fc)
                self.stats.max_bits = max(self.stats.max_bits, _max_bits(f))
        return f, fc

    def _push_pairs(self, i: int, heap: list, counter: list):
        k, b, a = self.lms[i]
        for j in self.by_comp.get(k, ()):
            if j != i and self.alive[j]:
                _, b2, a2 = self.lms[j]
                heapq.heappush(heap, ((k, max(b, b2), max(a, a2)), counter[0], j, i))
                self.pending.add((j, i))
                self.created.add((j, i))
                counter[0] += 1

    def _treated(self, i: int, j: int) -> bool:
        key = (min(i, j), max(i, j))
        return key in self.created and key not in self.pending

    def _chain(self, i: int, j: int, lcm: tuple) -> bool:
        """Chain criterion: some k with lm_k | lcm whose pairs with i and j are already treated."""
        k0, b, a = lcm
        for k in self.by_comp[k0]:
            if k == i or k == j:
                continue
            _, bk, ak = self.lms[k]
            if bk <= b and ak <= a and self._treated(i, k) and self._treated(j, k):
                return True
        return False

    def add(self, f: dict, fc: _Cof | None, heap: list, counter: list):
        i = len(self.vecs)
        self.vecs.append(f)
        self.cofs.append(fc)
        self.lms.append(max(f))
        self.alive.append(True)
        self.by_comp.setdefault(self.lms[i][0], []).append(i)
        self._push_pairs(i, heap, counter)
        # elements with a divisible lm retire; their queued pairs (including the
        # one with i) still run. Reducing them eagerly instead swells coefficients.
        k, b, a = self.lms[i]
        for j in self.by_comp[k]:
            if j != i and self.alive[j]:
                _, b2, a2 = self.lms[j]
                if b <= b2 and a <= a2:
                    self.alive[j] = False

    def spoly(self, i: int, j: int, lcm: tuple):
        mi, ci, li = self._multiple(i, lcm)
        mj, cj, lj = self._multiple(j, lcm)
        g = gmpy2.gcd(li, lj)
        a, b = gmpy2.divexact(lj, g), gmpy2.divexact(li, g)
        # a*mi - b*mj
        _combine(mi, a, b, mj)
        if ci is not None:
            ci.combine(a, b, cj)
        self.stats.spolys += 1
        return mi, ci

    def start(self, row: dict, idx: int) -> tuple[dict, _Cof | None]:
        """Integer primitive copy of an input row with cofactor e_idx."""
        f, L = _integerize(row)
        fc = _Cof({(idx, 0, 0): L}, gmpy2.mpz(1)) if self.track else None
        self._normalize(f, fc)
        return f, fc

    def run(self, rows: list[dict]):
        heap: list = []
        counter = [0]
        for idx, row in enumerate(rows):
            if not row:
                continue
            f, fc = self.start(row, idx)
            f, fc = self.reduce(f, fc, full=False)
            if f:
                self.add(f, fc, heap, counter)
        while heap:
            lcm, _, i, j = heapq.heappop(heap)
            self.pending.discard((i, j))
            if self._chain(i, j, lcm):
                continue
            s, sc = self.spoly(i, j, lcm)
            if not s:
                continue
            self._normalize(s, sc)
            s, sc = self.reduce(s, sc, full=False)
            if s:
                self.add(s, sc, heap, counter)
        return self.finish()

    def finish(self):
        # minimal basis: drop elements whose lm is divisible by another live lm
        for i in range(len(self.vecs)):
            if not self.alive[i]:
                continue
            k, b, a = self.lms[i]
            for j in self.by_comp[k]:
                if j == i or not self.alive[j]:
                    continue
                _, b2, a2 = self.lms[j]
                if b2 <= b and a2 <= a and ((b2, a2) != (b, a) or j < i):
                    self.alive[i] = False
                    break
        live = [i for i in range(len(self.vecs)) if self.alive[i]]
        # tail interreduction; leading monomials are fixed from here on
        for i in live:
            self.reduce(self.vecs[i], self.cofs[i], full=True, skip=i)
        out = []
        for i in live:
            f, fc = self.vecs[i], self.cofs[i]
            if f[self.lms[i]] < 0:
                for key in f:
                    f[key] = -f[key]
                if fc is not None:
                    fc.num = {k: -c for k, c in fc.num.items()}
            out.append((self.lms[i], {k: mpq(c) for k, c in f.items()}, fc.rational() if fc else None))
        out.sort(key=lambda e: e[0])
        return out


@dataclass(frozen=True)
class GBResult:
    """Reduced left GB sorted ascending by leading monomial.

    ``cofactors @ input == basis_matrix()`` holds exactly.
    """

    basis: list
    cofactors: OreMatrix | None
    stats: GBStats = field(default_factory=GBStats)

    def basis_matrix(self) -> OreMatrix:
        if not self.basis:
            raise ValueError("empty basis")
        return OreMatrix(self.basis[0].algebra, [v.entries() for v in self.basis])

    def __len__(self) -> int:
        return len(self.basis)


def buchberger(rows: OreMatrix, stats: GBStats | None = None) -> GBResult:
    """Reduced left GB of the row module of ``rows`` with exact cofactors."""
    alg = rows.algebra
    eng = _Engine(alg, track=True, stats=stats)
    out = eng.run(_matrix_rows(rows))
    basis = [ModuleVector(alg, rows.cols, f) for _, f, _ in out]
    cof = None
    if out:
        cof = OreMatrix(alg, [_entries(alg, rows.rows, fc) for _, _, fc in out])
    return GBResult(basis, cof, eng.stats)


def left_reduce(v: ModuleVector, G: list) -> tuple[ModuleVector, list[OrePoly]]:
    """Full left normal form: v = sum(cof[i] * G[i]) + remainder."""
    alg = v.algebra
    n = len(G)
    eng = _Engine(alg, track=True)
    for i, g in enumerate(G):
        if g.algebra != alg or g.q != v.q:
            raise AlgebraError("vectors from different modules")
        if g.is_zero():
            eng.vecs.append({})
            eng.cofs.append(None)
            eng.lms.append(None)
            eng.alive.append(False)
            continue
        f, fc = eng.start(g._t, i)
        eng.vecs.append(f)
        eng.cofs.append(fc)
        eng.lms.append(max(f))
        eng.alive.append(True)
        eng.by_comp.setdefault(max(f)[0], []).append(i)
    if v.is_zero():
        return ModuleVector(alg, v.q, {}), [OrePoly.zero(alg) for _ in G]
    # v carries the extra index n; its weight w stays a constant, so
    # w*v = f + sum(-cof_i * G_i)
    f, fc = eng.start(v._t, n)
    f, fc = eng.reduce(f, fc, full=True)
    w = fc.rational().pop((n, 0, 0))
    per = fc.rational()
    per.pop((n, 0, 0))
    rem = {k: mpq(c) / w for k, c in f.items()}
    cof = [-e for e in _entries(alg, n + 1, {k: c / w for k, c in per.items()})][:n]
    return ModuleVector(alg, v.q, rem), cof


def _augmented_gb(algebra, rows: list[dict], ident_pos: list[int], offset: int, stats=None):
    aug = []
    for pos, row in zip(ident_pos, rows):
        t = {(pos, 0, 0): _ONE}
        for (k, b, a), c in row.items():
            t[(k + offset, b, a)] = c
        aug.append(t)
    eng = _Engine(algebra, track=False, stats=stats)
    return eng.run(aug)


def syzygies(rows: OreMatrix, stats: GBStats | None = None) -> list[ModuleVector]:
    """Reduced GB of {s : s * rows = 0}, as vectors with rows.rows components."""
    p = rows.rows
    out = _augmented_gb(rows.algebra, _matrix_rows(rows), list(range(p)), p, stats)
    res = []
    for lm, f, _ in out:
        if lm[0] < p:
            res.append(ModuleVector(rows.algebra, p, f))
    return res


def kernel_rows(P: OreMatrix, stats: GBStats | None = None) -> list[OrePoly]:
    """GB generators of {c : c * P[0] in the row span of P[1:]}.

    Syzygies of the stacked rows projected to the first coordinate.
    """
    if P.rows < 1:
        raise ValueError("need at least the candidate row")
    r = P.rows - 1
    rows = _matrix_rows(P)
    # rows of M sit at the lowest identity positions, the candidate just above
    ident = [r] + list(range(r))
    out = _augmented_gb(P.algebra, rows, ident, r + 1, stats)
    res = []
    for lm, f, _ in out:
        if lm[0] == r:
            t = {(b, a): c for (k, b, a), c in f.items() if k == r}
            res.append(OrePoly.from_terms(P.algebra, t))
    return res


# -- rational layer ----------------------------------------------------------
# Over R = K(x)[d; sigma, delta] the leading monomials d^b e_k of one position
# are totally ordered by divisibility, so a reduced basis has one monic
# element per occupied position (a Hermite form).

def _rat_vec(entries) -> dict:
    t = {}
    for k, e in enumerate(entries):
        for b, c in e.to_rational().coeffs.items():
            t[(k, b)] = c
    return t


def _rat_left_op(algebra: AlgebraSpec, vec: dict) -> dict:
    """d * vec for vec = {(k, b): RatFunc}."""
    out: dict = {}
    for (k, b), c in vec.items():
        s = algebra.sigma(c)
        key = (k, b + 1)
        out[key] = out[key] + s if key in out else s
        dl = algebra.delta(c)
        if dl:
            key = (k, b)
            out[key] = out[key] + dl if key in out else dl
    return {key: c for key, c in out.items() if c}


class RationalModuleBasis:
    """Reduced monic basis over K(x)[d] of the row module of a matrix."""

    def __init__(self, rows: OreMatrix):
        self.algebra = rows.algebra
        self.q = rows.cols
        self._by_pos: dict[int, dict] = {}
        self._powers: dict = {}
        queue = [_rat_vec(r) for r in rows.entries]
        while queue:
            f = self.normal_form(queue.pop())
            if not f:
                continue
            lm = max(f)
            inv = f[lm].inverse()
            f = {key: inv * c for key, c in f.items()}
            old = self._by_pos.pop(lm[0], None)
            self._powers = {}
            if old is not None:
                queue.append(old)
            self._by_pos[lm[0]] = f
        # tail reduction, highest position first is enough since lower
        # positions never reach higher ones
        for k in sorted(self._by_pos):
            g = self._by_pos.pop(k)
            self._powers = {}
            self._by_pos[k] = self.normal_form(g)
        self._powers = {}

    def _shifted(self, k: int, v: int) -> dict:
        key = (k, v)
        r = self._powers.get(key)
        if r is None:
            r = self._by_pos[k] if v == 0 else _rat_left_op(self.algebra, self._shifted(k, v - 1))
            self._powers[key] = r
        return r

    @property
    def alphas(self) -> dict:
        return {k: max(g)[1] for k, g in sorted(self._by_pos.items())}

    def is_full_rank(self) -> bool:
        return len(self._by_pos) == self.q

    def dimension(self) -> int:
        if not self.is_full_rank():
            raise ValueError("module is not finite dimensional over K(x)")
        return sum(self.alphas.values())

    def normal_form(self, vec: dict) -> dict:
        """Full reduction; the result only has terms d^b e_k with b < alpha_k."""
        f = dict(vec)
        frontier = None
        while f:
            keys = list(f) if frontier is None else [key for key in f if key < frontier]
            if not keys:
                break
            t = max(keys)
            g = self._by_pos.get(t[0])
            if g is None or max(g)[1] > t[1]:
                frontier = t
                continue
            c = f[t]
            for key, v in self._shifted(t[0], t[1] - max(g)[1]).items():
                nv = f[key] - c * v if key in f else -(c * v)
                if nv:
                    f[key] = nv
                else:
                    f.pop(key, None)
            f.pop(t, None)
        return f

    def contains(self, entries) -> bool:
        return not self.normal_form(_rat_vec(entries))


def primitive_operator(c: OrePoly) -> OrePoly:
    """Fraction-free associate: clear denominators, divide out the K[x]-content,
    then make the integer coefficients primitive with positive leading one."""
    from .coeff import ONE, poly_gcd, poly_lcm

    if c.is_zero():
        return c
    den = ONE
    for v in c.coeffs.values():
        den = poly_lcm(den, v.den if c.layer != POLYNOMIAL else ONE)
    polys = {}
    for b, v in c.coeffs.items():
        if c.layer != POLYNOMIAL:
            v = v.num * den.exact_div(v.den)
        polys[b] = v
    g = None
    for v in polys.values():
        g = v if g is None else poly_gcd(g, v)
    polys = {b: v.exact_div(g) for b, v in polys.items()}
    t = {(b, a): cf for b, v in polys.items() for a, cf in enumerate(v.coeffs) if cf}
    s = _primitive_factor(t)
    top = polys[max(polys)].lc()
    if top * s < 0:
        s = -s
    return OrePoly.from_terms(c.algebra, {key: cf * s for key, cf in t.items()})


def kernel_generator(P: OreMatrix, basis: "RationalModuleBasis | None" = None) -> tuple[OrePoly, int]:
    """Monic generator over K(x)[d] of {c : c * P[0] in the row span of P[1:]}.

    The rows below the first must have full rank.  The generator is the first
    K(x)-linear dependency among the normal forms of d^j * P[0] (a Krylov
    sequence), so its degree is at most the dimension of the quotient module.
    Returns (generator, dimension).
    """
    alg = P.algebra
    rows = OreMatrix(alg, P.entries[1:], P.layer)
    basis = basis or RationalModuleBasis(rows)
    if not basis.is_full_rank():
        raise ValueError("the relation rows do not have full rank")
    dim = basis.dimension()
    v = basis.normal_form(_rat_vec(P.entries[0]))
    echelon: list = []
    for k in range(dim + 1):
        w = dict(v)
        comb = {k: OrePoly.one(alg, "rational").coeff(0)}
        for piv, e, ec in echelon:
            if piv in w:
                coef = w[piv] / e[piv]
                for key, c in e.items():
                    nv = w[key] - coef * c if key in w else -(coef * c)
                    if nv:
                        w[key] = nv
                    else:
                        w.pop(key, None)
                for j, c in ec.items():
                    nv = comb[j] - coef * c if j in comb else -(coef * c)
                    if nv:
                        comb[j] = nv
                    else:
                        comb.pop(j, None)
        if not w:
            return OrePoly(alg, comb, "rational"), dim
        echelon.append((max(w), w, comb))
        v = basis.normal_form(_rat_left_op(alg, v))
    raise RuntimeError("no dependency within the module dimension")


def reduces_to_zero(v: ModuleVector, G: list) -> bool:
    rem, _ = left_reduce(v, G)
    return rem.is_zero()


__all__ = [
    "GBResult",
    "GBStats",
    "ModuleMonomial",
    "ModuleOrder",
    "ModuleVector",
    "buchberger",
    "RationalModuleBasis",
    "kernel_generator",
    "kernel_rows",
    "primitive_operator",
    "left_reduce",
    "reduces_to_zero",
    "syzygies",
]
