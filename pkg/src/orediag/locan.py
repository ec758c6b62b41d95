"""Localization analysis: skew division, two-sided elements, unimodularity
certificates and Ore closures of denominator sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coeff import ONE, RatFunc, UniPoly, factor_partial
from .diag import DiagResult, diagonal_positions, diagonalize
from .ore import (
    POLYNOMIAL,
    RATIONAL,
    AlgebraSpec,
    Involution,
    OreMatrix,
    OrePoly,
    mul,
)

CLOSURE_RULES = {
    "weyl": "powers",
    "commutative": "powers",
    "shift": "integer_shifts",
    "qcomm": "q_scalings",
}


# -- skew Euclidean division -------------------------------------------------

def skew_divrem(f: OrePoly, g: OrePoly, side: str = "right") -> tuple[OrePoly, OrePoly]:
    """side='right': f = q*g + r.  side='left': f = g*q + r.  deg r < deg g."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    if g.is_zero():
        raise ZeroDivisionError("skew division by zero")
    alg = f.algebra
    f, g = f.to_rational(), g.to_rational()
    G, cg = g.degree, g.lc()
    q = OrePoly.zero(alg, RATIONAL)
    r = f
    while r and r.degree >= G:
        k = r.degree - G
        cf = r.lc()
        if side == "right":
            u = cf / alg.sigma_power(cg, k)
            t = OrePoly(alg, {k: u}, RATIONAL)
            r = r - mul(t, g)
        else:
            u = alg.sigma_power(cf / cg, -G)
            t = OrePoly(alg, {k: u}, RATIONAL)
            r = r - mul(g, t)
        q = q + t
    return q, r


def right_divides(g: OrePoly, f: OrePoly) -> bool:
    """f in R*g over the rational layer."""
    return skew_divrem(f, g, "right")[1].is_zero()


def left_divides(g: OrePoly, f: OrePoly) -> bool:
    """f in g*R over the rational layer."""
    return skew_divrem(f, g, "left")[1].is_zero()


# -- two-sided elements ------------------------------------------------------

@dataclass(frozen=True)
class TwoSidedReport:
    element: OrePoly
    is_two_sided: bool
    witnesses: dict  # label -> (quotient, remainder)

    def to_dict(self) -> dict:
        return {
            "element": str(self.element),
            "is_two_sided": self.is_two_sided,
            "witnesses": {k: {"quotient": str(q), "remainder": str(r)} for k, (q, r) in self.witnesses.items()},
        }


def is_two_sided(r: OrePoly) -> TwoSidedReport:
    """Check g*r in rR and r*g in Rr for the generators g = x and the operator."""
    if r.is_zero():
        raise ValueError("zero is excluded from the two-sidedness test")
    alg = r.algebra
    rr = r.to_rational()
    sym = alg.symbol
    wit = {}
    for name, gen in (("x", OrePoly.x(alg, RATIONAL)), (sym, OrePoly.op(alg, RATIONAL))):
        wit[f"{name}*r in rR"] = skew_divrem(mul(gen, rr), rr, "left")
        wit[f"r*{name} in Rr"] = skew_divrem(mul(rr, gen), rr, "right")
    ok = all(rem.is_zero() for _, rem in wit.values())
    return TwoSidedReport(r, ok, wit)


def _divides_either(a: OrePoly, b: OrePoly) -> bool:
    return right_divides(a, b) or left_divides(a, b)


def totally_divides(a: OrePoly, b: OrePoly, c: OrePoly) -> bool:
    """a | c | b with c two-sided; divisibility on either side."""
    if a.is_zero() or b.is_zero() or c.is_zero():
        raise ValueError("total divisibility needs nonzero elements")
    return is_two_sided(c).is_two_sided and _divides_either(a, c) and _divides_either(c, b)


# -- Ore closures ------------------------------------------------------------

@dataclass(frozen=True)
class OreSetDescription:
    algebra: AlgebraSpec
    base_factors: tuple
    closure_rule: str
    unverified_irreducibility: bool = False

    def factor_strings(self) -> list[str]:
        return [str(f) for f in self.base_factors]

    def is_trivial(self) -> bool:
        return not self.base_factors

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra.describe(),
            "factors": self.factor_strings(),
            "rule": self.closure_rule,
            "unverified": self.unverified_irreducibility,
        }


def _shift_representative(f: UniPoly) -> UniPoly:
    """The integer shift f(x+z) whose subleading coefficient ratio lies in [0, 1)."""
    n = f.degree
    t = f[n - 1] / (n * f.lc())
    z = -math.floor(t)
    return f.shift(z).primitive()


def _q_exponent(f: UniPoly, g: UniPoly, q) -> int | None:
    """k with f(q^k x) proportional to g, or None."""
    if f.degree != g.degree:
        return None
    sf = [i for i, c in enumerate(f.coeffs) if c]
    if sf != [i for i, c in enumerate(g.coeffs) if c]:
        return None
    if len(sf) == 1:
        return 0
    lo, hi = sf[0], sf[-1]
    ratio = (g[hi] / f[hi]) / (g[lo] / f[lo])  # = q^(k*(hi-lo))
    span = hi - lo
    bound = max(ratio.numerator.bit_length(), ratio.denominator.bit_length()) + 2
    for k in sorted(range(-bound, bound + 1), key=abs):
        if q ** (k * span) == ratio:
            h = f.scale(q**k)
            if h.primitive() == g.primitive() or h.primitive() == (-g).primitive():
                return k
    return None


def ore_closure_describe(omega, algebra: AlgebraSpec) -> OreSetDescription:
    """Irreducible base factors of omega, deduplicated per the algebra's closure rule."""
    base: list[UniPoly] = []
    unverified = False
    for w in omega:
        if isinstance(w, OrePoly):
            if not w.is_scalar():
                raise ValueError(f"{w} is not a polynomial in x")
            w = w.coeff(0)
            if isinstance(w, RatFunc):
                w = w.num
        if w.is_zero():
            raise ValueError("zero cannot belong to an Ore set")
        if w.is_constant():
            continue
        fs = factor_partial(w)
        unverified |= fs.irreducibility_unverified
        for f, _ in fs.factors:
            if algebra.kind == "shift":
                f = _shift_representative(f)
            if algebra.kind == "qcomm":
                if any(_q_exponent(f, g, algebra.q) is not None for g in base):
                    continue
            if f not in base:
                base.append(f)
    base.sort(key=lambda p: (p.degree, [abs(c) for c in reversed(p.coeffs)], str(p)))
    return OreSetDescription(algebra, tuple(base), CLOSURE_RULES[algebra.kind], unverified)


# -- unimodularity certificates ----------------------------------------------

UNIMODULAR_RSTAR = "unimodular_over_Rstar"
UNIMODULAR_LOCAL = "unimodular_over_localization"
NOT_FULL_RANK = "not_full_rank"
NOT_UNIMODULAR = "not_unimodular"


@dataclass(frozen=True)
class UnimodularityCertificate:
    """``not_unimodular`` means full rank but not invertible over K(x)[d]."""

    status: str
    inverse: OreMatrix | None
    diagonal_witness: tuple
    ore_set: OreSetDescription | None
    denominators: tuple = ()
    diag: DiagResult | None = field(default=None, compare=False, repr=False)

    @property
    def invertible_over_R(self) -> bool:
        return self.status in (UNIMODULAR_RSTAR, UNIMODULAR_LOCAL)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "inverse": self.inverse.to_strings() if self.inverse is not None else None,
            "diagonal_witness": [str(e) for e in self.diagonal_witness],
            "denominators": [str(d) for d in self.denominators],
            "ore_set": self.ore_set.to_dict() if self.ore_set is not None else None,
        }


def _denominators(m: OreMatrix) -> list[UniPoly]:
    out = []
    for r in m.entries:
        for e in r:
            for c in e.coeffs.values():
                if not c.den.is_constant() and c.den not in out:
                    out.append(c.den)
    return out


def unimodularity_certificate(W: OreMatrix, theta: Involution | None = None) -> UnimodularityCertificate:
    """Diagonalize W and invert it exactly over K(x)[d] as V * D^-1 * U.

    Denominators of the inverse give the smallest set of K[x] elements that
    must be inverted; their Ore closure is reported.
    """
    if W.rows != W.cols:
        raise ValueError(f"unimodularity needs a square matrix, got {W.shape}")
    alg = W.algebra
    if W.layer != POLYNOMIAL:
        W = W.to_polynomial()
    if W.is_zero() or W.zero_rows():
        return UnimodularityCertificate(NOT_FULL_RANK, None, (), None)
    res = diagonalize(W, theta)
    pos = diagonal_positions(res.D)
    diag = [res.D[i, j] for i, j in pos]
    if len(pos) < W.rows:
        return UnimodularityCertificate(NOT_FULL_RANK, None, tuple(diag), None, diag=res)
    if any(e.degree > 0 for e in diag):
        return UnimodularityCertificate(NOT_UNIMODULAR, None, tuple(diag), None, diag=res)
    n = W.rows
    inv = _inverse_from(res)
    ident = OreMatrix.identity(alg, n)
    witness = tuple(e.coeff(0) for e in diag)
    dens = _denominators(inv)
    if not dens:
        inv = inv.to_polynomial()
        if not (W @ inv == ident and inv @ W == ident):
            raise RuntimeError("inverse check failed")
        return UnimodularityCertificate(UNIMODULAR_RSTAR, inv, witness, ore_closure_describe([], alg), (), res)
    if not (W.to_rational() @ inv == ident and inv @ W.to_rational() == ident):
        raise RuntimeError("inverse check over K(x) failed")
    ore_set = ore_closure_describe(dens, alg)
    return UnimodularityCertificate(UNIMODULAR_LOCAL, None, witness, ore_set, tuple(dens), res)


def _inverse_from(res: DiagResult) -> OreMatrix:
    """V * D^-1 * U for a square diagonalization with operator-free D."""
    alg = res.algebra
    n = res.D.rows
    dinv = [[OrePoly.zero(alg, RATIONAL)] * n for _ in range(n)]
    for i, j in diagonal_positions(res.D):
        dinv[j][i] = OrePoly.const(alg, RatFunc(ONE, res.D[i, j].coeff(0)), RATIONAL)
    return res.V.to_rational() @ OreMatrix(alg, dinv, RATIONAL) @ res.U.to_rational()


def rational_inverse(cert: UnimodularityCertificate) -> OreMatrix | None:
    """The inverse over K(x)[d] backing a certificate, if the matrix is invertible there."""
    if cert.inverse is not None:
        return cert.inverse
    if cert.diag is None or not cert.invertible_over_R:
        return None
    return _inverse_from(cert.diag)


# -- decoupling ----------------------------------------------------------------

@dataclass(frozen=True)
class DecouplingReport:
    ore_set: OreSetDescription
    u_certificate: UnimodularityCertificate
    v_certificate: UnimodularityCertificate
    equations: tuple  # (variable index, diagonal entry)
    free_variables: tuple

    def to_dict(self) -> dict:
        return {
            "ore_set": self.ore_set.to_dict(),
            "U": self.u_certificate.to_dict(),
            "V": self.v_certificate.to_dict(),
            "equations": [{"variable": j, "operator": str(d)} for j, d in self.equations],
            "free_variables": list(self.free_variables),
        }


def decoupling_report(M: OreMatrix, result: DiagResult) -> DecouplingReport:
    """Scalar equations D[i, j] * w_j = 0 for w = V^-1 * omega, and the Ore set
    over which the change of variables and of equations is invertible."""
    if not result.verified or not result.recheck():
        raise ValueError("decoupling needs a verified diagonalization")
    alg = M.algebra
    cu = unimodularity_certificate(result.U, result.theta)
    cv = unimodularity_certificate(result.V, result.theta)
    pos = diagonal_positions(result.D)
    eqs = tuple((j, result.D[i, j]) for i, j in pos)
    used = {j for _, j in pos}
    free = tuple(j for j in range(result.D.cols) if j not in used)
    ore_set = ore_closure_describe(list(cu.denominators) + list(cv.denominators), alg)
    return DecouplingReport(ore_set, cu, cv, eqs, free)
