"""Probabilistic Jacobson form over the rational Weyl algebra via cyclic vectors.

For a full-rank diagonal D = diag(m_1, ..., m_r) the quotient module has
dimension d = sum(deg m_i) over K(x).  A random vector p whose annihilator
generator c has degree d is cyclic, and then diag(1, ..., 1, c) is a
Jacobson form.  A smaller degree exhibits a proper submodule instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from statistics import fmean

from .diag import diagonal_positions, diagonalize, is_diagonal
from .modgb import RationalModuleBasis, kernel_generator, primitive_operator
from .ore import POLYNOMIAL, OreMatrix, OrePoly, mul

CYCLIC = "cyclic_certified"
PROPER = "proper_submodule_found"
DEFAULT_MAX_ATTEMPTS = 8
DEFAULT_COEFF_RANGE = (0, 100)


class JacobsonError(ValueError):
    pass


def _square_diagonal(D: OreMatrix) -> list[OrePoly]:
    if D.rows != D.cols:
        raise JacobsonError(f"need a square matrix, got {D.shape}")
    if not is_diagonal(D) or any(D[i, j] for i in range(D.rows) for j in range(D.cols) if i != j):
        raise JacobsonError("matrix is not diagonal")
    diag = [D[i, i] for i in range(D.rows)]
    if any(e.is_zero() for e in diag):
        raise JacobsonError("zero diagonal entry: the module is not finite dimensional")
    return diag


def dimension_invariant(D: OreMatrix) -> int:
    """sum of operator degrees of the diagonal entries."""
    return sum(e.degree for e in _square_diagonal(D))


def random_candidate(D: OreMatrix, degree_bound_x: int = 3, coeff_range=DEFAULT_COEFF_RANGE, seed=None) -> list[OrePoly]:
    """p_i of operator degree < deg(m_i) with integer coefficients from
    ``coeff_range`` (half open); p_i is zero when m_i is a unit."""
    diag = _square_diagonal(D)
    lo, hi = coeff_range
    if hi <= lo:
        raise ValueError("empty coefficient range")
    rng = random.Random(seed)
    alg = D.algebra
    out = []
    for m in diag:
        if m.degree == 0:
            out.append(OrePoly.zero(alg))
            continue
        while True:
            terms = {
                (b, a): rng.randrange(lo, hi)
                for b in range(m.degree)
                for a in range(degree_bound_x + 1)
            }
            f = OrePoly.from_terms(alg, terms)
            if f:
                break
        out.append(f)
    return out


@dataclass(frozen=True)
class CoefficientStats:
    """Term statistics of an operator with integer coefficients.

    NT terms, TD total degree, BC/SC/AC largest/smallest/mean absolute
    coefficient, BX/SX/AX largest/smallest/mean x-degree per monomial.
    """

    NT: int
    TD: int
    BC: int
    SC: int
    AC: float
    BX: int
    SX: int
    AX: float
    max_bits: int

    @classmethod
    def of(cls, c: OrePoly) -> "CoefficientStats":
        terms = c.terms()
        if not terms:
            return cls(0, 0, 0, 0, 0.0, 0, 0, 0.0, 0)
        coeffs = [abs(int(v)) for v in terms.values()]
        xdeg = [a for (_, a) in terms]
        return cls(
            NT=len(terms),
            TD=max(a + b for (b, a) in terms),
            BC=max(coeffs),
            SC=min(coeffs),
            AC=fmean(coeffs),
            BX=max(xdeg),
            SX=min(xdeg),
            AX=fmean(xdeg),
            max_bits=max(v.bit_length() for v in coeffs),
        )

    def as_dict(self) -> dict:
        return {
            "NT": self.NT, "TD": self.TD, "BC": self.BC, "SC": self.SC, "AC": self.AC,
            "BX": self.BX, "SX": self.SX, "AX": self.AX, "max_bits": self.max_bits,
        }


@dataclass(frozen=True)
class CyclicAttempt:
    p: tuple
    c: OrePoly
    d: int
    status: str
    seed: object = None
    stats: CoefficientStats | None = None
    membership_checked: bool = False

    @property
    def certified(self) -> bool:
        return self.status == CYCLIC

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "p": [str(e) for e in self.p],
            "c": str(self.c),
            "degree": self.c.degree,
            "dimension": self.d,
            "status": self.status,
            "membership_checked": self.membership_checked,
            "stats": self.stats.as_dict() if self.stats else None,
        }


def _dimension_of(M: OreMatrix) -> int:
    if M.rows != M.cols:
        raise JacobsonError(f"need a square matrix, got {M.shape}")
    if is_diagonal(M) and all(M[i, i] for i in range(M.rows)):
        return dimension_invariant(M)
    res = diagonalize(M)
    pos = diagonal_positions(res.D)
    if len(pos) < M.rows:
        raise JacobsonError("matrix does not have full rank")
    return sum(res.D[i, j].degree for i, j in pos)


def cyclic_annihilator(M: OreMatrix, p, seed=None, d: int | None = None) -> CyclicAttempt:
    """Generator c of {c : c*p in R^(1 x r) M} and the degree certificate."""
    alg = M.algebra
    p = [e if isinstance(e, OrePoly) else OrePoly.const(alg, e) for e in p]
    if len(p) != M.cols:
        raise JacobsonError(f"candidate has {len(p)} entries, matrix has {M.cols} columns")
    if d is None:
        d = _dimension_of(M)
    basis = RationalModuleBasis(M)
    if not basis.is_full_rank():
        raise JacobsonError("matrix does not have full rank")
    P = OreMatrix(alg, [p] + [list(r) for r in M.entries])
    c_monic, dim = kernel_generator(P, basis)
    if dim != d:
        raise RuntimeError(f"dimension mismatch: diagonal form says {d}, module basis says {dim}")
    c = primitive_operator(c_monic)
    # c*p must lie in the row module over K(x)[d]
    cp = [mul(c, e) for e in p]
    if not basis.contains(cp):
        raise RuntimeError("annihilator membership re-check failed")
    status = CYCLIC if c.degree == d else PROPER
    return CyclicAttempt(tuple(p), c, d, status, seed, CoefficientStats.of(c), True)


@dataclass
class JacobsonResult:
    normal_form: OreMatrix
    certified: bool
    attempts: list = field(default_factory=list)
    diagonal: OreMatrix | None = None
    diag_result: object = field(default=None, repr=False)

    @property
    def best(self) -> CyclicAttempt | None:
        if not self.attempts:
            return None
        return max(self.attempts, key=lambda a: a.c.degree)

    def to_dict(self) -> dict:
        best = self.best
        return {
            "normal_form": self.normal_form.to_strings(),
            "certified": self.certified,
            "dimension": best.d if best else None,
            "submodule_dimension": best.c.degree if best and not self.certified else None,
            "diagonal": self.diagonal.to_strings() if self.diagonal is not None else None,
            "attempts": [a.to_dict() for a in self.attempts],
        }


def jacobson_form(
    M: OreMatrix,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    seed: int = 0,
    degree_bound_x: int = 3,
    coeff_range=DEFAULT_COEFF_RANGE,
) -> JacobsonResult:
    """diag(1, ..., 1, c) certified by deg(c) = dimension, or the best failed attempt.

    Attempt i draws its candidate with seed ``seed + i``.
    """
    alg = M.algebra
    if alg.kind != "weyl":
        raise JacobsonError(
            f"Jacobson forms via cyclic vectors need the simple Weyl algebra, not {alg.kind}"
        )
    if M.rows != M.cols:
        raise JacobsonError(f"need a square matrix, got {M.shape}")
    res = None
    if M.layer == POLYNOMIAL and is_diagonal(M) and all(M[i, i] for i in range(M.rows)):
        D = M
    else:
        res = diagonalize(M)
        if len(diagonal_positions(res.D)) < M.rows:
            raise JacobsonError("matrix does not have full rank")
        D = res.D
    n = D.rows
    d = dimension_invariant(D)
    one = OrePoly.one(alg)

    def form(c: OrePoly) -> OreMatrix:
        return OreMatrix.diagonal(alg, [one] * (n - 1) + [c])

    if d == 0:
        return JacobsonResult(form(one), True, [], D, res)
    if n == 1:
        c = D[0, 0]
        att = CyclicAttempt((one,), c, d, CYCLIC, None, CoefficientStats.of(c), False)
        return JacobsonResult(form(c), True, [att], D, res)
    if max_attempts < 1:
        raise ValueError("max_attempts must be positive")
    attempts = []
    for i in range(max_attempts):
        s = seed + i
        p = random_candidate(D, degree_bound_x, coeff_range, s)
        att = cyclic_annihilator(D, p, seed=s, d=d)
        attempts.append(att)
        if att.certified:
            return JacobsonResult(form(att.c), True, attempts, D, res)
    best = max(attempts, key=lambda a: a.c.degree)
    return JacobsonResult(form(best.c), False, attempts, D, res)


__all__ = [
    "CYCLIC",
    "PROPER",
    "CoefficientStats",
    "CyclicAttempt",
    "JacobsonError",
    "JacobsonResult",
    "cyclic_annihilator",
    "dimension_invariant",
    "jacobson_form",
    "random_candidate",
]
