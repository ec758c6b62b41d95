"""Fraction-free diagonalization U * (T * M) * V = D over R* = K[x][d; sigma, delta].

Each pass replaces the current matrix N by theta~(G*), where G* stacks a basis of
the row syzygies (as zero rows) over the boxed rows of the reduced Groebner basis
of N.  Odd passes act on rows and update U, even passes act on columns and
update V.  The loop stops after an even pass that leaves N diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coeff import UniPoly, poly_gcd, poly_lcm
from .modgb import GBResult, GBStats, ModuleVector, buchberger, syzygies
from .ore import (
    POLYNOMIAL,
    AlgebraError,
    Involution,
    InvolutionError,
    OreMatrix,
    OrePoly,
    clear_denominators,
    default_involution,
    theta_transpose,
)

DEFAULT_MAX_PASSES = 64


class DiagError(ValueError):
    """Invalid input for diagonalization."""


class ZeroRowError(DiagError):
    pass


class PassLimitError(RuntimeError):
    """The pass limit was reached; termination is guaranteed in theory, so this is a bug signal."""


@dataclass(frozen=True)
class BoxedSelection:
    indices: tuple
    alphas: dict  # leading position -> minimal operator degree

    def __len__(self) -> int:
        return len(self.indices)


def select_boxed(basis) -> BoxedSelection:
    """One row per occupied leading position: minimal degree, then smallest lm.

    ``basis`` is a GBResult or a list of ModuleVector sorted ascending by lm.
    The returned indices are sorted by leading position.
    """
    vecs = basis.basis if isinstance(basis, GBResult) else list(basis)
    best: dict = {}
    for i, v in enumerate(vecs):
        lm = v.lm
        cur = best.get(lm.component)
        if cur is None:
            best[lm.component] = i
            continue
        w = vecs[cur].lm
        if (lm.op_exp, lm) < (w.op_exp, w):
            best[lm.component] = i
    positions = sorted(best)
    return BoxedSelection(
        tuple(best[k] for k in positions),
        {k: vecs[best[k]].degree for k in positions},
    )


def diagonal_positions(m: OreMatrix) -> list[tuple[int, int]] | None:
    """Nonzero positions if m is diagonal in the rectangular sense, else None.

    Rectangular sense: at most one nonzero per row and per column, with row and
    column indices increasing together, so the nonzeros form the diagonal of a
    square submatrix.
    """
    pos = []
    for i, r in enumerate(m.entries):
        nz = [j for j, e in enumerate(r) if e]
        if len(nz) > 1:
            return None
        if nz:
            pos.append((i, nz[0]))
    cols = [j for _, j in pos]
    if any(b <= a for a, b in zip(cols, cols[1:])):
        return None
    return pos


def is_diagonal(m: OreMatrix) -> bool:
    return diagonal_positions(m) is not None


def diagonal_entries(m: OreMatrix) -> list[OrePoly]:
    pos = diagonal_positions(m)
    if pos is None:
        raise DiagError("matrix is not diagonal")
    return [m[i, j] for i, j in pos]


@dataclass
class DiagResult:
    M: OreMatrix
    theta: Involution
    U: OreMatrix
    V: OreMatrix
    D: OreMatrix
    T: OreMatrix
    iterations: int
    verified: bool
    alphas_history: list = field(default_factory=list)
    stats: GBStats = field(default_factory=GBStats)

    @property
    def algebra(self):
        return self.M.algebra

    @property
    def diagonal(self) -> list[OrePoly]:
        return diagonal_entries(self.D)

    @property
    def input_cleared(self) -> OreMatrix:
        """T * M, the fraction-free matrix the transformations act on."""
        return self.T @ self.M if self.M.layer != POLYNOMIAL else self.M

    def recheck(self) -> bool:
        return verify(self.input_cleared, self.U, self.V, self.D)

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra.describe(),
            "involution": self.theta.describe(),
            "T": self.T.to_strings(),
            "U": self.U.to_strings(),
            "D": self.D.to_strings(),
            "V": self.V.to_strings(),
            "verified": self.verified,
            "iterations": self.iterations,
            "alphas": [dict((str(k), v) for k, v in a.items()) for a in self.alphas_history],
            "diagonal_degrees": [e.degree for e in self.diagonal],
            "stats": self.stats.as_dict(),
        }


def verify(M: OreMatrix, U: OreMatrix, V: OreMatrix, D: OreMatrix) -> bool:
    """True iff U * M * V - D is exactly zero."""
    if U.cols != M.rows or M.cols != V.rows or D.shape != (U.rows, V.cols):
        raise DiagError(f"shape mismatch: U{U.shape} M{M.shape} V{V.shape} D{D.shape}")
    return (U @ M @ V) == D


def _row_vectors(vecs: list[ModuleVector]) -> list[list[OrePoly]]:
    return [v.entries() for v in vecs]


def _pass(N: OreMatrix, stats: GBStats):
    """One row step: (Ui, G*) with Ui * N = G* and alphas of the boxed rows."""
    alg = N.algebra
    G = buchberger(N, stats)
    sel = select_boxed(G)
    cof_rows = [list(G.cofactors.row(t)) for t in sel.indices]
    boxed = [G.basis[t].entries() for t in sel.indices]
    n = N.rows
    zero_rows, syz_rows = [], []
    if len(sel) < n:
        syz = syzygies(N, stats)
        ssel = select_boxed(syz)
        syz_rows = _row_vectors([syz[t] for t in ssel.indices])
        if len(syz_rows) != n - len(sel):
            raise RuntimeError(
                f"rank bookkeeping failed: {len(sel)} boxed rows, {len(syz_rows)} syzygy rows, {n} rows"
            )
        zero_rows = [[OrePoly.zero(alg)] * N.cols for _ in syz_rows]
    Ui = OreMatrix(alg, syz_rows + cof_rows)
    Gs = OreMatrix(alg, zero_rows + boxed)
    return Ui, Gs, sel.alphas


def check_involution(theta: Involution, algebra) -> None:
    if theta.algebra != algebra:
        raise InvolutionError("involution belongs to a different algebra")
    if theta.x_image_poly is None:
        raise InvolutionError("diagonalization needs an involution with an operator-free image of x")


def diagonalize(M: OreMatrix, theta: Involution | None = None, max_passes: int = DEFAULT_MAX_PASSES) -> DiagResult:
    alg = M.algebra
    if M.is_zero():
        raise DiagError("zero matrix")
    zr = M.zero_rows()
    if zr:
        raise ZeroRowError(f"zero row(s) at index {zr}; strip them first")
    if theta is None:
        theta = default_involution(alg)
    check_involution(theta, alg)
    T, N = clear_denominators(M)
    U = OreMatrix.identity(alg, N.rows)
    V = OreMatrix.identity(alg, N.cols)
    stats = GBStats()
    history = []
    i = 0
    while True:
        i += 1
        if i > max_passes:
            raise PassLimitError(f"no diagonal form after {max_passes} passes")
        Ui, Gs, alphas = _pass(N, stats)
        history.append(alphas)
        N = theta_transpose(theta, Gs)
        if i % 2:
            U = Ui @ U
        else:
            V = V @ theta_transpose(theta, Ui)
        if i % 2 == 0 and is_diagonal(N):
            break
    ok = verify(T @ M if M.layer != POLYNOMIAL else M, U, V, N)
    return DiagResult(M, theta, U, V, N, T, i, ok, history, stats)


# -- commutative post-processing ---------------------------------------------

def _as_univariate(e: OrePoly) -> tuple[UniPoly, str]:
    """Entry of the commutative preset as a polynomial in x or in the operator."""
    if e.is_scalar():
        return e.coeff(0), "x"
    if all(c.is_constant() for c in e.coeffs.values()):
        return UniPoly.from_dict({b: c[0] for b, c in e.coeffs.items()}), "op"
    raise DiagError(f"entry {e} is not univariate")


def smith_normalize(D: OreMatrix) -> OreMatrix:
    """Monic diagonal with d1 | d2 | ..., zeros last, on the main diagonal."""
    alg = D.algebra
    if alg.kind != "commutative":
        raise DiagError("Smith normalization needs the commutative preset")
    entries = diagonal_entries(D)
    polys, var = [], None
    for e in entries:
        p, v = _as_univariate(e)
        if not p.is_constant():
            if var is not None and v != var:
                raise DiagError("diagonal mixes x and the operator variable")
            var = v
        polys.append(p)
    nz = [p for p in polys if p]
    for i in range(len(nz)):
        for j in range(i + 1, len(nz)):
            a, b = nz[i], nz[j]
            g = poly_gcd(a, b)
            nz[i], nz[j] = g, poly_lcm(a, b)
    nz = [p.monic() for p in nz]
    out = [[OrePoly.zero(alg)] * D.cols for _ in range(D.rows)]
    for i, p in enumerate(nz):
        if var == "op":
            out[i][i] = OrePoly(alg, {k: c for k, c in p.terms().items()})
        else:
            out[i][i] = OrePoly.const(alg, p)
    return OreMatrix(alg, out)


__all__ = [
    "AlgebraError",
    "BoxedSelection",
    "DEFAULT_MAX_PASSES",
    "DiagError",
    "DiagResult",
    "PassLimitError",
    "ZeroRowError",
    "diagonal_entries",
    "diagonal_positions",
    "diagonalize",
    "is_diagonal",
    "select_boxed",
    "smith_normalize",
    "verify",
]
