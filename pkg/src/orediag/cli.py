"""Command line front end: ``orediag <command> <files...>``.

Exit codes: 0 when every report is verified, 2 when some computation is
unverified or its attempts ran out, 1 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .diag import DiagError, PassLimitError, diagonalize, smith_normalize
from .jacobson import JacobsonError, jacobson_form
from .locan import decoupling_report, unimodularity_certificate, UNIMODULAR_RSTAR
from .modgb import RationalModuleBasis
from .ore import AlgebraError, InvolutionError, OreMatrix, mul
from .problem import ProblemError, ProblemFile, load

COMMANDS = ("diagonalize", "smith", "jacobson", "analyze")
VERIFIED = "verified"
UNVERIFIED = "unverified"
INPUT_ERROR = "input_error"
INTERNAL_ERROR = "internal_error"
EXIT_CODES = {VERIFIED: 0, UNVERIFIED: 2, INTERNAL_ERROR: 2, INPUT_ERROR: 1}


class CommandError(ValueError):
    """Command does not apply to the given problem."""


def _base(command: str, prob: ProblemFile) -> dict:
    return {
        "command": command,
        "source": prob.source,
        "algebra": prob.algebra.describe(),
        "involution": prob.involution.describe() if prob.involution else None,
        "input": prob.matrix.to_strings(),
    }


def _run_diagonalize(prob: ProblemFile, opts: dict):
    res = diagonalize(prob.matrix, prob.involution, opts.get("max_passes", 64))
    residual = res.recheck()
    out = res.to_dict()
    out["decoupling"] = decoupling_report(prob.matrix, res).to_dict() if residual else None
    return out, residual, residual


def _run_smith(prob: ProblemFile, opts: dict):
    if prob.algebra.kind != "commutative":
        raise CommandError(f"smith needs the commutative preset, got {prob.algebra.kind}")
    res = diagonalize(prob.matrix, prob.involution, opts.get("max_passes", 64))
    residual = res.recheck()
    out = res.to_dict()
    S = smith_normalize(res.D)
    out["smith_form"] = S.to_strings()
    out["invariant_factors"] = [str(S[i, i]) for i in range(min(S.shape))]
    return out, residual, residual


def _membership(D: OreMatrix, attempt) -> bool:
    basis = RationalModuleBasis(D)
    return basis.contains([mul(attempt.c, e) for e in attempt.p])


def _run_jacobson(prob: ProblemFile, opts: dict):
    if prob.algebra.kind != "weyl":
        raise CommandError(f"jacobson needs the weyl preset, got {prob.algebra.kind}")
    kw = {"max_attempts": opts.get("attempts", 8), "seed": opts.get("seed", 0)}
    if "degree_bound_x" in opts:
        kw["degree_bound_x"] = opts["degree_bound_x"]
    if "coeff_range" in opts:
        kw["coeff_range"] = tuple(opts["coeff_range"])
    try:
        res = jacobson_form(prob.matrix, **kw)
    except JacobsonError as e:
        raise CommandError(str(e)) from None
    residual = True
    if res.diag_result is not None:
        residual = res.diag_result.recheck()
    best = res.best
    if best is not None and best.membership_checked:
        residual = residual and _membership(res.diagonal, best)
    out = res.to_dict()
    return out, residual, residual and res.certified


def _run_analyze(prob: ProblemFile, opts: dict):
    W = prob.matrix
    if W.rows != W.cols:
        raise CommandError(f"analyze needs a square matrix, got {W.shape}")
    cert = unimodularity_certificate(W, prob.involution)
    residual = cert.diag.recheck() if cert.diag is not None else True
    if cert.status == UNIMODULAR_RSTAR:
        ident = OreMatrix.identity(W.algebra, W.rows)
        Wp = W.to_polynomial()
        residual = residual and Wp @ cert.inverse == ident and cert.inverse @ Wp == ident
    out = cert.to_dict()
    out["passes"] = cert.diag.iterations if cert.diag is not None else 0
    return out, residual, residual


RUNNERS = {
    "diagonalize": _run_diagonalize,
    "smith": _run_smith,
    "jacobson": _run_jacobson,
    "analyze": _run_analyze,
}


def run(command: str, prob: ProblemFile, overrides: dict | None = None) -> dict:
    """Run one command and return the report dictionary."""
    if command not in RUNNERS:
        raise ValueError(f"unknown command {command!r}")
    opts = dict(prob.options)
    opts.update({k: v for k, v in (overrides or {}).items() if v is not None})
    report = _base(command, prob)
    try:
        result, residual, ok = RUNNERS[command](prob, opts)
    except (CommandError, DiagError, AlgebraError, InvolutionError) as e:
        report.update(status=INPUT_ERROR, verified=False, residual_zero=None, error=str(e), result=None)
        return report
    except (PassLimitError, RuntimeError) as e:
        report.update(status=INTERNAL_ERROR, verified=False, residual_zero=None, error=str(e), result=None)
        return report
    report.update(
        status=VERIFIED if ok else UNVERIFIED,
        verified=bool(ok),
        residual_zero=bool(residual),
        result=result,
    )
    return report


def run_file(command: str, path: str, overrides: dict | None = None) -> dict:
    try:
        prob = load(path)
    except ProblemError as e:
        return {
            "command": command,
            "source": str(path),
            "status": INPUT_ERROR,
            "verified": False,
            "residual_zero": None,
            "error": str(e),
            "result": None,
        }
    return run(command, prob, overrides)


# -- text rendering ----------------------------------------------------------

def _matrix_lines(name: str, m) -> list[str]:
    if not m:
        return [f"{name} = []"]
    return [f"{name} ="] + ["  [" + ", ".join(r) + "]" for r in m]


def _ore_line(o) -> str:
    if o is None:
        return "none"
    if not o["factors"]:
        return "{1}"
    s = "{" + ", ".join(o["factors"]) + "}, closure rule " + o["rule"]
    if o["unverified"]:
        s += " (irreducibility of some factors not verified)"
    return s


def render_text(report: dict) -> str:
    lines = [f"== orediag {report['command']} {report.get('source') or '<input>'}"]
    if report["status"] in (INPUT_ERROR, INTERNAL_ERROR):
        lines.append(f"status: {report['status']}")
        lines.append(f"error: {report['error']}")
        return "\n".join(lines)
    alg = report["algebra"]
    desc = f"{alg['kind']} (operator {alg['symbol']}"
    desc += f", q = {alg['q']})" if "q" in alg else ")"
    lines.append(f"algebra: {desc}")
    r = report["result"]
    cmd = report["command"]
    if cmd in ("diagonalize", "smith"):
        inv = r["involution"]
        lines.append(f"involution: x -> {inv['x']}, {alg['symbol']} -> {inv['op']}")
        lines.append(f"passes: {r['iterations']}")
        lines += _matrix_lines("D", r["D"])
        lines += _matrix_lines("U", r["U"])
        lines += _matrix_lines("V", r["V"])
        if any(any(e != ("1" if i == j else "0") for j, e in enumerate(row)) for i, row in enumerate(r["T"])):
            lines += _matrix_lines("T", r["T"])
        lines.append("diagonal degrees: " + ", ".join(map(str, r["diagonal_degrees"])))
        st = r["stats"]
        lines.append(f"max coefficient bits: {st['max_bits']}")
        if cmd == "smith":
            lines.append("invariant factors: " + ", ".join(r["invariant_factors"]))
        dec = r.get("decoupling")
        if dec:
            lines.append(f"U: {dec['U']['status']}, V: {dec['V']['status']}")
            lines.append("Ore set: " + _ore_line(dec["ore_set"]))
            fv = dec["free_variables"]
            lines.append("free variables: " + (", ".join(map(str, fv)) if fv else "none"))
    elif cmd == "jacobson":
        lines.append(f"dimension: {r['dimension']}")
        for a in r["attempts"]:
            lines.append(f"attempt seed={a['seed']}: deg(c) = {a['degree']} ({a['status']})")
        lines += _matrix_lines("J", r["normal_form"])
        if not r["certified"]:
            lines.append(f"proper submodule of dimension {r['submodule_dimension']} found; attempts exhausted")
    elif cmd == "analyze":
        lines.append(f"status: {r['status']}")
        lines.append("diagonal witness: " + (", ".join(r["diagonal_witness"]) or "none"))
        if r["inverse"] is not None:
            lines += _matrix_lines("inverse", r["inverse"])
        if r["denominators"]:
            lines.append("denominators: " + ", ".join(r["denominators"]))
        lines.append("Ore set: " + _ore_line(r["ore_set"]))
    verdict = "exact zero" if report["residual_zero"] else "NONZERO"
    lines.append(f"residual: {verdict}")
    lines.append(f"verified: {'yes' if report['verified'] else 'no'}")
    return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="orediag",
        description="Diagonal, Smith and Jacobson forms of matrices over Ore algebras.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("files", nargs="+", help="problem files (JSON or text form)")
    p.add_argument("--json", action="store_true", help="emit JSON reports")
    p.add_argument("--seed", type=int, help="base seed for random candidates")
    p.add_argument("--max-passes", type=int, help="diagonalization pass limit (default 64)")
    p.add_argument("--attempts", type=int, help="cyclic-vector attempts (default 8)")
    p.add_argument("--degree-bound-x", type=int, help="x-degree bound of random candidates")
    p.add_argument("--jobs", type=int, default=1, help="run independent files in parallel")
    return p


def _task(args):
    return run_file(*args)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {
        "seed": args.seed,
        "max_passes": args.max_passes,
        "attempts": args.attempts,
        "degree_bound_x": args.degree_bound_x,
    }
    tasks = [(args.command, f, overrides) for f in args.files]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            reports = list(ex.map(_task, tasks))
    else:
        reports = [_task(t) for t in tasks]
    if args.json:
        doc = reports[0] if len(reports) == 1 else reports
        print(json.dumps(doc, indent=2))
    else:
        print("\n\n".join(render_text(r) for r in reports))
    for r in reports:
        if r["status"] in (INPUT_ERROR, INTERNAL_ERROR):
            print(f"orediag: {r['error']}", file=sys.stderr)
    codes = [EXIT_CODES[r["status"]] for r in reports]
    if 1 in codes:
        return 1
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
