"""Problem files: JSON or a line-based text form.

Text form::

    # comment
    algebra = shift
    symbol = s            (optional)
    q = 2                 (qcomm only)
    involution.x = -x     (optional override, both images required)
    involution.op = s
    seed = 3              (any other key lands in options)
    matrix:
    x*s-s+x^2-x, x*s+x^2, x*s+2*s+x^2+2*x
    s+x, 0, s

JSON form::

    {"algebra": {"kind": "shift"}, "involution": {"x": "-x", "op": "s"},
     "matrix": [["x*s-s+x^2-x", "x*s+x^2", "x*s+2*s+x^2+2*x"], ["s+x", "0", "s"]],
     "options": {"seed": 3}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .ore import AlgebraError, AlgebraSpec, Involution, InvolutionError, OreMatrix
from .parse import ParseError, parse_expression

OPTION_TYPES = {
    "seed": int,
    "max_passes": int,
    "attempts": int,
    "degree_bound_x": int,
    "coeff_range": list,
}


class ProblemError(ValueError):
    """Invalid problem file; carries an optional position."""

    def __init__(self, message: str, source: str | None = None, line: int | None = None, column: int | None = None):
        self.message = message
        self.source = source
        self.line = line
        self.column = column
        loc = source or "<input>"
        if line is not None:
            loc += f":{line}"
            if column is not None:
                loc += f":{column}"
        super().__init__(f"{loc}: {message}")


@dataclass
class ProblemFile:
    algebra: AlgebraSpec
    matrix: OreMatrix
    involution: Involution | None = None
    options: dict = field(default_factory=dict)
    source: str | None = None

    def option(self, key, default=None):
        return self.options.get(key, default)


def _check_options(opts: dict, source) -> dict:
    out = {}
    for k, v in opts.items():
        kind = OPTION_TYPES.get(k)
        if kind is None:
            raise ProblemError(f"unknown option {k!r}", source)
        if kind is int:
            if isinstance(v, str):
                try:
                    v = int(v)
                except ValueError:
                    raise ProblemError(f"option {k!r} must be an integer", source) from None
            if not isinstance(v, int) or isinstance(v, bool):
                raise ProblemError(f"option {k!r} must be an integer", source)
        else:
            if isinstance(v, str):
                v = [p.strip() for p in v.strip("[]()").split(",")]
            try:
                v = [int(p) for p in v]
            except (TypeError, ValueError):
                raise ProblemError(f"option {k!r} must be two integers", source) from None
            if len(v) != 2 or v[0] >= v[1]:
                raise ProblemError(f"option {k!r} must be a half-open range lo < hi", source)
        out[k] = v
    return out


def _algebra(kind, q, symbol, source) -> AlgebraSpec:
    try:
        return AlgebraSpec(kind, q, symbol)
    except AlgebraError as e:
        raise ProblemError(str(e), source) from None


def _involution(alg, spec, source, where=None) -> Involution | None:
    if spec is None:
        return None
    if not isinstance(spec, dict) or set(spec) != {"x", "op"}:
        raise ProblemError("involution needs exactly the images 'x' and 'op'", source, where)
    try:
        return Involution(parse_expression(str(spec["x"]), alg), parse_expression(str(spec["op"]), alg))
    except ParseError as e:
        raise ProblemError(f"involution: {e.message}", source, where) from None
    except InvolutionError as e:
        raise ProblemError(str(e), source, where) from None


def _build_matrix(alg, rows, source, positions=None) -> OreMatrix:
    if not rows:
        raise ProblemError("empty matrix", source)
    width = len(rows[0])
    out = []
    for i, r in enumerate(rows):
        if len(r) != width:
            line = positions[i][0][0] if positions else None
            raise ProblemError(f"row {i} has {len(r)} entries, expected {width}", source, line)
        row = []
        for j, e in enumerate(r):
            try:
                row.append(parse_expression(str(e), alg))
            except ParseError as err:
                if positions:
                    line, col0 = positions[i][j]
                    err = err.relocated(line, col0 - 1)
                    raise ProblemError(f"entry [{i}][{j}]: {err.message}", source, err.line, err.column) from None
                raise ProblemError(
                    f"entry [{i}][{j}], column {err.column}: {err.message}", source
                ) from None
        out.append(row)
    try:
        return OreMatrix(alg, out)
    except (ValueError, AlgebraError) as e:
        raise ProblemError(str(e), source) from None


def load_json(text: str, source: str | None = None) -> ProblemFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemError(f"invalid JSON: {e.msg}", source, e.lineno, e.colno) from None
    if not isinstance(data, dict):
        raise ProblemError("top-level JSON value must be an object", source)
    unknown = set(data) - {"algebra", "involution", "matrix", "options"}
    if unknown:
        raise ProblemError(f"unknown field(s) {sorted(unknown)}", source)
    a = data.get("algebra")
    if isinstance(a, str):
        a = {"kind": a}
    if not isinstance(a, dict) or "kind" not in a:
        raise ProblemError("missing algebra kind", source)
    alg = _algebra(a["kind"], a.get("q"), a.get("symbol"), source)
    rows = data.get("matrix")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ProblemError("matrix must be a list of rows", source)
    M = _build_matrix(alg, rows, source)
    theta = _involution(alg, data.get("involution"), source)
    opts = _check_options(data.get("options") or {}, source)
    return ProblemFile(alg, M, theta, opts, source)


def _split_row(line: str, lineno: int):
    """Comma-separated entries with their 1-based start columns."""
    entries, cols = [], []
    start = 0
    for k, ch in enumerate(line + ","):
        if ch == ",":
            raw = line[start:k]
            stripped = raw.lstrip()
            entries.append(stripped.rstrip())
            cols.append((lineno, start + len(raw) - len(stripped) + 1))
            start = k + 1
    return entries, cols


def load_text(text: str, source: str | None = None) -> ProblemFile:
    header: dict = {}
    header_lines: dict = {}
    rows, positions = [], []
    in_matrix = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if in_matrix:
            body = line.rstrip(";")
            entries, cols = _split_row(body, lineno)
            if any(e == "" for e in entries):
                raise ProblemError("empty matrix entry", source, lineno)
            rows.append(entries)
            positions.append(cols)
            continue
        if line.strip() == "matrix:":
            in_matrix = True
            continue
        if "=" not in line:
            raise ProblemError("expected 'key = value' or 'matrix:'", source, lineno, 1)
        key, value = (p.strip() for p in line.split("=", 1))
        if key in header:
            raise ProblemError(f"duplicate key {key!r}", source, lineno)
        header[key] = value
        header_lines[key] = lineno
    if not in_matrix:
        raise ProblemError("missing 'matrix:' section", source)
    if "algebra" not in header:
        raise ProblemError("missing 'algebra = ...' line", source)
    alg = _algebra(header.pop("algebra"), header.pop("q", None), header.pop("symbol", None), source)
    inv = None
    ix, iop = header.pop("involution.x", None), header.pop("involution.op", None)
    if ix is not None or iop is not None:
        where = header_lines.get("involution.x") or header_lines.get("involution.op")
        if ix is None or iop is None:
            raise ProblemError("involution override needs both involution.x and involution.op", source, where)
        inv = _involution(alg, {"x": ix, "op": iop}, source, where)
    M = _build_matrix(alg, rows, source, positions)
    opts = _check_options(header, source)
    return ProblemFile(alg, M, inv, opts, source)


def loads(text: str, source: str | None = None) -> ProblemFile:
    if text.lstrip().startswith("{"):
        return load_json(text, source)
    return load_text(text, source)


def load(path) -> ProblemFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ProblemError(f"cannot read file: {e.strerror}", str(path)) from None
    if p.suffix == ".json":
        return load_json(text, str(path))
    return loads(text, str(path))
