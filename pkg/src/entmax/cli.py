"""Command-line front end.

Usage:
    entmax bound --n 4 --r 2
    entmax sum --input pmfs.json
    entmax entropy --input pmfs.json
    entmax split --input pmfs.json --output json
    entmax check-ulc --input coeffs.json
    entmax attain --n 4
    entmax optimize --n 3 --r 2 --starts 32 --seed 0
    entmax verify --claim example-r3
    entmax figure --n 4 > fig1.csv

Input files hold ``{"r": 2, "pmfs": [[...], ...]}``; entries may be numbers or
fraction strings such as ``"1/3"``.  ``check-ulc`` also accepts
``{"coeffs": [...], "m": 4}``.  Exit status: 0 on success, 1 when a ``verify``
claim fails, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .distributions import (
    FLOAT,
    RATIONAL,
    CoeffSeq,
    EntmaxError,
    FinitePmf,
    SumConfig,
    shannon_entropy,
    sum_law,
)
from .maximizer import attaining_config, brute_force_grid, closed_form, numeric_maximize
from .residues import (
    conditional_entropy_report,
    hurwitz_stable,
    is_log_concave,
    real_rooted,
    residue_decompose,
    ulc_violations,
)
from .verification import CLAIMS, figure_distribution, run_claims

__all__ = ["main", "build_parser", "load_config", "dumps", "InputError"]

COMMANDS = ("sum", "entropy", "split", "check-ulc", "bound", "attain", "optimize", "verify", "figure")


class InputError(EntmaxError, ValueError):
    """Malformed or inconsistent command-line input."""


# ---------------------------------------------------------------------------
# Serialization: 17 significant digits for floats, exact strings for Fractions.


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return format(float(x), ".17g")


def _plain(obj):
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        return obj
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, CoeffSeq, FinitePmf)):
        return [_plain(v) for v in obj]
    if isinstance(obj, SumConfig):
        return [_plain(p) for p in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            return json.dumps(str(obj))
        return _fmt(obj)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, dict)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = ",\n".join(pad + _encode(v, indent, level + 1) for v in obj)
        return "[\n" + items + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()
        )
        return "{\n" + items + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(_plain(obj), indent, 0)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, (float, Fraction)) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Input.


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read input ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _entry(value, backend: str, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise InputError(f"{where}: expected a number or fraction string, got {value!r}")
    if isinstance(value, str):
        try:
            value = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{where}: {value!r} is not a number or fraction") from None
    if backend == RATIONAL:
        return Fraction(value)
    return float(value)


def load_config(data, backend: str = FLOAT, where: str = "input") -> SumConfig:
    """Validate a ``{"r": ..., "pmfs": [...]}`` document into a :class:`SumConfig`."""
    if not isinstance(data, dict):
        raise InputError(f"{where}: top level must be an object with a 'pmfs' field")
    pmfs = data.get("pmfs")
    if not isinstance(pmfs, list) or not pmfs:
        raise InputError(f"{where}: field 'pmfs' must be a nonempty list of lists")
    r = data.get("r")
    if r is not None and (isinstance(r, bool) or not isinstance(r, int) or r < 0):
        raise InputError(f"{where}: field 'r' must be a nonnegative integer, got {r!r}")
    members = []
    for i, row in enumerate(pmfs):
        if not isinstance(row, list) or not row:
            raise InputError(f"{where}: pmfs[{i}] must be a nonempty list")
        if r is not None and len(row) != r + 1:
            raise InputError(f"{where}: pmfs[{i}] has {len(row)} entries, expected r+1 = {r + 1}")
        values = [_entry(v, backend, f"{where}: pmfs[{i}][{j}]") for j, v in enumerate(row)]
        try:
            members.append(FinitePmf(values, backend))
        except EntmaxError as exc:
            raise InputError(f"{where}: pmfs[{i}]: {exc}") from exc
    try:
        return SumConfig(members)
    except EntmaxError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _load_coeffs(data, backend: str, where: str) -> CoeffSeq:
    coeffs = data.get("coeffs")
    if not isinstance(coeffs, list) or not coeffs:
        raise InputError(f"{where}: field 'coeffs' must be a nonempty list")
    values = [_entry(v, backend, f"{where}: coeffs[{k}]") for k, v in enumerate(coeffs)]
    m = data.get("m", len(values) - 1)
    if isinstance(m, bool) or not isinstance(m, int):
        raise InputError(f"{where}: field 'm' must be an integer")
    try:
        return CoeffSeq(values, m, backend)
    except EntmaxError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _require(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        flags = ", ".join("--" + m for m in missing)
        raise InputError(f"{args.command}: missing required {flags}")


def _backend(args, default: str) -> str:
    return args.backend or default


def _config_dict(config: SumConfig, **extra) -> dict:
    return {"r": config.r, "pmfs": config.as_lists(), **extra}


# ---------------------------------------------------------------------------
# Commands.


def _cmd_sum(args) -> tuple[str, int]:
    _require(args, "input")
    backend = _backend(args, FLOAT)
    config = load_config(_read_json(args.input), backend, args.input)
    law = sum_law(config)
    if args.output == "json":
        return dumps({"n": config.n, "r": config.r, "law": list(law)}), 0
    return _csv(["value", "probability"], enumerate(law)), 0


def _cmd_entropy(args) -> tuple[str, int]:
    _require(args, "input")
    backend = _backend(args, FLOAT)
    config = load_config(_read_json(args.input), backend, args.input)
    h = shannon_entropy(sum_law(config))
    if args.output == "csv":
        return _csv(["n", "r", "entropy_bits"], [(config.n, config.r, h)]), 0
    return dumps({"n": config.n, "r": config.r, "entropy_bits": h}), 0


def _cmd_split(args) -> tuple[str, int]:
    _require(args, "input")
    backend = _backend(args, FLOAT)
    config = load_config(_read_json(args.input), backend, args.input)
    r_mod = args.r_mod or max(config.r, 2)
    law = sum_law(config)
    split = residue_decompose(law, r_mod)
    if args.output == "csv":
        rows = ((s, p, s % r_mod) for s, p in enumerate(law))
        return _csv(["value", "probability", "residue_class"], rows), 0
    out = {
        "r_mod": r_mod,
        "parts": [list(p) for p in split.parts],
        "orders": [p.order for p in split.parts],
        "part_masses": list(split.part_masses),
    }
    if config.r == 2 and r_mod == 2:
        rep = conditional_entropy_report(config)
        out["parity_entropy"] = {
            "w": rep.w,
            "h_even": rep.h_even,
            "h_odd": rep.h_odd,
            "bound_even": rep.bound_even,
            "bound_odd": rep.bound_odd,
            "even_empty": rep.even_empty,
            "odd_empty": rep.odd_empty,
        }
    return dumps(out), 0


def _structure(seq: CoeffSeq) -> dict:
    out = {
        "coeffs": list(seq),
        "m": seq.order,
        "log_concave": is_log_concave(seq),
        "ulc": not ulc_violations(seq, seq.order),
        "ulc_violations": ulc_violations(seq, seq.order),
    }
    if any(c != 0 for c in seq):
        out["real_rooted"] = real_rooted(seq)
        out["hurwitz_stable"] = hurwitz_stable(seq)
    return out


def _cmd_check_ulc(args) -> tuple[str, int]:
    _require(args, "input")
    backend = _backend(args, RATIONAL)
    data = _read_json(args.input)
    if isinstance(data, dict) and "coeffs" in data:
        seq = _load_coeffs(data, backend, args.input)
        if args.m is not None:
            seq = CoeffSeq(seq.coeffs, args.m, backend)
        results = [_structure(seq)]
    else:
        config = load_config(data, backend, args.input)
        r_mod = args.r_mod or max(config.r, 2)
        split = residue_decompose(sum_law(config), r_mod)
        results = [dict(_structure(p), residue_class=j) for j, p in enumerate(split.parts)]
    if args.output == "csv":
        rows = [
            (res.get("residue_class", ""), res["m"], res["log_concave"], res["ulc"],
             res.get("real_rooted", ""), res.get("hurwitz_stable", ""))
            for res in results
        ]
        header = ["residue_class", "m", "log_concave", "ulc", "real_rooted", "hurwitz_stable"]
        return _csv(header, rows), 0
    return dumps(results if len(results) > 1 or "residue_class" in results[0] else results[0]), 0


def _cmd_bound(args) -> tuple[str, int]:
    _require(args, "n", "r")
    cf = closed_form(args.n, args.r)
    out = {"n": cf.n, "r": cf.r, "w0": cf.w0, "bound_bits": cf.bound_bits}
    if args.output == "csv":
        return _csv(list(out), [list(out.values())]), 0
    return dumps(out), 0


def _cmd_attain(args) -> tuple[str, int]:
    _require(args, "n")
    r = args.r if args.r is not None else 2
    backend = _backend(args, FLOAT)
    config = attaining_config(args.n, r, backend)
    law = sum_law(config)
    h = shannon_entropy(law)
    if args.output == "csv":
        return _csv(["value", "probability"], enumerate(law)), 0
    cf = closed_form(args.n, r)
    return dumps(_config_dict(config, entropy_bits=h, w0=cf.w0, bound_bits=cf.bound_bits)), 0


def _cmd_optimize(args) -> tuple[str, int]:
    _require(args, "n", "r")
    if args.grid_step is not None:
        result = brute_force_grid(args.n, args.r, args.grid_step)
        cf = closed_form(args.n, args.r)
        out = _config_dict(
            result.config,
            entropy_bits=result.bits,
            grid_step=args.grid_step,
            bound_bits=cf.bound_bits,
            gap_bits=cf.bound_bits - result.bits,
        )
        return dumps(out), 0
    rep = numeric_maximize(args.n, args.r, args.starts, args.seed)
    out = _config_dict(
        rep.numeric_config,
        entropy_bits=rep.numeric_best,
        numeric_best=rep.numeric_best,
        w0=rep.closed_form.w0,
        bound_bits=rep.closed_form.bound_bits,
        attaining_entropy=rep.attaining_entropy,
        gap_bits=rep.gap_bits,
        starts_used=rep.starts_used,
        seed=rep.seed,
        best_start=rep.best_start,
    )
    if args.output == "csv":
        keys = ["n", "r", "numeric_best", "bound_bits", "gap_bits", "starts_used", "seed"]
        vals = [args.n, args.r, rep.numeric_best, rep.closed_form.bound_bits, rep.gap_bits,
                rep.starts_used, rep.seed]
        return _csv(keys, [vals]), 0
    return dumps(out), 0


def _cmd_verify(args) -> tuple[str, int]:
    claims = args.claim or None
    if claims:
        unknown = [c for c in claims if c not in CLAIMS and not (
            c.startswith("thm-main-n") and c[len("thm-main-n"):].isdigit()
            and int(c[len("thm-main-n"):]) >= 1)]
        if unknown:
            raise InputError(f"verify: unknown claim(s) {', '.join(unknown)}; known: {', '.join(CLAIMS)}")
    results = run_claims(claims, starts=args.starts, seed=args.seed, trials=args.trials)
    status = 0 if all(r.passed for r in results) else 1
    if args.output == "csv":
        return _csv(["claim_id", "passed"], [(r.claim_id, r.passed) for r in results]), status
    return dumps([r.to_dict() for r in results]), status


def _cmd_figure(args) -> tuple[str, int]:
    n = args.n if args.n is not None else 4
    fig = figure_distribution(n, _backend(args, FLOAT))
    if args.output == "json":
        return dumps({"n": n, "law": list(fig.pmf), "residue_class": list(fig.residue_class)}), 0
    return _csv(["value", "probability", "residue_class"], fig.rows()), 0


HANDLERS = {
    "sum": _cmd_sum,
    "entropy": _cmd_entropy,
    "split": _cmd_split,
    "check-ulc": _cmd_check_ulc,
    "bound": _cmd_bound,
    "attain": _cmd_attain,
    "optimize": _cmd_optimize,
    "verify": _cmd_verify,
    "figure": _cmd_figure,
}

# Default output format per command.
DEFAULT_OUTPUT = {"sum": "csv", "figure": "csv"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entmax", description="Maximum entropy of sums of independent finite-alphabet variables.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "sum": "law of S_n for a configuration",
        "entropy": "entropy of S_n in bits",
        "split": "residue-class decomposition of the sum law",
        "check-ulc": "log-concavity, ULC, real-rootedness and stability tests",
        "bound": "closed-form maximum entropy and optimal weight",
        "attain": "configuration attaining the closed-form maximum",
        "optimize": "numerical maximization (multi-start or --grid-step brute force)",
        "verify": "run reproducibility checks",
        "figure": "plot-ready distribution of S_n for the attaining configuration",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--input", help="JSON input file ('-' for stdin)")
        p.add_argument("--n", type=int)
        p.add_argument("--r", type=int)
        p.add_argument("--r-mod", type=int, help="residue modulus (default max(r, 2))")
        p.add_argument("--m", type=int, help="ULC order for check-ulc")
        p.add_argument("--starts", type=int, default=32)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--grid-step", type=float)
        p.add_argument("--trials", type=int, default=10_000, help="random configs per n for prop-parity")
        p.add_argument("--claim", action="append", help=f"claim id, repeatable ({', '.join(CLAIMS)})")
        p.add_argument("--backend", choices=(RATIONAL, FLOAT))
        p.add_argument("--output", choices=("json", "csv"), default=DEFAULT_OUTPUT.get(name, "json"))
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, status = HANDLERS[args.command](args)
    except EntmaxError as exc:
        print(f"entmax: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
