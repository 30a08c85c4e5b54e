"""Command-line front end: data ingestion, dispatch and report serialisation.

Every command prints one report envelope with the fixed keys ``command``,
``inputs``, ``results``, ``tool_version``, ``seed`` and ``warnings``.  JSON
floats carry 17 significant digits and nothing time- or host-dependent
goes into the payload; a provenance line goes to standard error instead.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import enum
import io
import json
import math
import platform
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import BACKEND
from .discrim import (INDISTINGUISHABLE, asymptotic_moments, min_sample_size, pcs,
                      select)
from .dist import Model, Sample, as_model, make_params
from .distances import distance_curve, distance_report
from .errors import (AccuracyError, ConvergenceError, DomainError, EvaluationError,
                     InfeasibleError, InputError)
from .fit import fit
from .mc import DEFAULT_REPS, DEFAULT_SEED, McConfig, reproduce_table, simulate_pcs
from .pseudo import pseudo_true

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_USAGE = 0, 2, 3, 64
DEVIATIONS = "docs/KNOWN_DEVIATIONS.md"


# ----------------------------------------------------------------- ingestion

@dataclass(frozen=True)
class DataFileSpec:
    path: str
    column: str | int = 0
    delimiter: str | None = None
    rescale: tuple[float, float] | None = None


def _sniff(line: str) -> str:
    if "," in line:
        return ","
    if "\t" in line:
        return "\t"
    return " "


def _split_line(line: str, delim: str) -> list[str]:
    if delim == " ":
        return line.split()
    return [f.strip() for f in next(csv.reader([line], delimiter=delim))]


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def ingest(spec: DataFileSpec) -> Sample:
    """Read one column of a delimited file into a Sample.

    Blank lines and lines starting with ``#`` are skipped.  A first data line
    whose selected field is not numeric is taken as a header, which lets
    ``column`` be given by name.  Errors name 1-based file line numbers.
    """
    try:
        text = Path(spec.path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {spec.path}: {exc.strerror}") from exc
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InputError(f"{spec.path} contains no data")
    delim = spec.delimiter or _sniff(lines[0][1])
    col = spec.column
    first = _split_line(lines[0][1], delim)
    if isinstance(col, str) and col.lstrip("-").isdigit():
        col = int(col)
    if isinstance(col, str):
        if col not in first:
            raise InputError(f"column {col!r} not found in header {first}")
        col = first.index(col)
        lines = lines[1:]
    elif not (0 <= col < len(first) or -len(first) <= col < 0):
        raise InputError(f"column {col} out of range for {len(first)} fields")
    elif not _is_number(first[col]):
        lines = lines[1:]
    if not lines:
        raise InputError(f"{spec.path} contains a header but no data")
    values, rows, bad = [], [], []
    for lineno, ln in lines:
        fields = _split_line(ln, delim)
        try:
            values.append(float(fields[col]))
            rows.append(lineno)
        except (IndexError, ValueError):
            bad.append(f"line {lineno}: {ln.strip()!r} is not numeric")
    if bad:
        raise InputError("unreadable values: " + "; ".join(bad[:10]))
    x = np.array(values, dtype=float)
    if spec.rescale is not None:
        c, d = spec.rescale
        if not d > c:
            raise InputError("rescale interval needs c < d")
        x = (x - c) / (d - c)
    out = ~(np.isfinite(x) & (x > 0.0) & (x < 1.0))
    if out.any():
        listed = [f"line {rows[i]} ({values[i]!r})" for i in np.flatnonzero(out)[:10]]
        raise InputError("values outside the open interval (0, 1)"
                         + (" after rescaling" if spec.rescale else "")
                         + ": " + ", ".join(listed))
    return Sample(x)


# ------------------------------------------------------------- serialisation

def to_plain(obj):
    """Convert results (dataclasses, enums, numpy values) to JSON-ready data."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        if hasattr(obj, "target_model"):
            out["target_model"] = obj.target_model.value
        return out
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    return obj


def _json_number(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    if v == 0.0:
        return "0.0"
    text = format(v, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return _json_number(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def envelope(command: str, inputs: dict, results, seed=None, warnings=()) -> dict:
    return {"command": command, "inputs": to_plain(inputs), "results": to_plain(results),
            "tool_version": __version__, "seed": seed, "warnings": list(warnings)}


def _text_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _text_lines(v, f"{prefix}{k}." if prefix or k else k)
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            yield from _text_lines(v, f"{prefix}{i}.")
    else:
        key = prefix.rstrip(".")
        if isinstance(obj, float):
            val = format(obj, ".10g")
        elif isinstance(obj, list):
            val = ", ".join(format(v, ".10g") if isinstance(v, float) else str(v) for v in obj)
        else:
            val = "null" if obj is None else str(obj)
        yield f"{key}: {val}"


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        keys = list(rows[0])
        for r in rows[1:]:
            keys.extend(k for k in r if k not in keys)
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else
                            format(r[k], ".10g") if isinstance(r.get(k), float) else r[k])
                        for k in keys})
    return buf.getvalue()


def render(env: dict, fmt: str, table: list[dict] | None = None) -> str:
    if fmt == "json":
        return dumps(env) + "\n"
    head = [f"# {env['command']} (betakw {env['tool_version']})"]
    head += [f"# warning: {w}" for w in env["warnings"]]
    if table is not None:
        return "\n".join(head) + "\n" + _csv_text(table)
    body = list(_text_lines(env["results"]))
    return "\n".join(head + body) + "\n"


# ------------------------------------------------------------------ commands

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _params_from(args, model: Model):
    if model is Model.BETA:
        pair, names = (args.a, args.b), ("--a", "--b")
    else:
        pair, names = (args.alpha, args.beta), ("--alpha", "--beta")
    if None in pair:
        raise _Usage(f"{model.value} parameters need {names[0]} and {names[1]}")
    return make_params(model, *pair)


class _Usage(Exception):
    pass


def _data_spec(args) -> DataFileSpec:
    return DataFileSpec(args.data, args.column, args.delimiter,
                        tuple(args.rescale) if args.rescale else None)


def _data_inputs(args) -> dict:
    return {"data": args.data, "column": args.column, "delimiter": args.delimiter,
            "rescale": args.rescale}


def cmd_fit(args):
    model = as_model(args.model)
    x = ingest(_data_spec(args))
    res = fit(model, x)
    return envelope("fit", {"model": model.value, "n": x.n, **_data_inputs(args)}, res)


def cmd_select(args):
    x = ingest(_data_spec(args))
    rep = select(x, args.rule)
    seed = None
    if args.simulate:
        seed = args.seed
        sb = simulate_pcs(McConfig(Model.BETA, rep.fit_beta.params, x.n, args.simulate, seed),
                          args.workers)
        sk = simulate_pcs(McConfig(Model.KUMARASWAMY, rep.fit_kw.params, x.n,
                                   args.simulate, seed), args.workers)
        rep = dataclasses.replace(rep, simulated_pcs=(sb.empirical_pcs, sk.empirical_pcs))
    inputs = {"n": x.n, "rule": args.rule, "simulate": args.simulate, **_data_inputs(args)}
    return envelope("select", inputs, rep, seed, rep.warnings)


def cmd_pcs(args):
    model = as_model(args.null)
    params = _params_from(args, model)
    val = pcs(model, params, args.n)
    mom = asymptotic_moments(model, params)
    warns = []
    if mom.am == 0.0 or abs(2.0 * val - 1.0) < INDISTINGUISHABLE:
        warns.append("families indistinguishable at these parameters: PCS is a coin flip")
    res = {"pcs": val, "am": mom.am, "av": mom.av}
    return envelope("pcs", {"null": model.value, "params": params, "n": args.n}, res,
                    warnings=warns)


def cmd_pseudo(args):
    model = as_model(getattr(args, "from"))
    params = _params_from(args, model)
    return envelope("pseudo", {"from": model.value, "params": params},
                    pseudo_true(model, params))


def cmd_moments(args):
    model = as_model(args.null)
    params = _params_from(args, model)
    mom = asymptotic_moments(model, params)
    warns = []
    if mom.series_gap > 1e-6:
        warns.append(f"series and quadrature moments differ by {mom.series_gap:.3g}; "
                     "quadrature values are reported")
    return envelope("moments", {"null": model.value, "params": params}, mom, warnings=warns)


def cmd_samplesize(args):
    model = as_model(args.null)
    params = _params_from(args, model)
    plan = min_sample_size(model, params, args.p)
    warns = [f"n is the smallest integer exceeding z_p^2 AV / AM^2; published tables "
             f"round differently by up to 1 (see {DEVIATIONS})"]
    return envelope("samplesize", {"null": model.value, "params": params, "p": args.p},
                    plan, warnings=warns)


def cmd_distance(args):
    bp = _params_from(args, Model.BETA)
    kp = _params_from(args, Model.KUMARASWAMY)
    return envelope("distance", {"beta": bp, "kumaraswamy": kp}, distance_report(bp, kp))


def _grid(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise _Usage("grid range must be start:stop:count")
        return np.linspace(float(parts[0]), float(parts[1]), int(parts[2])).tolist()
    return [float(v) for v in text.split(",") if v.strip()]


def cmd_curve(args):
    model = as_model(args.null)
    grid = _grid(args.grid)
    rows = distance_curve(model, args.fixed, grid)
    env = envelope("curve", {"null": model.value, "fixed": args.fixed, "grid": grid}, rows)
    return env, rows


def cmd_simulate(args):
    model = as_model(args.null)
    params = _params_from(args, model)
    cfg = McConfig(model, params, args.n, args.reps, args.seed)
    res = simulate_pcs(cfg, args.workers)
    warns = []
    if res.failure_warning:
        warns.append(f"{res.fit_failures} of {res.reps} replicates failed to fit")
    inputs = {"null": model.value, "params": params, "n": args.n, "reps": args.reps}
    return envelope("simulate", inputs, res, args.seed, warns)


def cmd_tables(args):
    over = {"reps": args.reps, "seed": args.seed}
    if args.override_b is not None:
        over["b"] = args.override_b
    if args.override_beta is not None:
        over["beta"] = args.override_beta
    if args.workers:
        over["workers"] = args.workers
    tab = reproduce_table(args.which, over)
    warns = list(tab.warnings)
    if args.which in (1, 2, 3, 4):
        warns.append(f"deviations from printed values are explained in {DEVIATIONS}")
    seed = args.seed if args.which in (5, 6) else None
    env = envelope("tables", {"which": args.which, **{k: v for k, v in over.items()
                                                       if k not in ("seed", "workers")}},
                   {"settings": tab.settings, "columns": tab.columns, "rows": tab.rows},
                   seed, warns)
    return env, tab.rows


# -------------------------------------------------------------------- parser

def _add_params(p, beta=True, kw=True):
    if beta:
        p.add_argument("--a", type=float, help="beta first shape")
        p.add_argument("--b", type=float, help="beta second shape")
    if kw:
        p.add_argument("--alpha", type=float, help="Kumaraswamy first shape")
        p.add_argument("--beta", type=float, help="Kumaraswamy second shape")


def _add_data(p):
    p.add_argument("data", help="delimited text file")
    p.add_argument("--column", default=0, help="column index (0-based) or header name")
    p.add_argument("--delimiter", choices=[",", "\t", " "], default=None,
                   help="field delimiter (default: auto-detect)")
    p.add_argument("--rescale", nargs=2, type=float, metavar=("C", "D"),
                   help="map values from (C, D) onto (0, 1)")


def _models():
    return [m.value for m in Model]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    seeded = _Parser(add_help=False)
    seeded.add_argument("--seed", type=int, default=DEFAULT_SEED)
    seeded.add_argument("--workers", type=int, default=None,
                        help="process count (default: $BETAKW_WORKERS or CPU count)")

    parser = _Parser(prog="betakw",
                     description="Choose between beta and Kumaraswamy models for data on (0, 1).")
    parser.add_argument("--version", action="version", version=f"betakw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", parents=[common], help="maximum-likelihood fit")
    p.add_argument("model", choices=_models())
    _add_data(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("select", parents=[common, seeded], help="choose a family for data")
    _add_data(p)
    p.add_argument("--rule", choices=["max_pcs", "akaike_sign"], default="max_pcs")
    p.add_argument("--simulate", type=int, default=0, metavar="REPS",
                   help="also report simulated PCS at the fitted parameters")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("pcs", parents=[common], help="asymptotic probability of correct selection")
    p.add_argument("--null", choices=_models(), required=True)
    _add_params(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_pcs)

    p = sub.add_parser("pseudo", parents=[common], help="pseudo-true parameters")
    p.add_argument("--from", choices=_models(), required=True)
    _add_params(p)
    p.set_defaults(func=cmd_pseudo)

    p = sub.add_parser("moments", parents=[common], help="AM and AV of the log-likelihood ratio")
    p.add_argument("--null", choices=_models(), required=True)
    _add_params(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("samplesize", parents=[common], help="minimum n for protection level p")
    p.add_argument("--null", choices=_models(), required=True)
    _add_params(p)
    p.add_argument("--p", type=float, required=True)
    p.set_defaults(func=cmd_samplesize)

    p = sub.add_parser("distance", parents=[common], help="Hellinger and KS distances")
    _add_params(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("curve", parents=[common],
                       help="distances to the pseudo-true law over a grid (CSV in text mode)")
    p.add_argument("--null", choices=_models(), required=True)
    p.add_argument("--fixed", type=float, required=True, help="second shape parameter")
    p.add_argument("--grid", required=True, help="comma list or start:stop:count")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("simulate", parents=[common, seeded], help="Monte Carlo PCS")
    p.add_argument("--null", choices=_models(), required=True)
    _add_params(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=DEFAULT_REPS)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tables", parents=[common, seeded],
                       help="recompute a published table (CSV in text mode)")
    p.add_argument("--which", type=int, choices=range(1, 7), required=True)
    p.add_argument("--override-b", type=float, default=None)
    p.add_argument("--override-beta", type=float, default=None)
    p.add_argument("--reps", type=int, default=DEFAULT_REPS,
                   help="Monte Carlo replicates for tables 5-6 (0 skips simulation)")
    p.set_defaults(func=cmd_tables)
    return parser


def _provenance(command: str) -> None:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    print(f"betakw {__version__} backend={BACKEND} command={command} "
          f"host={platform.node()} time={stamp}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except _Usage as exc:
        parser.exit(EXIT_USAGE, f"betakw: error: {exc}\n")
    except (InputError, DomainError, InfeasibleError) as exc:
        print(f"betakw: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, AccuracyError, EvaluationError) as exc:
        print(f"betakw: numerical failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    env, table = out if isinstance(out, tuple) else (out, None)
    _provenance(args.command)
    sys.stdout.write(render(env, args.format, table))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
