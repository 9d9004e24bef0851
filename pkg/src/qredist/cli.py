"""Command line: ``qredist {eval,verify,decouple,make}``.

Exit codes: 0 success, 2 bad input (parse errors, bad flags, invalid
splits), 3 dimension cap exceeded, 4 global state not pure, 5 a verify
suite found a violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .decouple import DecoupleConfig, decouple_sweep, maximally_entangled, rows_to_csv
from .entropy import full_report
from .errors import ParseError, QRedistError
from .linalg import DEFAULT_DIM_CAP, dim_cap
from .statespec import (
    document_to_state,
    format_state,
    hjpw_demo_spec,
    make_cat,
    make_hjpw,
    make_w,
    parse_state,
    singleton_roles,
    state_to_document,
)
from .tasks import (
    composability_check,
    merging_costs,
    redistribution_corner,
    redistribution_region,
    time_reversal_dual,
)
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VIOLATION = 5


class UsageError(QRedistError):
    exit_code = EXIT_INPUT


def _int_list(text: str) -> list[int]:
    try:
        out = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


def _tolerance(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}") from None


def _cap(text: str) -> int:
    cap = int(text)
    if cap < 4:
        raise argparse.ArgumentTypeError("dimension cap must be at least 4")
    return cap


def _add_globals(p: argparse.ArgumentParser, suppress: bool):
    def default(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--seed", type=int, default=default(0), help="master seed (default 0)")
    p.add_argument("--dim-cap", type=_cap, default=default(DEFAULT_DIM_CAP),
                   help=f"largest total Hilbert-space dimension (default {DEFAULT_DIM_CAP})")
    p.add_argument("--format", choices=("json", "csv", "text"), default=default(None),
                   help="output format (default: json, csv for decouple)")
    p.add_argument("--out", default=default(None), metavar="FILE", help="write output to FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qredist",
        description="Entropies and state-redistribution costs of small multipartite pure states.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="report entropies, cost region and corner of a .qsv state")
    p.add_argument("state_file")

    p = sub.add_parser("verify", parents=[common], help="run a randomized property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", type=_int_list, default=None,
                   help="comma-separated subsystem dimensions (ssa default: random in 2..4)")
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="NAME=VALUE",
                   help="override a tolerance (inequality, pure_identity, identity)")

    p = sub.add_parser("decouple", parents=[common], help="random-unitary decoupling sweep")
    p.add_argument("--dc", type=int, required=True, help="dimension of C")
    p.add_argument("--dr", type=int, required=True, help="dimension of R")
    p.add_argument("--d1", type=_int_list, required=True, help="ascending sent-part dimensions")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--input", choices=("haar", "max-entangled"), default="haar",
                   help="fresh Haar-random state per trial, or one fixed maximally entangled state")

    p = sub.add_parser("make", parents=[common], help="write a named state as .qsv")
    p.add_argument("name", choices=("cat", "w", "hjpw-demo"))
    p.add_argument("--n", type=int, default=4, help="number of qubits for cat and w")
    return parser


def _num(x: float, digits: int = 5) -> str:
    # adding 0.0 turns -0.0 into 0.0
    return f"{x + 0.0:.{digits}g}"


def eval_document(state, partition) -> dict:
    """Everything ``eval`` reports, as a JSON-ready dict."""
    report = full_report(state, partition)
    region = redistribution_region(state, partition)
    corner = redistribution_corner(state, partition)
    dual = time_reversal_dual(state, partition)
    merging = merging_costs(state, partition)
    out = {
        "dims": list(state.dims),
        "roles": partition.labels(),
        "entropies": report.entropies,
        "derived": report.derived,
        "region": [
            {"q_coeff": c.q_coeff, "e_coeff": c.e_coeff, "bound": c.bound}
            for c in region.constraints
        ],
        # Q is half the conditional mutual information; both are listed so
        # the unhalved value is never mistaken for the qubit cost.
        "corner": {"Q": corner.Q, "E": corner.E, "I(C;R|B)": report.derived["I(C;R|B)"]},
        "dual": {"Q": dual.Q, "E": dual.E},
        "merging": {"ebits": merging.ebits, "cbits": merging.cbits},
    }
    if partition.has("D"):
        rec = composability_check(state, partition)
        out["composability"] = {
            "joint": {"Q": rec.joint.Q, "E": rec.joint.E},
            "sequential": {"Q": rec.sequential.Q, "E": rec.sequential.E},
            "max_deviation": rec.max_deviation,
        }
    return out


def _eval_text(doc: dict) -> str:
    lines = [f"dims: {' '.join(map(str, doc['dims']))}", f"roles: {' '.join(doc['roles'])}", ""]
    lines.append("entropies (bits)")
    lines += [f"  H({k}) = {_num(v)}" for k, v in doc["entropies"].items()]
    lines.append("derived (bits)")
    lines += [f"  {k} = {_num(v)}" for k, v in doc["derived"].items()]
    q, s = doc["region"]
    lines.append("region")
    lines.append(f"  Q >= {_num(q['bound'])}")
    lines.append(f"  Q + E >= {_num(s['bound'])}")
    c = doc["corner"]
    lines.append(f"corner: Q = {_num(c['Q'])} (half of I(C;R|B) = {_num(c['I(C;R|B)'])}), E = {_num(c['E'])}")
    lines.append(f"time-reversed: Q = {_num(doc['dual']['Q'])}, E = {_num(doc['dual']['E'])}")
    m = doc["merging"]
    lines.append(f"merging: ebits = {_num(m['ebits'])}, cbits = {_num(m['cbits'])}")
    if "composability" in doc:
        comp = doc["composability"]
        lines.append(
            f"composability: joint ({_num(comp['joint']['Q'])}, {_num(comp['joint']['E'])}), "
            f"sequential ({_num(comp['sequential']['Q'])}, {_num(comp['sequential']['E'])}), "
            f"deviation {_num(comp['max_deviation'], 3)}"
        )
    return "\n".join(lines) + "\n"


def _flatten(doc: dict, prefix: str = ""):
    for key, value in doc.items():
        name = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, dict):
            yield from _flatten(value, name)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                yield from _flatten(item, f"{name}[{i}]")
        else:
            yield name, value


def _csv_rows(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("quantity", "value"))
    for name, value in _flatten(doc):
        if isinstance(value, list):
            value = " ".join(map(str, value))
        w.writerow((name, repr(value) if isinstance(value, float) else value))
    return buf.getvalue()


def _dump(doc, fmt: str, text_fn=None) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        return _csv_rows(doc)
    return text_fn(doc) if text_fn else "\n".join(f"{k}: {v}" for k, v in _flatten(doc)) + "\n"


def cmd_eval(args) -> tuple[str, int]:
    try:
        with open(args.state_file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.state_file}: {exc.strerror}") from None
    try:
        doc = parse_state(text)
    except ParseError as exc:
        raise ParseError(f"{args.state_file}: {exc.message}", exc.line, exc.column) from None
    state, partition = document_to_state(doc)
    return _dump(eval_document(state, partition), args.format or "json", _eval_text), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    try:
        summary = run_suite(args.suite, args.trials, args.dims, args.seed, dict(args.tol))
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    code = EXIT_OK if summary["passed"] else EXIT_VIOLATION
    return _dump(summary, args.format or "json"), code


def cmd_decouple(args) -> tuple[str, int]:
    try:
        config = DecoupleConfig(args.dc, args.dr, tuple(args.d1), args.trials, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    psi = maximally_entangled(args.dc, args.dr) if args.input == "max-entangled" else None
    rows = decouple_sweep(config, psi)
    fmt = args.format or "csv"
    if fmt == "csv":
        return rows_to_csv(rows), EXIT_OK
    records = [
        {"d1": r.d1, "log2_d1": r.log2_d1, "mean_distance": r.mean_distance,
         "std_distance": r.std_distance, "half_ICR_bits": r.threshold}
        for r in rows
    ]
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n", EXIT_OK
    lines = [f"{'d1':>6} {'mean':>10} {'std':>10} {'I(C;R)/2':>10}"]
    lines += [f"{r.d1:>6} {_num(r.mean_distance):>10} {_num(r.std_distance):>10} {_num(r.threshold):>10}"
              for r in rows]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_make(args) -> tuple[str, int]:
    if args.name == "hjpw-demo":
        state, partition = make_hjpw(hjpw_demo_spec())
        labels = partition.labels()
    else:
        if args.n < 2:
            raise UsageError("--n must be at least 2")
        state = make_cat(args.n) if args.name == "cat" else make_w(args.n)
        labels = singleton_roles(args.n)
    return format_state(state_to_document(state, labels)), EXIT_OK


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "decouple": cmd_decouple, "make": cmd_make}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with dim_cap(args.dim_cap):
            output, code = COMMANDS[args.command](args)
    except QRedistError as exc:
        print(f"qredist {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code if exc.exit_code != 1 else EXIT_INPUT
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
