"""``hallforge`` command line.

    hallforge --quiver Q.json --prime P --max-dim N classify
    hallforge ... mul {hall,ihall,dh} LEFT RIGHT
    hallforge ... verify [euler|rp|assoc|oracle|phi|serre|all]
    hallforge ... export-table

Exit codes: 0 ok, 1 a verification check failed, 2 usage or input error,
3 a size guard was hit.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .dhall import DerivedHallAlgebra
from .errors import BudgetExceeded, ConsistencyError, HallforgeError
from .hallalg import HallElement, IHallAlgebra, RingelHallAlgebra
from .quiver import parse_quiver
from .repcat import IsoTable, enumerate_isoclasses
from .verify import SUITES, report_json, report_text, run_suites

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class KeyParseError(HallforgeError, ValueError):
    pass


_TORUS = re.compile(r"^K\(\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\)$")


def _strip_wrappers(text: str) -> str:
    text = text.strip()
    for pre in ("u[", "["):
        if text.startswith(pre) and text.endswith("]"):
            return text[len(pre) : -1].strip()
    return text


def parse_class(text: str, reps: IsoTable) -> int:
    """An IsoClassId, ``S<label>`` for a simple, or ``0``."""
    text = _strip_wrappers(text)
    if re.fullmatch(r"\d+", text):
        cid = int(text)
        if cid >= len(reps):
            raise KeyParseError(f"class id {cid} is not in the table (0..{len(reps) - 1})")
        return cid
    if text.startswith("S") and len(text) > 1:
        label = text[1:]
        quiver = reps.quiver
        if label in quiver.vertices:
            return reps.simple(quiver.index(label))
        if label.isdigit() and 1 <= int(label) <= quiver.n:
            return reps.simple(int(label) - 1)
        raise KeyParseError(f"no vertex {label!r}")
    raise KeyParseError(f"cannot parse key {text!r}")


def parse_torus(text: str, n: int) -> tuple[int, ...]:
    m = _TORUS.match(text.strip())
    if not m:
        raise KeyParseError(f"cannot parse torus key {text!r}")
    alpha = tuple(int(x) for x in m.group(1).split(",")) if m.group(1) else ()
    if len(alpha) != n:
        raise KeyParseError(f"K(...) needs {n} entries, got {len(alpha)}")
    return alpha


def parse_key(text: str, algebra: str, reps: IsoTable) -> HallElement:
    q = reps.q
    if algebra == "hall":
        return HallElement.basis("rep", parse_class(text, reps), q)
    if algebra == "dh":
        return HallElement.basis("dh", parse_class(text, reps), q)
    n = reps.quiver.n
    cls, alpha = 0, (0,) * n
    for part in _strip_wrappers(text).split("*"):
        part = _strip_wrappers(part)
        if part.startswith("K("):
            alpha = tuple(a + b for a, b in zip(alpha, parse_torus(part, n)))
        else:
            if cls:
                raise KeyParseError(f"{text!r} names two representation classes")
            cls = parse_class(part, reps)
    return HallElement.basis("ihall", (cls, alpha), q)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hallforge", description="Hall algebra computations for small quivers over F_p.")
    p.add_argument("--quiver", required=True, help="quiver JSON file")
    p.add_argument("--prime", required=True, type=int, help="field size p (prime)")
    p.add_argument("--max-dim", required=True, type=int, help="total-dimension bound for the class table")
    p.add_argument("--output", "-o", help="write JSON here instead of stdout")
    # also accepted after the subcommand; SUPPRESS keeps the global value when absent
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--output", "-o", default=argparse.SUPPRESS, help="write JSON here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[out], help="list isoclasses")
    mul = sub.add_parser("mul", parents=[out], help="multiply two basis elements")
    mul.add_argument("algebra", choices=("hall", "ihall", "dh"))
    mul.add_argument("left")
    mul.add_argument("right")
    ver = sub.add_parser("verify", parents=[out], help="run verification suites")
    ver.add_argument("suite", nargs="?", default="all", choices=SUITES + ("all",))
    sub.add_parser("export-table", parents=[out], help="dump all structure constants G_AB^M")
    return p


def _emit(doc, output: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run(args: argparse.Namespace) -> int:
    try:
        quiver = parse_quiver(Path(args.quiver).read_text())
    except OSError as exc:
        raise KeyParseError(f"cannot read quiver file: {exc}") from None
    reps = enumerate_isoclasses(quiver, args.prime, args.max_dim)

    if args.command == "classify":
        _emit({"quiver": quiver.to_json(), "q": reps.q, "classes": reps.to_json()}, args.output)
        return EXIT_OK
    if args.command == "mul":
        x = parse_key(args.left, args.algebra, reps)
        y = parse_key(args.right, args.algebra, reps)
        algebra = {"hall": RingelHallAlgebra, "ihall": IHallAlgebra, "dh": DerivedHallAlgebra}[args.algebra](reps)
        _emit(algebra.product(x, y).to_json(), args.output)
        return EXIT_OK
    if args.command == "verify":
        results = run_suites(reps, args.suite)
        print(report_text(results), file=sys.stderr)
        report = report_json(results)
        _emit(report, args.output)
        return EXIT_OK if report["passed"] else EXIT_VERIFY
    if args.command == "export-table":
        _emit(DerivedHallAlgebra(reps).export_table(), args.output)
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except BudgetExceeded as exc:
        print(f"hallforge: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"hallforge: internal identity failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (HallforgeError, ValueError, KeyError) as exc:
        print(f"hallforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
