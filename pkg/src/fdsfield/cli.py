"""Command-line front end.

    fdsfield field     --p 2 --r 3
    fdsfield linpoly   --field "GF(2^2)/1,1,1" --coeffs 1,1
    fdsfield fds       diagram --input f.json --format dot
    fdsfield sds       --input sds.json
    fdsfield modorder  --p 2 --n 3 --matrix "0,5;1,2"
    fdsfield msorbits  search --p 2 --dim 2 --S identity

Exit status: 0 success, 2 unparseable input, 3 validation failure,
4 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import fds, linpoly, modsys, msorbits, sds
from .errors import BudgetExceeded, ValidationError
from .ffcore import ModMatrix, find_normal_basis, make_extension_field, parse_field_spec, polynomial_basis

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_BUDGET = 4


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input helpers


def _load_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def _ints(text, what):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--{what}: expected comma-separated integers, got {text!r}") from None


def _field_from_args(args):
    if args.field:
        return parse_field_spec(args.field)
    if args.p is None or args.r is None:
        raise InputError("give --field GF(p^r)/c0,...,cr or both --p and --r")
    modulus = _ints(args.modulus, "modulus") if args.modulus else None
    return make_extension_field(args.p, args.r, modulus)


def _matrix_arg(text, p, n, dim, what):
    text = text.strip()
    if text in ("identity", "I"):
        return ModMatrix.identity(p, n, dim)
    if text in ("-identity", "-I"):
        return ModMatrix(p, n, [[-int(i == j) for j in range(dim)] for i in range(dim)])
    if text.startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"--{what}: {e.msg}") from None
        M = ModMatrix(p, n, rows)
    else:
        try:
            M = ModMatrix.parse(p, n, text)
        except ValueError as e:
            raise InputError(f"--{what}: {e}") from None
    if dim is not None and M.dim != dim:
        raise ValidationError(f"--{what} is {M.dim}x{M.dim}, expected {dim}x{dim}")
    return M


def _emit(report, fmt, out):
    if fmt == "dot":
        out.write(report)
        return
    if fmt == "text":
        for k, v in report.items():
            out.write(f"{k}: {json.dumps(v) if isinstance(v, (list, dict)) else v}\n")
        return
    out.write(json.dumps(report, indent=2) + "\n")


def _report(command, **fields):
    return {"schema": SCHEMA_VERSION, "command": command, **fields}


# ---------------------------------------------------------------------------
# subcommands


def cmd_field(args):
    ctx = _field_from_args(args)
    nb = find_normal_basis(ctx)
    return _report(
        "field",
        field=ctx.spec(),
        p=ctx.p,
        r=ctx.r,
        modulus=[ctx.modulus[i] for i in range(ctx.r + 1)],
        modulus_str=str(ctx.modulus),
        elements=ctx.order,
        polynomial_basis=[list(v.coords) for v in polynomial_basis(ctx)],
        normal_basis=[list(v.coords) for v in nb],
    )


def cmd_linpoly(args):
    if args.input:
        L = linpoly.from_json(_load_json(args.input))
    else:
        ctx = _field_from_args(args)
        if not args.coeffs:
            raise InputError("give --coeffs (integer encodings of A_0,...,A_{r-1}) or --input")
        L = linpoly.LinearizedPoly(ctx, tuple(ctx.from_int(c) for c in _ints(args.coeffs, "coeffs")))
    ctx = L.ctx
    B = find_normal_basis(ctx) if args.basis == "normal" else polynomial_basis(ctx)
    if args.format == "dot":
        table = fds.FunctionTable.from_function(fds.StateSpace.field(ctx), L)
        return fds.to_dot(fds.build_state_diagram(table))
    kern = linpoly.lp_kernel(L)
    rep = _report(
        "linpoly",
        poly=linpoly.to_json(L),
        poly_str=str(L),
        basis=args.basis,
        matrix=[list(r) for r in linpoly.lp_matrix(L, B)],
        kernel_dimension=kern.dimension,
        kernel_basis=[list(v) for v in kern.basis_vectors],
        invertible=linpoly.lp_is_invertible(L),
        in_prime_class=L.in_prime_class(),
    )
    if L.in_prime_class():
        rep["associate"] = list(linpoly.associate(L).coeffs)
        rep["order"] = linpoly.lp_order(L)
    if ctx.r == 2:
        rep["quadratic_criterion"] = linpoly.quadratic_invertibility(ctx, L.coeffs[1], L.coeffs[0])
    table = fds.FunctionTable.from_function(fds.StateSpace.field(ctx), L)
    rep["diagram"] = fds.summarize(fds.build_state_diagram(table))
    return rep


def _table_from_input(path):
    obj = _load_json(path)
    try:
        return fds.FunctionTable.from_json(obj)
    except ValueError as e:
        if isinstance(e, ValidationError):
            raise
        raise InputError(f"{path}: {e}") from None


def cmd_fds(args):
    f = _table_from_input(args.input)
    d = fds.build_state_diagram(f)
    if args.action == "diagram":
        if args.format == "dot":
            return fds.to_dot(d)
        return _report("fds diagram", space=f.space.to_json(), **fds.summarize(d))
    if args.action == "order":
        return _report("fds order", order=fds.order_of(d))
    if args.action == "iso":
        if not args.other:
            raise InputError("fds iso needs --other FILE")
        d2 = fds.build_state_diagram(_table_from_input(args.other))
        return _report("fds iso", isomorphic=fds.isomorphic(d, d2),
                       signature=list(fds.diagram_signature(d)),
                       other_signature=list(fds.diagram_signature(d2)))
    if args.action == "interpolate":
        coeffs = fds.interpolate(f)
        return _report("fds interpolate", coeffs=[list(c.coords) for c in coeffs],
                       poly_str=fds.poly_to_str(coeffs))
    raise InputError(f"unknown fds action {args.action!r}")  # pragma: no cover


def cmd_sds(args):
    obj = _load_json(args.input)
    try:
        G, locals_, schedule, m = sds.from_json(obj)
    except ValidationError:
        raise
    except ValueError as e:
        raise InputError(f"{args.input}: {e}") from None
    f = sds.compose_sds(G, locals_, schedule, m)
    d = fds.build_state_diagram(f)
    if args.format == "dot":
        return fds.to_dot(d, "sds")
    return _report("sds", table=f.to_json(), **fds.summarize(d))


def _modorder_matrix(args):
    if args.input:
        try:
            with open(args.input) as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"{args.input}: {e.strerror}") from None
        if text.lstrip().startswith("{"):
            obj = _load_json(args.input)
            try:
                return ModMatrix(int(obj["p"]), int(obj["n"]), obj["matrix"])
            except KeyError as e:
                raise InputError(f"{args.input}: missing field {e}") from None
        try:
            return modsys.parse_matrix_text(text)
        except ValidationError:
            raise
        except ValueError as e:
            raise InputError(str(e)) from None
    if args.p is None or args.n is None or not args.matrix:
        raise InputError("modorder needs --p, --n and --matrix (or --input)")
    return _matrix_arg(args.matrix, args.p, args.n, None, "matrix")


def worked_example(seed=0):
    """Order of A = [[0,5],[1,2]] over Z_8, by lifting, by iteration, and via
    conjugation of the induced system by a random digit bijection."""
    A = ModMatrix(2, 3, [[0, 5], [1, 2]])
    cert = modsys.matrix_order_lifted(A, verify=True)
    f = modsys.linear_system(A)
    g = modsys.Bijection.random(2, 3, random.Random(seed))
    fbar = modsys.conjugate_system(f, g)
    d, dbar = fds.build_state_diagram(f), fds.build_state_diagram(fbar)
    return {
        "matrix": [list(r) for r in A.entries],
        "certificate": cert.to_json(),
        "order_of_f": fds.order_of(d),
        "bijection": list(g.table),
        "order_of_fbar": fds.order_of(dbar),
        "isomorphic": fds.isomorphic(d, dbar),
    }


def cmd_modorder(args):
    if args.demo:
        return _report("modorder demo", seed=args.seed, **worked_example(args.seed))
    A = _modorder_matrix(args)
    if not A.is_invertible():
        raise ValidationError("matrix is singular mod p; it has no multiplicative order")
    cert = modsys.matrix_order_lifted(A, verify=True)
    return _report("modorder", matrix=[list(r) for r in A.entries], **cert.to_json())


def cmd_msorbits(args):
    if args.input:
        obj = _load_json(args.input)
        try:
            p, dim = int(obj["p"]), int(obj["dim"])
            S = ModMatrix(p, 1, obj["S"])
            M = ModMatrix(p, 1, obj["M"]) if "M" in obj else None
        except KeyError as e:
            raise InputError(f"{args.input}: missing field {e}") from None
    else:
        if args.p is None or args.dim is None or not args.S:
            raise InputError("msorbits needs --p, --dim and --S (or --input)")
        p, dim = args.p, args.dim
        S = _matrix_arg(args.S, p, 1, dim, "S")
        M = _matrix_arg(args.M, p, 1, dim, "M") if args.M else None
    include_zero = not args.exclude_zero
    if args.action == "enumerate":
        if M is None:
            raise InputError("msorbits enumerate needs --M")
        rep = msorbits.enumerate_ms_orbits(S, M)
        if args.format == "dot":
            return msorbits.to_dot(rep, S, M)
        return _report("msorbits enumerate", S=[list(r) for r in S.entries], M=[list(r) for r in M.entries],
                       **rep.to_json(include_zero))
    res = msorbits.search_min_orbits(S, budget=args.budget, include_zero=include_zero)
    if args.format == "dot":
        return msorbits.to_dot(res.report, S, res.M)
    out = _report("msorbits search", S=[list(r) for r in S.entries], M=[list(r) for r in res.M.entries],
                  examined=res.examined, complete=res.complete, **res.report.to_json(include_zero))
    out["_budget_exhausted"] = not res.complete
    return out


# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="fdsfield", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "text")):
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("--seed", type=int, default=0)

    def field_flags(p):
        p.add_argument("--field", help='field spec "GF(p^r)/c0,...,cr"')
        p.add_argument("--p", type=int)
        p.add_argument("--r", type=int)
        p.add_argument("--modulus", help="modulus coefficients c0,...,cr ascending")

    p = sub.add_parser("field", help="construct GF(p^r) and its bases")
    field_flags(p)
    common(p)

    p = sub.add_parser("linpoly", help="analyse a linearized polynomial")
    field_flags(p)
    p.add_argument("--coeffs", help="integer encodings of A_0,...,A_{r-1}")
    p.add_argument("--input")
    p.add_argument("--basis", choices=("polynomial", "normal"), default="polynomial")
    common(p, ("json", "text", "dot"))

    p = sub.add_parser("fds", help="state-diagram analysis of a function table")
    p.add_argument("action", choices=("diagram", "order", "iso", "interpolate"))
    p.add_argument("--input", required=True)
    p.add_argument("--other")
    common(p, ("json", "text", "dot"))

    p = sub.add_parser("sds", help="compose a sequential dynamical system")
    p.add_argument("--input", required=True)
    common(p, ("json", "text", "dot"))

    p = sub.add_parser("modorder", help="order of a matrix modulo p^n")
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--matrix", help='rows separated by ";", entries by ","')
    p.add_argument("--input", help='file with "p n r; row; ..." or JSON {"p","n","matrix"}')
    p.add_argument("--demo", action="store_true", help="run the 2x2 order-8 example over Z_8")
    common(p)

    p = sub.add_parser("msorbits", help="MS-orbit enumeration and minimisation")
    p.add_argument("action", choices=("enumerate", "search"))
    p.add_argument("--p", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--S", help='"identity", "-identity" (write --S=-identity) or rows "a,b;c,d"')
    p.add_argument("--M", help="same forms as --S")
    p.add_argument("--input")
    p.add_argument("--budget", type=int, default=msorbits.SEARCH_BUDGET)
    p.add_argument("--exclude-zero", action="store_true")
    common(p, ("json", "text", "dot"))
    return ap


COMMANDS = {
    "field": cmd_field,
    "linpoly": cmd_linpoly,
    "fds": cmd_fds,
    "sds": cmd_sds,
    "modorder": cmd_modorder,
    "msorbits": cmd_msorbits,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if getattr(args, "budget", 1) < 1:
        err.write("error: --budget must be positive\n")
        return EXIT_PARSE
    try:
        report = COMMANDS[args.command](args)
    except InputError as e:
        err.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except BudgetExceeded as e:
        err.write(f"budget exhausted: {e}\n")
        return EXIT_BUDGET
    except ValidationError as e:
        err.write(f"validation failure: {e}\n")
        return EXIT_INVALID
    except ValueError as e:
        err.write(f"parse error: {e}\n")
        return EXIT_PARSE
    status = EXIT_OK
    if isinstance(report, dict) and report.pop("_budget_exhausted", False):
        status = EXIT_BUDGET
    _emit(report, args.format, out)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
