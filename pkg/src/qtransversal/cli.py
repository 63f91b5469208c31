"""Command line interface.

Exit codes: 0 all checks pass, 1 a violation or failed check, 2 input
error, 3 resource bound hit.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__, catalog, fileformats, report, sweeps, unitary
from .errors import CodeFileError, ResourceError, ValidationError

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _coords(text):
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ValidationError(f"expected a list of integers, got {text!r}") from None


def _dump(obj, path=None):
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _summary(rep):
    d = rep.as_dict()
    code = d["code"]
    decl = code["declared"]
    lines = [f"{code['name']}: d={code['d']} n={code['n']} k={decl['k']} delta={decl['delta']}"]
    if d.get("minimal_subcodes") is not None:
        lines.append(f"minimal supports: {len(d['minimal_subcodes'])}")
    if d.get("coordinates") is not None:
        for c in d["coordinates"]:
            extra = f" [{c['degenerate']}]" if c.get("degenerate") else ""
            lines.append(f"  coordinate {c['j']}: {c['class']} ({c.get('witness_label')}){extra}")
    if d.get("pi") is not None:
        lines.append(f"Pi index {d['pi']['index']} ({d['pi']['tag']})")
    if d.get("lemmas") is not None:
        for name, v in d["lemmas"].items():
            lines.append(f"  {name}: {'holds' if v['holds'] else 'FAILS'}")
    for sec, msg in d["errors"].items():
        lines.append(f"  {sec}: resource bound ({msg})")
    lines.append(f"status: {d['status']}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args):
    spec = fileformats.load_code(args.file)
    rep = report.run_analysis(spec)
    if args.json:
        if args.json == "-":
            sys.stdout.write(rep.to_json())
        else:
            with open(args.json, "w") as fh:
                fh.write(rep.to_json())
            sys.stdout.write(_summary(rep))
    else:
        sys.stdout.write(_summary(rep))
    return rep.exit_code


def cmd_verify(args):
    rep = sweeps.verify_lemmas(args.d, args.n, exhaustive=args.exhaustive,
                               samples=args.samples, seed=args.seed)
    _dump(rep, args.json)
    return EXIT_VIOLATION if rep["total_violations"] else EXIT_OK


def _factor_classes(gate):
    out = []
    for j, U in enumerate(gate.factors, 1):
        if gate.d ** (2 * gate.r) > 256:
            out.append({"j": j, "class": None})
            continue
        c = unitary.classify_unitary(U, gate.d, gate.r)
        out.append({"j": j, **c.as_dict()})
    return out


def cmd_check_gate(args):
    spec = fileformats.load_code(args.file)
    gate = fileformats.load_gate(args.gate, spec.d, spec.n, args.blocks)
    omega = _coords(args.omega) if args.omega else None
    res = unitary.preserves_code(gate, spec, omega=omega)
    out = {"code": spec.name, "blocks": gate.r, **res.as_dict(),
           "factors": _factor_classes(gate)}
    if res.preserved and omega is None:
        try:
            M = unitary.logical_action(gate, spec, check=False)
            out["logical_action"] = [[[float(z.real), float(z.imag)] for z in row] for row in np.round(M, 12)]
        except (ValidationError, ResourceError) as exc:
            out["logical_action_error"] = str(exc)
    _dump(out, args.json)
    return EXIT_OK if res.preserved else EXIT_VIOLATION


def cmd_automorphism(args):
    spec = fileformats.load_code(args.file)
    out = {"code": spec.name}
    status = EXIT_OK
    if args.perm:
        perm = _coords(args.perm)
        if args.gate:
            gate = fileformats.load_gate(args.gate, spec.d, spec.n)
        else:
            gate = unitary.TransversalGate.bitwise(np.eye(spec.d), spec.n, spec.d)
        if sorted(perm) != list(range(1, spec.n * gate.r + 1)):
            raise ValidationError(f"--perm must be a permutation of 1..{spec.n * gate.r}")
        res = unitary.check_code_automorphism(gate, perm, spec)
        out["check"] = {"perm": perm, **res.as_dict()}
        status = EXIT_OK if res.preserved else EXIT_VIOLATION
    if args.search:
        found = unitary.search_automorphisms(spec.stabilizer, limit=args.limit)
        out["search"] = {"count": len(found), "automorphisms": [a.as_dict() for a in found]}
    if not args.perm and not args.search:
        raise ValidationError("give --perm, --search or both")
    _dump(out, args.json)
    return status


def cmd_catalog(args):
    if args.name is None:
        for name in catalog.names(include_optional=True):
            opt = " (optional, slow)" if name in catalog.OPTIONAL else ""
            sys.stdout.write(f"{name}{opt}\n")
        return EXIT_OK
    sys.stdout.write(fileformats.format_code_file(catalog.get(args.name)))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="qtransversal",
                                description="Transversal-gate structure analysis of stabilizer codes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full structural analysis of a code")
    a.add_argument("file", help="code file or catalog name")
    a.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify-lemmas", help="sweep the structural lemmas over a corpus")
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--n", type=int, required=True)
    mode = v.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int, metavar="K")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", metavar="OUT")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("check-gate", help="does a transversal gate preserve the code?")
    g.add_argument("file")
    g.add_argument("--gate", required=True, metavar="GATEFILE")
    g.add_argument("--blocks", type=int, default=None, metavar="R")
    g.add_argument("--omega", metavar="LIST", help="check the subcode on these coordinates")
    g.add_argument("--json", metavar="OUT")
    g.set_defaults(func=cmd_check_gate)

    m = sub.add_parser("automorphism", help="check or search code automorphisms")
    m.add_argument("file")
    m.add_argument("--perm", metavar="LIST")
    m.add_argument("--gate", metavar="GATEFILE")
    m.add_argument("--search", action="store_true")
    m.add_argument("--limit", type=int, default=None)
    m.add_argument("--json", metavar="OUT")
    m.set_defaults(func=cmd_automorphism)

    c = sub.add_parser("catalog", help="list built-in codes or print one as a code file")
    c.add_argument("name", nargs="?")
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CodeFileError, ValidationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ResourceError as exc:
        sys.stderr.write(f"resource bound: {exc}\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
