"""Command-line front end.

Exit codes: 0 success, 1 domain failure (violations, imperfect or obstructed
sampling, ill-conditioned rank decisions), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import interchange
from .errors import IllConditioned, NonInvariantKernel, NotSurjective, SheafError
from .interchange import REPORT_SCHEMA, Document, DocumentError
from .sampling import full_stalk_sampling, induced_h0_map, nyquist_check, obstruction_check, validate_morphism
from .sheaf import cohomology, validate
from .zoo import SplineParams, grouping_sheaf, pl_sheaf, spline_sheaf, transmission_line_sheaf

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _tolerance(text: str) -> float | None:
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance must be 'auto' or a positive number, not {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _support(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"support must be comma-separated vertex ids, not {text!r}")


def _wavenumber(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"wavenumber must be 're' or 're,im', not {text!r}")


def _tol_text(tol: float | None, used: float) -> str:
    return f"auto ({used:.3e})" if tol is None else f"{tol:.3e}"


def _emit(payload: dict) -> None:
    payload = {"schema": REPORT_SCHEMA, **payload}
    print(json.dumps(payload, indent=1, default=float))


def _load_sheaf(path: str) -> Document:
    doc = interchange.load(path)
    if doc.sheaf is None:
        raise DocumentError(f"{path}: document has no sheaf")
    return doc


def _resolve_support(args, doc: Document) -> list[int]:
    if args.support is not None:
        return args.support
    if doc.sample_support is not None:
        return doc.sample_support
    raise UsageError("no sample support: pass --support or add sample_support to the document")


# -- commands -------------------------------------------------------------


def cmd_validate(args) -> int:
    doc = _load_sheaf(args.file)
    problems = [str(v) for v in validate(doc.sheaf, args.tolerance)]
    if doc.morphism is not None:
        problems += [str(v) for v in validate_morphism(doc.morphism, args.tolerance)]
    for p in problems:
        print(p)
    if problems:
        print(f"{len(problems)} violation(s) at tolerance {args.tolerance:.3e}")
        return EXIT_FAIL
    print(f"ok (tolerance {args.tolerance:.3e})")
    return EXIT_OK


def cmd_cohomology(args) -> int:
    doc = _load_sheaf(args.file)
    sheaf = doc.sheaf
    top = sheaf.base.dimension if args.max_degree is None else args.max_degree
    results, flagged = [], []
    for k in range(top + 1):
        try:
            res = cohomology(sheaf, k, args.tolerance)
        except IllConditioned as exc:
            res = exc.result
            flagged.append((k, str(exc)))
        results.append(res)
    if args.json:
        _emit(
            {
                "command": "cohomology",
                "dims": {f"H{r.degree}": r.dim for r in results},
                "gap_ratios": {f"H{r.degree}": r.gap_ratio for r in results},
                "tolerance_used": [r.tolerance_used for r in results],
                "ill_conditioned": [k for k, _ in flagged],
                "basis": (
                    {f"H{r.degree}": _basis_json(r) for r in results} if args.basis else None
                ),
            }
        )
    else:
        print(f"tolerance: {_tol_text(args.tolerance, results[0].tolerance_used)}")
        print(", ".join(f"H{r.degree}: {r.dim}" for r in results))
        for r in results:
            print(
                f"  H{r.degree}: gap ratio d^{r.degree} {r.kernel_info.gap_ratio:.3g}, "
                f"d^{r.degree - 1} {r.image_info.gap_ratio:.3g}"
            )
            if args.basis:
                for j in range(r.dim):
                    print(f"  H{r.degree} basis vector {j}:")
                    for face, x in r.by_face(j).items():
                        if x.size:
                            print(f"    {list(face)}: {np.array2string(x, precision=6)}")
    for k, msg in flagged:
        print(f"warning: H{k} is ill-conditioned: {msg}", file=sys.stderr)
    if flagged and not args.force:
        return EXIT_FAIL
    return EXIT_OK


def _basis_json(r) -> list:
    out = []
    for j in range(r.dim):
        out.append(
            {str(list(f)): [[float(np.real(t)), float(np.imag(t))] for t in x] for f, x in r.by_face(j).items()}
        )
    return out


def cmd_nyquist(args) -> int:
    doc = _load_sheaf(args.file)
    sheaf = doc.sheaf
    if args.morphism:
        m = interchange.load_morphism(args.morphism, sheaf)
    else:
        m = full_stalk_sampling(sheaf, [(y,) for y in _resolve_support(args, doc)])
    try:
        report = nyquist_check(m, args.tolerance, check=not args.force)
        injective = induced_h0_map(m, args.tolerance, check=not args.force).injective
    except (NotSurjective, NonInvariantKernel) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        _emit({"command": "nyquist", **report.as_dict(), "injective_on_sections": injective})
    else:
        print(f"tolerance: {_tol_text(args.tolerance, report.tolerance_used)}")
        print(f"ambiguity (dim H0 of ambiguity sheaf): {report.ambiguity_dim}")
        print(f"redundancy (dim H1 of ambiguity sheaf): {report.redundancy_dim}")
        print(f"injective on global sections: {'yes' if injective else 'no'}")
        print(f"verdict: {report.verdict}")
    return EXIT_OK if report.perfect else EXIT_FAIL


def cmd_obstruction(args) -> int:
    doc = _load_sheaf(args.file)
    support = _resolve_support(args, doc)
    report = obstruction_check(doc.sheaf, support, args.tolerance, check=not args.force)
    if args.json:
        _emit(
            {
                "command": "obstruction",
                "support": support,
                "dim": report.dim,
                "obstructed": report.obstructed,
                "verdict": report.verdict,
                "tolerance_used": report.tolerance_used,
            }
        )
    else:
        print(f"tolerance: {_tol_text(args.tolerance, report.tolerance_used)}")
        print(f"dim H0 of sections vanishing on the support: {report.dim}")
        print(f"verdict: {report.verdict}")
    return EXIT_FAIL if report.obstructed else EXIT_OK


def cmd_zoo(args) -> int:
    metric = None
    if args.family == "grouping":
        sheaf = grouping_sheaf(args.n, args.window, args.dim)
    elif args.family == "spline":
        sheaf = spline_sheaf(args.n, SplineParams(args.degree, args.spacing))
    else:
        graph_doc = interchange.load(args.graph)
        if args.family == "pl":
            sheaf = pl_sheaf(graph_doc.complex)
        else:
            if graph_doc.metric is None:
                raise DocumentError(f"{args.graph}: transmission lines need edge lengths")
            metric = graph_doc.metric
            sheaf = transmission_line_sheaf(metric, args.wavenumber)
    text = interchange.dumps(Document(sheaf.base, sheaf, metric=metric))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sheafsample", description="Sheaf cohomology and sampling analysis.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, default_tol="auto"):
        sp.add_argument("--tolerance", type=_tolerance, default=_tolerance(default_tol))

    v = sub.add_parser("validate", help="check restriction and morphism consistency")
    v.add_argument("file")
    v.add_argument("--tolerance", type=_tolerance, default=1e-8)
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("cohomology", help="sheaf cohomology dimensions")
    c.add_argument("file")
    c.add_argument("--max-degree", type=int)
    common(c)
    c.add_argument("--basis", action="store_true", help="print basis vectors grouped by face")
    c.add_argument("--force", action="store_true", help="exit 0 even if a rank decision is ill-conditioned")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_cohomology)

    n = sub.add_parser("nyquist", help="ambiguity and redundancy of a sampling")
    n.add_argument("file")
    n.add_argument("--support", type=_support)
    how = n.add_mutually_exclusive_group()
    how.add_argument("--morphism", help="morphism document")
    how.add_argument("--full-stalk", action="store_true", help="sample whole stalks on the support (default)")
    common(n)
    n.add_argument("--force", action="store_true")
    n.add_argument("--json", action="store_true")
    n.set_defaults(func=cmd_nyquist)

    o = sub.add_parser("obstruction", help="global sections vanishing on a vertex set")
    o.add_argument("file")
    o.add_argument("--support", type=_support)
    common(o)
    o.add_argument("--force", action="store_true")
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_obstruction)

    z = sub.add_parser("zoo", help="write a sheaf from one of the built-in families")
    zs = z.add_subparsers(dest="family", required=True)
    g = zs.add_parser("grouping")
    g.add_argument("n", type=int)
    g.add_argument("window", type=int)
    g.add_argument("dim", type=int)
    pl = zs.add_parser("pl")
    pl.add_argument("--graph", required=True)
    t = zs.add_parser("transmission")
    t.add_argument("--graph", required=True)
    t.add_argument("--wavenumber", type=_wavenumber, required=True)
    s = zs.add_parser("spline")
    s.add_argument("n", type=int)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--spacing", type=float, default=1.0)
    for sp in (g, pl, t, s):
        sp.add_argument("--out")
    z.set_defaults(func=cmd_zoo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, SheafError) as exc:
        code = EXIT_USAGE if args.command == "zoo" else EXIT_FAIL
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
