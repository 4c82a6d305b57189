"""Command-line front end.

Exit codes: 0 success/pass, 1 semantic failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .barc_category import (
    BarcodeMatching,
    InvalidMatching,
    OverlapMatching,
    cokernel,
    format_matching,
    kernel,
    load_matching,
    triviality_threshold,
)
from .barcode import BarcodeParseError, format_barcode, load_barcode, shift_barcode
from .interleave import delta_matching_failure, interleaving_distance, interleaving_failure
from .intervals import INF, as_rational, is_delta_trivial
from .mch_diagrams import format_diagram, functor_E, functor_F, parse_diagram
from .persistence import (
    InadmissibleEntry,
    cokernel_module,
    induced_matching,
    kernel_module,
    load_morphism,
    module_interleaving_failure,
    parse_morphism,
    shift_module,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def fmt_exact(x) -> str:
    if x == INF:
        return "inf"
    return str(Fraction(x))


def fmt_value(x) -> str:
    if x == INF:
        return "inf (~inf)"
    return f"{fmt_exact(x)} (~{float(x):.6g})"


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def _parse_delta(text):
    if text is None:
        return Fraction(0)
    try:
        d = as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad delta {text!r}") from None
    if d < 0:
        raise InputError("delta must be >= 0")
    return d


def _load_ref(path, field=None):
    """A barcode file, or ``file[source]`` / ``file[target]`` inside a morphism file."""
    for section in ("source", "target"):
        suffix = f"[{section}]"
        if path.endswith(suffix):
            with open(path[: -len(suffix)], encoding="utf-8") as fh:
                M, N, _, _ = parse_morphism(fh.read(), path=path[: -len(suffix)], p=field)
            return (M if section == "source" else N).bars
    return load_barcode(path)


def _is_morphism_file(path) -> bool:
    with open(path, encoding="utf-8") as fh:
        return any(line.strip() in ("[source]", "[target]", "[matrix]") for line in fh)


def _threshold_text(C) -> str:
    v, a = triviality_threshold(C)
    return f"threshold={fmt_exact(v)} attained={fmt_bool(a)}"


# -- subcommands ------------------------------------------------------------------------

def cmd_distance(args, out, label):
    C, D = load_barcode(args.first), load_barcode(args.second)
    res = interleaving_distance(C, D)
    out.write(f"{label} = {fmt_value(res.value)} attained={fmt_bool(res.attained)}\n")
    if args.witness and res.witness is not None:
        if label == "d_B":
            out.write(format_matching(res.witness, args.first, args.second))
        else:
            out.write("# f: C -> D(delta)\n")
            out.write(format_matching(res.interleaving.f, args.first, args.second))
            out.write("# g: D -> C(delta)\n")
            out.write(format_matching(res.interleaving.g, args.second, args.first))
    return EXIT_OK


def cmd_induced_matching(args, out):
    f = load_morphism(args.file, p=args.field)
    X = induced_matching(f)
    out.write("# induced matching\n")
    out.write(format_matching(X, f"{args.file}[source]", f"{args.file}[target]"))
    bars = {
        "ker f": kernel_module(f).bars,
        "coker f": cokernel_module(f).bars,
        "ker X_f": kernel(X)[0],
        "coker X_f": cokernel(X)[0],
    }
    for name, C in bars.items():
        out.write(f"# {name} = {C.sorted()} {_threshold_text(C)}\n")
    status = EXIT_OK
    if args.delta is not None:
        delta = _parse_delta(args.delta)
        for label, a, b in (("(i) kernel", "ker f", "ker X_f"), ("(ii) cokernel", "coker f", "coker X_f")):
            hyp = all(is_delta_trivial(iv, delta) for iv in bars[a].intervals)
            concl = all(is_delta_trivial(iv, delta) for iv in bars[b].intervals)
            ok = concl or not hyp
            out.write(
                f"# {label} at delta={fmt_exact(delta)}: {a} trivial={fmt_bool(hyp)} "
                f"{b} trivial={fmt_bool(concl)} {'PASS' if ok else 'FAIL'}\n"
            )
            if not ok:
                status = EXIT_FAIL
    return status


def cmd_kernel(args, out, which):
    if _is_morphism_file(args.file):
        f = load_morphism(args.file, p=args.field)
        C = (kernel_module if which == "kernel" else cokernel_module)(f).bars
    else:
        sigma = load_matching(args.file, loader=lambda p: _load_ref(p, args.field))
        C = (kernel if which == "kernel" else cokernel)(sigma)[0]
    out.write(format_barcode(C))
    return EXIT_OK


def cmd_to_diagram(args, out):
    out.write(format_diagram(functor_E(load_barcode(args.file))))
    return EXIT_OK


def cmd_from_diagram(args, out):
    with open(args.file, encoding="utf-8") as fh:
        try:
            D = parse_diagram(fh.read())
        except ValueError as exc:
            raise BarcodeParseError(str(exc), None, args.file) from None
    out.write(format_barcode(functor_F(D)))
    return EXIT_OK


def _pairs_file(path, field):
    """Read a matching file without any validity condition on the pairs."""
    m = load_matching(path, overlap=False, loader=lambda p: _load_ref(p, field))
    return m.source, m.target, m.pairs


def cmd_check(args, out):
    delta = _parse_delta(args.delta)
    kind, files = args.kind, args.files
    need = 2 if kind in ("interleaving", "module-interleaving") else 1
    if len(files) != need:
        raise InputError(f"check {kind} takes {need} file(s)")
    reason = None
    if kind == "overlap-matching":
        C, D, pairs = _pairs_file(files[0], args.field)
        try:
            OverlapMatching(C, D, pairs)
        except InvalidMatching as exc:
            reason = str(exc)
    elif kind == "delta-matching":
        C, D, pairs = _pairs_file(files[0], args.field)
        try:
            reason = delta_matching_failure(BarcodeMatching(C, D, pairs), delta)
        except InvalidMatching as exc:
            reason = str(exc)
    elif kind == "interleaving":
        C, D, fp = _pairs_file(files[0], args.field)
        D2, C2, gp = _pairs_file(files[1], args.field)
        if C2 != C or D2 != D:
            raise InputError("g must reference the barcodes of f in the opposite order")
        try:
            f = OverlapMatching(C, shift_barcode(D, delta), fp)
            g = OverlapMatching(D, shift_barcode(C, delta), gp)
            reason = interleaving_failure(C, D, delta, f, g)
        except InvalidMatching as exc:
            reason = str(exc)
    elif kind == "module-interleaving":
        try:
            f = load_morphism(files[0], p=args.field, delta=delta)
            g = load_morphism(files[1], p=args.field, delta=delta)
        except InadmissibleEntry as exc:
            reason = str(exc)
        else:
            M, N = f.source, g.source
            if f.target != shift_module(N, delta) or g.target != shift_module(M, delta):
                raise InputError("morphism files do not describe M -> N and N -> M")
            reason = module_interleaving_failure(M, N, delta, f, g)
    else:
        raise InputError(f"unknown check kind {kind!r}")
    if reason is None:
        out.write("PASS\n")
        return EXIT_OK
    out.write(f"FAIL: {reason}\n")
    return EXIT_FAIL


# -- argument parsing -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=argparse.SUPPRESS,
                        help="prime characteristic for morphism files (default: file header or 2)")
    common.add_argument("--witness", action="store_true", default=argparse.SUPPRESS,
                        help="print a witness matching / interleaving")

    parser = argparse.ArgumentParser(prog="barcat", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("bottleneck", "interleaving-distance"):
        p = sub.add_parser(name, parents=[common], help=f"exact {name.replace('-', ' ')} of two barcode files")
        p.add_argument("first")
        p.add_argument("second")

    p = sub.add_parser("induced-matching", parents=[common], help="induced matching of a module morphism file")
    p.add_argument("file")
    p.add_argument("--delta")

    for name in ("kernel", "cokernel"):
        p = sub.add_parser(name, parents=[common], help=f"{name} barcode of a matching or morphism file")
        p.add_argument("file")

    p = sub.add_parser("to-diagram", parents=[common], help="barcode file -> stratified diagram")
    p.add_argument("file")
    p = sub.add_parser("from-diagram", parents=[common], help="stratified diagram -> barcode file")
    p.add_argument("file")

    p = sub.add_parser("check", parents=[common], help="verify a matching, delta-matching or interleaving")
    p.add_argument("kind", choices=["overlap-matching", "delta-matching", "interleaving", "module-interleaving"])
    p.add_argument("files", nargs="+")
    p.add_argument("--delta")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.field = getattr(args, "field", None)
    args.witness = getattr(args, "witness", False)
    handlers = {
        "bottleneck": lambda a, o: cmd_distance(a, o, "d_B"),
        "interleaving-distance": lambda a, o: cmd_distance(a, o, "d_I"),
        "induced-matching": cmd_induced_matching,
        "kernel": lambda a, o: cmd_kernel(a, o, "kernel"),
        "cokernel": lambda a, o: cmd_kernel(a, o, "cokernel"),
        "to-diagram": cmd_to_diagram,
        "from-diagram": cmd_from_diagram,
        "check": cmd_check,
    }
    try:
        return handlers[args.command](args, out)
    except (BarcodeParseError, InputError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except InadmissibleEntry as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except InvalidMatching as exc:
        err.write(f"error: invalid matching: {exc}\n")
        return EXIT_FAIL
    except OSError as exc:
        err.write(f"error: {exc.filename}: {exc.strerror}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
