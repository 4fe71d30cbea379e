"""Command-line front end.

Exit-code contract (so shell scripts can assert properties):
  0  success, or the checked property holds
  1  the checked property fails (evidence printed on stdout)
  2  input or validation error

Set CONGRLAB_CACHE to a directory to memoize congruence-lattice
computations on disk, keyed by a content hash of the operation tables.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import FiniteAlgebra, build_from_spec, direct_product, dual, emit_spec, ordinal_sum
from .congruences import all_congruences, parse_congruence
from .errors import AmbiguousComplement, CongrlabError
from .factor import (
    boolean_center,
    crt_characterization,
    crt_direct_check,
    factor_congruences,
    osum_fc_comparison,
    product_con_iso_check,
)
from .fixtures import FIXTURE_NAMES, fixture, fixture_spec
from .lifting import algebra_cblp, algebra_fclp, is_b_normal, is_fc_normal, quotient
from .report import (
    build_report,
    congruence_rows,
    counts_line,
    dump_json,
    product_summary,
    render_con_table,
    render_dot,
    render_hasse_dot,
    render_report_table,
    yn,
)
from .residuated import algebra_blp, has_filt_blp, has_id_blp

CHECK_PROPERTIES = (
    "fclp",
    "cblp",
    "blp",
    "filt-blp",
    "id-blp",
    "fc-normal",
    "b-normal",
    "arithmetical",
    "crt",
)


def _add_input_args(p):
    p.add_argument("--fixture", help="named example algebra")
    p.add_argument("--file", help="path to an algebra spec (JSON)")
    p.add_argument("--max-size", type=int, default=None, help="refuse larger inputs")


def _load(args) -> FiniteAlgebra:
    if bool(args.fixture) == bool(args.file):
        raise CongrlabError("give exactly one of --fixture or --file")
    if args.fixture:
        A = fixture(args.fixture)
    else:
        with open(args.file) as fh:
            A = build_from_spec(json.load(fh))
    if args.max_size is not None and A.n > args.max_size:
        raise CongrlabError(
            f"input has {A.n} elements, above the requested limit {args.max_size}"
        )
    return A


def _load_operand(name_or_path: str) -> FiniteAlgebra:
    if name_or_path in FIXTURE_NAMES:
        return fixture(name_or_path)
    with open(name_or_path) as fh:
        return build_from_spec(json.load(fh))


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="congrlab",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("table", "json", "dot"), default="table")
        p.add_argument("--out", help="write output to a file instead of stdout")
        return p

    p = verb("con", "list the congruence lattice")
    _add_input_args(p)
    p = verb("center", "list the Boolean congruences")
    _add_input_args(p)
    p = verb("fc", "list the factor congruences")
    _add_input_args(p)
    p = verb("quotient", "compute a quotient algebra")
    _add_input_args(p)
    p.add_argument("--by", required=True, help='congruence as blocks, e.g. "0,m|1"')
    p = verb("product", "direct product of algebras")
    p.add_argument("operands", nargs="+", help="fixture names or spec files")
    p = verb("osum", "ordinal sum of two lattices")
    p.add_argument("operands", nargs=2, help="fixture names or spec files")
    p = verb("dual", "order-dual of a lattice")
    _add_input_args(p)
    p = verb("check", "decide a property (exit 0 holds / 1 fails)")
    p.add_argument("property", choices=CHECK_PROPERTIES)
    _add_input_args(p)
    p = verb("report", "full lifting/classification report")
    _add_input_args(p)
    p = verb("fixture", "show a named fixture")
    p.add_argument("name", choices=FIXTURE_NAMES)
    p.add_argument("--emit-spec", action="store_true", help="print the full table spec")
    p = verb("dot", "Hasse diagram of the algebra itself (DOT)")
    _add_input_args(p)
    p = sub.add_parser("regen-goldens", help="recompute all golden files")
    p.add_argument("--out", default="goldens", help="golden directory")
    return ap


def _listing(A, rows, fmt):
    if fmt == "json":
        return dump_json({"algebra": A.name, "counts": counts_line(A), "rows": rows})
    if fmt == "dot":
        return render_dot(A)
    return render_con_table(A, rows)


def _algebra_output(A, fmt):
    if fmt == "json":
        return dump_json(emit_spec(A))
    if fmt == "dot":
        return render_hasse_dot(A)
    lines = [f"algebra: {A.name or '(unnamed)'} ({A.n} elements, kind {A.signature.kind})"]
    lines.append("elements: " + " ".join(A.labels))
    if A.is_lattice:
        covers = ", ".join(f"{A.labels[a]}<{A.labels[b]}" for a, b in A.covers())
        lines.append("covers: " + covers)
    return "\n".join(lines) + "\n"


def run(args) -> int:
    verb = args.verb
    if verb == "con":
        A = _load(args)
        _emit(_listing(A, congruence_rows(A), args.format), args.out)
        return 0
    if verb in ("center", "fc"):
        A = _load(args)
        cl = all_congruences(A)
        members = set(
            (boolean_center(cl) if verb == "center" else factor_congruences(cl)).members
        )
        rows = [r for r in congruence_rows(A) if r["index"] in members]
        _emit(_listing(A, rows, args.format), args.out)
        return 0
    if verb == "quotient":
        A = _load(args)
        theta = parse_congruence(A, args.by)
        Q = quotient(A, theta)
        _emit(_algebra_output(Q.quotient, args.format), args.out)
        return 0
    if verb == "product":
        As = [_load_operand(x) for x in args.operands]
        P = direct_product(As)
        ok = product_con_iso_check(As, P=P)
        if args.format == "json":
            c = counts_line(P)
            _emit(dump_json({"product": P.name, "counts": c, "iso_verified": ok}), args.out)
        elif args.format == "dot":
            _emit(render_hasse_dot(P), args.out)
        else:
            _emit(product_summary(As, P, ok), args.out)
        return 0 if ok else 1
    if verb == "osum":
        L, M = (_load_operand(x) for x in args.operands)
        S = ordinal_sum(L, M)
        cmp_ = osum_fc_comparison(L, M)
        if args.format == "json":
            _emit(
                dump_json(
                    {
                        "sum": S.name,
                        "counts": counts_line(S),
                        "glued_fc_count": cmp_["glued_count"],
                        "fc_count": cmp_["fc_count"],
                        "glued_equals_fc": cmp_["glued_equals_fc"],
                    }
                ),
                args.out,
            )
        elif args.format == "dot":
            _emit(render_hasse_dot(S), args.out)
        else:
            text = _algebra_output(S, "table")
            text += counts_line(S) + "\n"
            text += (
                f"glued factor congruences: {cmp_['glued_count']}, "
                f"factor congruences of the sum: {cmp_['fc_count']} -> "
                f"{'equal' if cmp_['glued_equals_fc'] else 'DIFFERENT'}\n"
            )
            _emit(text, args.out)
        return 0
    if verb == "dual":
        A = _load(args)
        _emit(_algebra_output(dual(A), args.format), args.out)
        return 0
    if verb == "check":
        A = _load(args)
        return _check(A, args)
    if verb == "report":
        A = _load(args)
        doc = build_report(A, name=args.fixture or A.name)
        if args.format == "json":
            _emit(dump_json(doc), args.out)
        elif args.format == "dot":
            _emit(render_dot(A), args.out)
        else:
            _emit(render_report_table(doc), args.out)
        return 0
    if verb == "fixture":
        A = fixture(args.name)
        if args.emit_spec:
            _emit(dump_json(emit_spec(A)), args.out)
        else:
            _emit(_algebra_output(A, args.format), args.out)
        return 0
    if verb == "dot":
        A = _load(args)
        _emit(render_hasse_dot(A), args.out)
        return 0
    if verb == "regen-goldens":
        return regen_goldens(args.out)
    raise CongrlabError(f"unknown verb {verb!r}")


def _check(A: FiniteAlgebra, args) -> int:
    prop = args.property
    if prop in ("fclp", "cblp"):
        f_ok, f_ev, f_theta = algebra_fclp(A)
        c_ok, c_ev, c_theta = algebra_cblp(A)
        print(f"FCLP: {yn(f_ok)}; CBLP: {yn(c_ok)}")
        ok, ev, theta = (f_ok, f_ev, f_theta) if prop == "fclp" else (c_ok, c_ev, c_theta)
        if not ok:
            print(
                f"failing congruence: {theta.block_string()} "
                f"(cannot reach {ev.unliftable})"
            )
        return 0 if ok else 1
    if prop == "blp":
        ok, theta = algebra_blp(A)
        print(f"BLP: {yn(ok)}")
        if not ok:
            print(f"failing congruence: {theta.block_string()}")
        return 0 if ok else 1
    if prop == "filt-blp":
        ok = has_filt_blp(A)
        print(f"Filt-BLP: {yn(ok)}")
        return 0 if ok else 1
    if prop == "id-blp":
        ok = has_id_blp(A)
        print(f"Id-BLP: {yn(ok)}")
        return 0 if ok else 1
    if prop == "fc-normal":
        ok, info = is_fc_normal(A)
        print(f"fc-normal: {yn(ok)}")
        if not ok:
            print(f"failing pair: {info[0]} / {info[1]}")
        return 0 if ok else 1
    if prop == "b-normal":
        ok, info = is_b_normal(A)
        print(f"b-normal: {yn(ok)}")
        if not ok:
            print(f"failing pair: {info[0]} / {info[1]}")
        return 0 if ok else 1
    if prop == "arithmetical":
        from .congruences import is_arithmetical, is_congruence_distributive, is_congruence_permutable

        d = is_congruence_distributive(A)
        p = is_congruence_permutable(A)
        print(f"congruence-distributive: {yn(d)}; congruence-permutable: {yn(p)}")
        return 0 if d and p else 1
    if prop == "crt":
        cl = all_congruences(A)
        fc = factor_congruences(cl).congruences()
        char = crt_characterization(A, fc)
        direct, witness = crt_direct_check(A, fc, k_max=3)
        print(f"CRT (factor congruences): characterization {yn(char)}, direct {yn(direct)}")
        if witness:
            thetas, targets = witness
            print(
                "counterexample: "
                + "; ".join(t.block_string() for t in thetas)
                + " with targets "
                + ", ".join(targets)
            )
        return 0 if char and direct else 1
    raise CongrlabError(f"unknown property {prop!r}")


def regen_goldens(out_dir: str) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in FIXTURE_NAMES:
        A = fixture(name)
        doc = build_report(A, name=name)
        (out / f"{name}.report.txt").write_text(render_report_table(doc))
        (out / f"{name}.report.json").write_text(dump_json(doc))
        (out / f"{name}.con.dot").write_text(render_dot(A))
    T, E = fixture("T"), fixture("E")
    P = direct_product([T, E])
    ok = product_con_iso_check([T, E], P=P)
    (out / "TxE.txt").write_text(product_summary([T, E], P, ok))
    print(f"wrote goldens for {len(FIXTURE_NAMES)} fixtures plus TxE into {out}/")
    return 0


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return run(args)
    except AmbiguousComplement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CongrlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
