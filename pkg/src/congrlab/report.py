"""Rendering: human tables, stable JSON, and DOT diagrams.

JSON output is key-sorted and newline-terminated so identical inputs give
identical bytes; the golden files in the repository are byte-compared
against these renderings.
"""

from __future__ import annotations

import json

from .algebra import FiniteAlgebra
from .congruences import ConLattice, all_congruences
from .errors import AmbiguousComplement
from .factor import boolean_center, factor_congruences, osum_fc_comparison
from .fixtures import OSUM_PARTS, fixture
from .lifting import lifting_report
from .residuated import algebra_blp, blp_equivalence_check, has_filt_blp, has_id_blp


def yn(v) -> str:
    return "yes" if v else "no"


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def summary_counts(A: FiniteAlgebra) -> tuple[int, int, int]:
    cl = all_congruences(A)
    return (
        len(cl),
        len(boolean_center(cl).members),
        len(factor_congruences(cl).members),
    )


def counts_line(A: FiniteAlgebra) -> str:
    c, b, f = summary_counts(A)
    return f"|Con|={c}, |B|={b}, |FC|={f}"


# -- congruence listings ----------------------------------------------------


def congruence_rows(A: FiniteAlgebra) -> list[dict]:
    cl = all_congruences(A)
    bc = set(boolean_center(cl).members)
    fc = set(factor_congruences(cl).members)
    rows = []
    for i, theta in enumerate(cl.elements):
        rows.append(
            {
                "index": i,
                "congruence": theta.block_string(),
                "blocks": theta.num_blocks,
                "boolean": i in bc,
                "factor": i in fc,
            }
        )
    return rows


def render_con_table(A: FiniteAlgebra, rows=None) -> str:
    rows = rows if rows is not None else congruence_rows(A)
    width = max(len(r["congruence"]) for r in rows)
    out = [f"algebra: {A.name or '(unnamed)'} ({A.n} elements)"]
    out.append(counts_line(A))
    out.append(f"{'congruence':{width}}  blocks  boolean  factor")
    for r in rows:
        out.append(
            f"{r['congruence']:{width}}  {r['blocks']:>6}  "
            f"{yn(r['boolean']):>7}  {yn(r['factor']):>6}"
        )
    return "\n".join(out) + "\n"


# -- DOT --------------------------------------------------------------------


def render_dot(A: FiniteAlgebra, cl: ConLattice | None = None) -> str:
    """Hasse diagram of the congruence lattice.  Boolean congruences are
    double-circled, factor congruences filled."""
    cl = cl or all_congruences(A)
    bc = set(boolean_center(cl).members)
    fc = set(factor_congruences(cl).members)
    k = len(cl.elements)
    lines = [
        f'digraph "Con({A.name or "A"})" {{',
        "  // legend: doublecircle = Boolean congruence, filled = factor congruence",
        "  rankdir=BT;",
        '  node [shape=circle, fontsize=10];',
    ]
    for i, theta in enumerate(cl.elements):
        attrs = []
        if i in bc:
            attrs.append("shape=doublecircle")
        if i in fc:
            attrs.append('style=filled, fillcolor="lightgrey"')
        attr = (", " + ", ".join(attrs)) if attrs else ""
        lines.append(f'  n{i} [label="{theta.block_string()}"{attr}];')
    # cover edges of the congruence order
    for i in range(k):
        for j in range(k):
            if i == j or not cl.leq[i][j]:
                continue
            if any(
                m != i and m != j and cl.leq[i][m] and cl.leq[m][j] for m in range(k)
            ):
                continue
            lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_hasse_dot(A: FiniteAlgebra) -> str:
    """Hasse diagram of a lattice itself (not of its congruence lattice)."""
    A.require_lattice()
    lines = [f'digraph "{A.name or "L"}" {{', "  rankdir=BT;", "  node [shape=plaintext];"]
    for e in range(A.n):
        lines.append(f'  n{e} [label="{A.labels[e]}"];')
    for a, b in A.covers():
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- full report ------------------------------------------------------------


def build_report(A: FiniteAlgebra, name: str | None = None) -> dict:
    name = name or A.name
    rep = lifting_report(A, name=name)
    doc = {
        "algebra": name,
        "carrier_size": A.n,
        "kind": A.signature.kind,
        "flags": rep.flags,
        "per_congruence": rep.per_congruence,
    }
    # element-level verdicts where a bounded-lattice reduct makes sense
    if A.is_lattice:
        try:
            eq = blp_equivalence_check(A)
            doc["blp"] = eq["blp"]
            doc["blp_equivalences_consistent"] = eq["consistent"]
        except AmbiguousComplement as exc:
            doc["blp"] = None
            doc["blp_note"] = str(exc)
        distributive_enough = (
            A.signature.kind == "residuated" or A.is_distributive_lattice()
        )
        if A.n <= 12 and distributive_enough:
            doc["filt_blp"] = has_filt_blp(A)
            doc["id_blp"] = has_id_blp(A)
    # how factor congruences move (or fail to) across an ordinal-sum split
    if name in OSUM_PARTS:
        parts = OSUM_PARTS[name]
        L = fixture(parts[0])
        for p in parts[1:-1]:
            from .algebra import ordinal_sum

            L = ordinal_sum(L, fixture(p))
        M = fixture(parts[-1])
        cmp_ = osum_fc_comparison(L, M)
        doc["osum_fc_transport"] = {
            "parts": list(parts),
            "glued_count": cmp_["glued_count"],
            "fc_count": cmp_["fc_count"],
            "glued_equals_fc": cmp_["glued_equals_fc"],
            "glued": cmp_["glued"],
            "fc": cmp_["fc"],
        }
    return doc


def render_report_table(doc: dict) -> str:
    out = [f"algebra: {doc['algebra']} ({doc['carrier_size']} elements, kind {doc['kind']})"]
    fl = doc["flags"]
    out.append(f"|Con|={fl['con_size']}, |B|={fl['center_size']}, |FC|={fl['fc_size']}")
    out.append(f"CBLP: {yn(fl['cblp'])}, FCLP: {yn(fl['fclp'])}")
    out.append(
        f"fc-normal: {yn(fl['fc_normal'])}, b-normal: {yn(fl['b_normal'])}"
    )
    out.append(
        f"congruence-distributive: {yn(fl['distributive'])}, "
        f"congruence-permutable: {yn(fl['permutable'])}, "
        f"arithmetical: {yn(fl['arithmetical'])}"
    )
    out.append(f"local: {yn(fl['local'])}, semilocal: {yn(fl['semilocal'])}")
    if "blp" in doc:
        if doc["blp"] is None:
            out.append(f"BLP: n/a ({doc['blp_note']})")
        else:
            out.append(f"BLP: {yn(doc['blp'])}")
            if "filt_blp" in doc and doc["filt_blp"] is not None:
                out.append(
                    f"Filt-BLP: {yn(doc['filt_blp'])}, Id-BLP: {yn(doc['id_blp'])}"
                )
    rows = doc["per_congruence"]
    width = max(len(r["congruence"]) for r in rows)
    out.append("")
    out.append(
        f"{'congruence':{width}}  blocks  fclp  cblp  |A/t|  |Con|  |B|  |FC|  max  prime"
    )
    for r in rows:
        out.append(
            f"{r['congruence']:{width}}  {r['blocks']:>6}  {yn(r['fclp']):>4}  "
            f"{yn(r['cblp']):>4}  {r['quotient_size']:>5}  {r['quotient_con_size']:>5}  "
            f"{r['quotient_center_size']:>3}  {r['quotient_fc_size']:>3}  "
            f"{yn(r['maximal']):>3}  {yn(r['prime']):>5}"
        )
    for r in rows:
        if not r["fclp"]:
            out.append(
                f"unliftable factor congruence for {r['congruence']}: {r['fclp_unliftable']}"
            )
        if not r["cblp"]:
            out.append(
                f"unliftable Boolean congruence for {r['congruence']}: {r['cblp_unliftable']}"
            )
    if "osum_fc_transport" in doc:
        t = doc["osum_fc_transport"]
        out.append("")
        out.append(
            f"ordinal-sum split ({' + '.join(t['parts'])}): glued factor congruences: "
            f"{t['glued_count']}, factor congruences of the sum: {t['fc_count']} "
            f"-> {'equal' if t['glued_equals_fc'] else 'DIFFERENT'}"
        )
        if not t["glued_equals_fc"]:
            out.append(
                "  (gluing factor congruences of the parts does not generally "
                "produce the factor congruences of the sum)"
            )
    return "\n".join(out) + "\n"


def product_summary(As: list[FiniteAlgebra], P: FiniteAlgebra, iso_ok: bool) -> str:
    names = " x ".join(A.name or "?" for A in As)
    out = [f"product: {names} ({P.n} elements)"]
    out.append(counts_line(P))
    out.append(f"componentwise congruence map is a bounded-lattice isomorphism: {yn(iso_ok)}")
    return "\n".join(out) + "\n"
