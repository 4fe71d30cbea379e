"""Quotients, congruence transport, and the lifting properties.

A congruence theta "lifts" factor congruences when the induced map
u(alpha) = (alpha v theta)/theta from the factor congruences of A onto those
of A/theta is surjective; the algebra has the property when every theta
does.  The same scheme with Boolean congruences instead of factor
congruences gives the second property.  Both are decided by exhaustive
search — every candidate witness is tried, and failures name the target
congruence that cannot be reached.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import FiniteAlgebra, canonicalize
from .congruences import (
    Congruence,
    all_congruences,
    compose,
    is_arithmetical,
    is_congruence_distributive,
    is_congruence_permutable,
    join,
    maximal_congruences,
    prime_congruences,
)
from .errors import ParentMismatch, TrivialAlgebra
from .factor import _fc_relation, boolean_center, factor_congruences


@dataclass
class QuotientResult:
    """A/theta with its canonical projection.

    projection[e] = the minimum element of e's theta-block (an element of A);
    index_in_quotient maps those representatives to dense quotient indices.
    """

    quotient: FiniteAlgebra
    projection: tuple[int, ...]
    theta: Congruence
    index_in_quotient: dict[int, int]

    def project(self, e: int) -> int:
        """Quotient index of an element of the original carrier."""
        return self.index_in_quotient[self.projection[e]]


def quotient(A: FiniteAlgebra, theta: Congruence) -> QuotientResult:
    """The quotient algebra: carrier = theta-blocks, operations induced.

    Block labels are the member labels joined with "+", so quotient elements
    stay readable in reports."""
    if theta.algebra != A:
        raise ParentMismatch("congruence does not belong to the algebra")
    reps = sorted(set(theta.block_of))
    index = {r: i for i, r in enumerate(reps)}
    k = len(reps)
    labels = []
    for r in reps:
        labels.append("+".join(A.labels[e] for e in range(A.n) if theta.block_of[e] == r))
    tables = {}
    for fname, arity in A.signature.operations:
        if arity == 0:
            tables[fname] = index[theta.block_of[A.tables[fname]]]
        elif arity == 1:
            t = A.tables[fname]
            tables[fname] = [index[theta.block_of[t[r]]] for r in reps]
        elif arity == 2:
            t = A.tables[fname]
            tables[fname] = [
                [index[theta.block_of[t[a][b]]] for b in reps] for a in reps
            ]
        else:
            def build(args, fname=fname, arity=arity):
                if len(args) == arity:
                    return index[theta.block_of[A.op(fname, *args)]]
                return tuple(build(args + [r]) for r in reps)

            tables[fname] = build([])
    name = f"{A.name}/{theta.block_string()}" if A.name else None
    Q = FiniteAlgebra(k, labels, A.signature, tables, name=name, validate=False)
    return QuotientResult(Q, theta.block_of, theta, index)


def u_map(A: FiniteAlgebra, theta: Congruence, alpha: Congruence, Q: QuotientResult | None = None) -> Congruence:
    """Transport alpha to the quotient: join with theta, then project."""
    if alpha.algebra != A or theta.algebra != A:
        raise ParentMismatch("congruences do not belong to the algebra")
    if Q is None:
        Q = quotient(A, theta)
    lifted = join(alpha, theta)
    k = Q.quotient.n
    reps = sorted(Q.index_in_quotient, key=Q.index_in_quotient.get)
    parent = list(range(k))
    for i in range(k):
        parent[i] = Q.index_in_quotient[Q.projection[lifted.block_of[reps[i]]]]
    return Congruence(Q.quotient, canonicalize(parent))


def s_inverse(A: FiniteAlgebra, theta: Congruence, beta: Congruence, Q: QuotientResult | None = None) -> Congruence:
    """Pull a quotient congruence back through the projection."""
    if Q is None:
        Q = quotient(A, theta)
    if beta.algebra != Q.quotient:
        raise ParentMismatch("congruence does not belong to the quotient")
    first: dict[int, int] = {}
    parent = [0] * A.n
    for e in range(A.n):
        key = beta.block_of[Q.project(e)]
        parent[e] = first.setdefault(key, e)
    return Congruence(A, canonicalize(parent))


@dataclass
class LiftEvidence:
    """Witnesses (target, source) per lifted congruence, or the first
    target congruence of the quotient that nothing maps onto."""

    witnesses: list[tuple[str, str]] = field(default_factory=list)
    unliftable: str | None = None


def _has_lifting(A, theta, members_of) -> tuple[bool, LiftEvidence]:
    Q = quotient(A, theta)
    src = members_of(all_congruences(A)).congruences()
    tgt = members_of(all_congruences(Q.quotient)).congruences()
    images = {alpha: u_map(A, theta, alpha, Q=Q) for alpha in src}
    ev = LiftEvidence()
    for beta in tgt:
        hit = next((a for a in src if images[a] == beta), None)
        if hit is None:
            ev.unliftable = beta.block_string()
            return False, ev
        ev.witnesses.append((beta.block_string(), hit.block_string()))
    return True, ev


def has_fclp(A: FiniteAlgebra, theta: Congruence) -> tuple[bool, LiftEvidence]:
    """Does every factor congruence of A/theta arise from one of A?"""
    return _has_lifting(A, theta, factor_congruences)


def has_cblp(A: FiniteAlgebra, theta: Congruence) -> tuple[bool, LiftEvidence]:
    """Does every Boolean congruence of A/theta arise from one of A?"""
    return _has_lifting(A, theta, boolean_center)


def algebra_fclp(A: FiniteAlgebra) -> tuple[bool, LiftEvidence | None, Congruence | None]:
    """Conjunction of has_fclp over all congruences; stops at the first
    failure and returns its evidence and the failing congruence."""
    for theta in all_congruences(A).elements:
        ok, ev = has_fclp(A, theta)
        if not ok:
            return False, ev, theta
    return True, None, None


def algebra_cblp(A: FiniteAlgebra) -> tuple[bool, LiftEvidence | None, Congruence | None]:
    for theta in all_congruences(A).elements:
        ok, ev = has_cblp(A, theta)
        if not ok:
            return False, ev, theta
    return True, None, None


# -- normality conditions ---------------------------------------------------


def is_fc_normal(A: FiniteAlgebra):
    """For every pair with compose(phi, psi) the full relation, a factor
    congruence alpha must exist with phi v alpha = psi v (complement of
    alpha) = the full congruence.  Returns (ok, witness map or failing pair)."""
    cl = all_congruences(A)
    fc = factor_congruences(cl)
    nb = cl.index_of_nabla
    k = len(cl.elements)
    witnesses = {}
    for i in range(k):
        for j in range(k):
            if not _fc_relation(cl, i, j).is_full():
                continue
            found = None
            for a in fc.members:
                if cl.join_table[i][a] == nb and cl.join_table[j][fc.complement[a]] == nb:
                    found = a
                    break
            if found is None:
                pair = (cl.elements[i].block_string(), cl.elements[j].block_string())
                return False, pair
            witnesses[(i, j)] = found
    return True, witnesses


def is_b_normal(A: FiniteAlgebra):
    """Same scheme with join as the trigger and Boolean-congruence pairs
    meeting in the diagonal as witnesses.

    The witness search only tries pairs (alpha, complement of alpha): any
    witness beta satisfies alpha ^ beta = diagonal, hence beta lies below
    the complement, and join is monotone — so if some (alpha, beta) works,
    (alpha, complement of alpha) works too."""
    cl = all_congruences(A)
    bc = boolean_center(cl)
    nb = cl.index_of_nabla
    k = len(cl.elements)
    witnesses = {}
    for i in range(k):
        for j in range(k):
            if cl.join_table[i][j] != nb:
                continue
            found = None
            for a in bc.members:
                b = bc.complement[a]
                if cl.join_table[i][a] == nb and cl.join_table[j][b] == nb:
                    found = (a, b)
                    break
            if found is None:
                pair = (cl.elements[i].block_string(), cl.elements[j].block_string())
                return False, pair
            witnesses[(i, j)] = found
    return True, witnesses


# -- theorem validator ------------------------------------------------------


def check_special_congruences(A: FiniteAlgebra) -> dict:
    """Validate that maximal and prime congruences always lift (both
    properties) and that a unique maximal congruence forces both properties
    algebra-wide.  Violations indicate implementation bugs, not properties
    of the input; the report says so."""
    violations = []
    try:
        maxes = maximal_congruences(A)
    except TrivialAlgebra:
        maxes = []
    primes = prime_congruences(A) if A.n > 1 else []
    for label, group in (("maximal", maxes), ("prime", primes)):
        for theta in group:
            for prop, check in (("fclp", has_fclp), ("cblp", has_cblp)):
                ok, ev = check(A, theta)
                if not ok:
                    violations.append(
                        f"{label} congruence {theta.block_string()} fails {prop}: "
                        f"cannot reach {ev.unliftable}"
                    )
    if len(maxes) == 1:
        for prop, check in (("fclp", algebra_fclp), ("cblp", algebra_cblp)):
            ok, ev, theta = check(A)
            if not ok:
                violations.append(
                    f"algebra with a unique maximal congruence fails {prop} "
                    f"at {theta.block_string()}"
                )
    return {
        "ok": not violations,
        "violations": violations,
        "note": "theorem validator: any violation indicates an implementation bug",
    }


# -- report assembly --------------------------------------------------------


@dataclass
class LiftingReport:
    algebra_name: str | None
    flags: dict
    per_congruence: list[dict]


def lifting_report(A: FiniteAlgebra, name: str | None = None) -> LiftingReport:
    """Per-congruence verdicts plus algebra-level classification flags."""
    cl = all_congruences(A)
    bc = boolean_center(cl)
    fc = factor_congruences(cl)
    try:
        maxes = set(c.block_of for c in maximal_congruences(A))
    except TrivialAlgebra:
        maxes = set()
    primes = set(c.block_of for c in prime_congruences(A)) if A.n > 1 else set()
    rows = []
    all_fclp = True
    all_cblp = True
    for theta in cl.elements:
        Q = quotient(A, theta)
        clq = all_congruences(Q.quotient)
        f_ok, f_ev = has_fclp(A, theta)
        c_ok, c_ev = has_cblp(A, theta)
        all_fclp &= f_ok
        all_cblp &= c_ok
        rows.append(
            {
                "congruence": theta.block_string(),
                "blocks": theta.num_blocks,
                "fclp": f_ok,
                "fclp_unliftable": f_ev.unliftable,
                "cblp": c_ok,
                "cblp_unliftable": c_ev.unliftable,
                "quotient_size": Q.quotient.n,
                "quotient_con_size": len(clq),
                "quotient_center_size": len(boolean_center(clq).members),
                "quotient_fc_size": len(factor_congruences(clq).members),
                "maximal": theta.block_of in maxes,
                "prime": theta.block_of in primes,
            }
        )
    fcn, _ = is_fc_normal(A)
    bn, _ = is_b_normal(A)
    flags = {
        "con_size": len(cl),
        "center_size": len(bc.members),
        "fc_size": len(fc.members),
        "fclp": all_fclp,
        "cblp": all_cblp,
        "fc_normal": fcn,
        "b_normal": bn,
        "distributive": is_congruence_distributive(A),
        "permutable": is_congruence_permutable(A),
        "arithmetical": is_arithmetical(A),
        "local": A.n > 1 and len(maxes) == 1,
        "semilocal": A.n > 1,
    }
    return LiftingReport(name or A.name, flags, rows)
