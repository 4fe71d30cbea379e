"""Boolean centers, factor congruences, CRT tests and transport maps.

The Boolean center of a (distributive) bounded lattice is its sublattice of
complemented elements; applied to a congruence lattice its members are the
"Boolean congruences".  A factor congruence is a Boolean congruence theta
whose composition with its complement is already the full relation — these
are exactly the congruences inducing direct-product decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from .algebra import (
    FiniteAlgebra,
    block_masks,
    canonicalize,
    ordinal_sum_with_maps,
    product_decode,
    product_radix,
)
from .congruences import (
    ConLattice,
    Congruence,
    Relation,
    all_congruences,
    compose,
    principal_congruence,
    relation_of,
)
from .errors import (
    EncodingMismatch,
    NotASublattice,
    NotDistributive,
    ParentMismatch,
    PreconditionFailed,
    SizeCap,
)

CRT_K_MAX = 3


@dataclass
class BooleanCenter:
    """Complemented members of a ConLattice, with the complement involution."""

    lattice: ConLattice
    members: list[int]
    complement: dict[int, int]

    def congruences(self) -> list[Congruence]:
        return [self.lattice.elements[i] for i in self.members]

    def complement_of(self, theta: Congruence) -> Congruence:
        i = self.lattice.index(theta)
        return self.lattice.elements[self.complement[i]]


@dataclass
class FactorAlgebra:
    """The factor congruences, as a subset of the Boolean center."""

    lattice: ConLattice
    members: list[int]
    complement: dict[int, int]

    def congruences(self) -> list[Congruence]:
        return [self.lattice.elements[i] for i in self.members]

    def complement_of(self, theta: Congruence) -> Congruence:
        i = self.lattice.index(theta)
        return self.lattice.elements[self.complement[i]]


def boolean_center(cl: ConLattice) -> BooleanCenter:
    """Scan for complemented congruences; requires a distributive ConLattice
    so that complements are unique."""
    hit = cl._cache.get("center")
    if hit is not None:
        return hit
    if not cl.is_distributive():
        raise NotDistributive(
            "congruence lattice is not distributive; complements would be ambiguous"
        )
    k = len(cl.elements)
    d, nb = cl.index_of_delta, cl.index_of_nabla
    members = []
    complement = {}
    for i in range(k):
        for j in range(k):
            if cl.join_table[i][j] == nb and cl.meet_table[i][j] == d:
                members.append(i)
                complement[i] = j
                break
    out = BooleanCenter(cl, members, complement)
    cl._cache["center"] = out
    return out


def _fc_relation(cl: ConLattice, i: int, j: int) -> Relation:
    """compose(theta_i, theta_j), cached on the lattice."""
    key = ("rel", i, j)
    hit = cl._cache.get(key)
    if hit is None:
        hit = compose(cl.elements[i], cl.elements[j])
        cl._cache[key] = hit
    return hit


def factor_congruences(cl: ConLattice) -> FactorAlgebra:
    """Boolean congruences that permute with their complement
    (equivalently: whose composition with the complement is already full)."""
    hit = cl._cache.get("fc")
    if hit is not None:
        return hit
    bc = boolean_center(cl)
    members = []
    complement = {}
    for i in bc.members:
        j = bc.complement[i]
        if _fc_relation(cl, i, j).is_full():
            members.append(i)
            complement[i] = j
    out = FactorAlgebra(cl, members, complement)
    cl._cache["fc"] = out
    return out


def is_factor_pair(A: FiniteAlgebra, phi: Congruence, psi: Congruence) -> bool:
    """(phi, psi) decomposes A: composition full and meet diagonal."""
    if phi.algebra != A or psi.algebra != A:
        raise ParentMismatch("congruences do not belong to the given algebra")
    from .congruences import meet as con_meet

    return compose(phi, psi).is_full() and con_meet(phi, psi).is_delta()


# -- CRT --------------------------------------------------------------------


def _omega_indices(cl: ConLattice, omega) -> list[int]:
    idxs = sorted({cl.index(t) for t in omega})
    if cl.index_of_delta not in idxs or cl.index_of_nabla not in idxs:
        raise NotASublattice("the congruence family must contain the bounds")
    sset = set(idxs)
    for i in idxs:
        for j in idxs:
            if cl.join_table[i][j] not in sset or cl.meet_table[i][j] not in sset:
                raise NotASublattice(
                    "the congruence family is not closed under join and meet"
                )
    return idxs


def crt_characterization(A: FiniteAlgebra, omega) -> bool:
    """Lattice-theoretic test: the family admits simultaneous congruence
    solving iff it is distributive and all of its pairs permute."""
    cl = all_congruences(A)
    idxs = _omega_indices(cl, omega)
    jt, mt = cl.join_table, cl.meet_table
    for a in idxs:
        for b in idxs:
            for c in idxs:
                if mt[a][jt[b][c]] != jt[mt[a][b]][mt[a][c]]:
                    return False
    for i in idxs:
        for j in idxs:
            if _fc_relation(cl, i, j) != _fc_relation(cl, j, i):
                return False
    return True


def crt_direct_check(A: FiniteAlgebra, omega, k_max: int = 2):
    """Brute-force the simultaneous-solvability condition for all tuples of
    size <= k_max: pairwise compatible targets must admit a common solution.
    Returns (ok, witness) where a witness names (thetas, targets)."""
    if k_max > CRT_K_MAX:
        raise SizeCap(f"direct CRT check capped at tuples of size {CRT_K_MAX}")
    cl = all_congruences(A)
    idxs = _omega_indices(cl, omega)
    n = A.n
    masks = {i: cl.elements[i].masks() for i in idxs}
    join_masks = {}
    for i in idxs:
        for j in idxs:
            join_masks[(i, j)] = cl.elements[cl.join_table[i][j]].masks()
    full = (1 << n) - 1
    for k in range(2, k_max + 1):
        # the condition is symmetric under permuting coordinates jointly,
        # so multisets of congruences suffice
        for thetas in combinations_with_replacement(idxs, k):
            th_masks = [masks[i] for i in thetas]
            jm = [
                [join_masks[(thetas[u], thetas[v])] for v in range(k)]
                for u in range(k)
            ]
            for targets in product(range(n), repeat=k):
                ok = True
                for u in range(k):
                    au = targets[u]
                    for v in range(u + 1, k):
                        if not jm[u][v][au] >> targets[v] & 1:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                sol = full
                for u in range(k):
                    sol &= th_masks[u][targets[u]]
                if sol == 0:
                    witness = (
                        [cl.elements[i] for i in thetas],
                        [A.labels[t] for t in targets],
                    )
                    return False, witness
    return True, None


# -- transport across products and ordinal sums -----------------------------


def product_congruence(P: FiniteAlgebra, factors, thetas) -> Congruence:
    """theta_1 x ... x theta_k on the product carrier: tuples related iff
    componentwise related.  P must use the standard mixed-radix encoding."""
    sizes = [F.n for F in factors]
    total = 1
    for s in sizes:
        total *= s
    if P.n != total:
        raise EncodingMismatch("product carrier size does not match the factors")
    for F, t in zip(factors, thetas):
        if t.algebra != F:
            raise ParentMismatch("congruence does not belong to its factor")
    radix = product_radix(sizes)
    block_of = []
    for idx in range(total):
        tup = product_decode(idx, sizes, radix)
        rep = sum(t.block_of[e] * r for t, e, r in zip(thetas, tup, radix))
        block_of.append(rep)
    return Congruence(P, canonicalize(block_of))


def product_con_iso_check(As: list[FiniteAlgebra], P: FiniteAlgebra | None = None) -> bool:
    """Verify the tuple map Con(A_1) x ... x Con(A_k) -> Con(prod A_i):
    a bounded-lattice bijection that also restricts to bijections between
    the Boolean centers and between the factor congruences."""
    from .algebra import direct_product

    if P is None:
        P = direct_product(As)
    cls = [all_congruences(A) for A in As]
    clp = all_congruences(P)
    tuples = list(product(*[range(len(c.elements)) for c in cls]))
    if len(tuples) != len(clp.elements):
        return False
    image = {}
    for tup in tuples:
        c = product_congruence(P, As, [cls[i].elements[j] for i, j in enumerate(tup)])
        image[tup] = clp.index(c)
    if len(set(image.values())) != len(clp.elements):
        return False
    # bounds
    delta_tup = tuple(c.index_of_delta for c in cls)
    nabla_tup = tuple(c.index_of_nabla for c in cls)
    if image[delta_tup] != clp.index_of_delta or image[nabla_tup] != clp.index_of_nabla:
        return False
    # join/meet preservation, componentwise vs in the product
    for t1 in tuples:
        for t2 in tuples:
            jt = tuple(cls[i].join_table[a][b] for i, (a, b) in enumerate(zip(t1, t2)))
            mt = tuple(cls[i].meet_table[a][b] for i, (a, b) in enumerate(zip(t1, t2)))
            if image[jt] != clp.join_table[image[t1]][image[t2]]:
                return False
            if image[mt] != clp.meet_table[image[t1]][image[t2]]:
                return False
    # center and factor-congruence transport
    centers = [set(boolean_center(c).members) for c in cls]
    fcs = [set(factor_congruences(c).members) for c in cls]
    center_img = {image[t] for t in tuples if all(t[i] in centers[i] for i in range(len(As)))}
    fc_img = {image[t] for t in tuples if all(t[i] in fcs[i] for i in range(len(As)))}
    if center_img != set(boolean_center(clp).members):
        return False
    if fc_img != set(factor_congruences(clp).members):
        return False
    return True


def osum_congruence(L, M, phi: Congruence, psi: Congruence, S=None) -> Congruence:
    """Glue phi (on L) and psi (on M) into a congruence of the ordinal sum:
    the class of the shared element is the union of its two classes."""
    if phi.algebra != L or psi.algebra != M:
        raise ParentMismatch("congruences do not match the summands")
    S_built, map_l, map_m = ordinal_sum_with_maps(L, M)
    if S is None:
        S = S_built
    elif S.tables != S_built.tables or S.n != S_built.n:
        raise EncodingMismatch("given sum does not match ordinal_sum(L, M)")
    parent = list(range(S.n))

    def root(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def unite(x, y):
        rx, ry = root(x), root(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for e in range(L.n):
        unite(map_l[e], map_l[phi.block_of[e]])
    for e in range(M.n):
        unite(map_m[e], map_m[psi.block_of[e]])
    return Congruence(S, canonicalize(parent), check=True)


def osum_con_iso_check(L, M) -> bool:
    """Verify Con(L+M) is exactly the glued congruences and that the gluing
    is a bounded-lattice bijection which also matches the Boolean centers.

    Deliberately silent about factor congruences: gluing factor congruences
    of the parts need not produce the factor congruences of the sum (the X
    fixture is a counterexample, surfaced by osum_fc_comparison)."""
    S, _, _ = ordinal_sum_with_maps(L, M)
    cll, clm, cls_ = all_congruences(L), all_congruences(M), all_congruences(S)
    tuples = list(product(range(len(cll.elements)), range(len(clm.elements))))
    if len(tuples) != len(cls_.elements):
        return False
    image = {}
    for i, j in tuples:
        c = osum_congruence(L, M, cll.elements[i], clm.elements[j], S=S)
        image[(i, j)] = cls_.index(c)
    if len(set(image.values())) != len(cls_.elements):
        return False
    if image[(cll.index_of_delta, clm.index_of_delta)] != cls_.index_of_delta:
        return False
    if image[(cll.index_of_nabla, clm.index_of_nabla)] != cls_.index_of_nabla:
        return False
    for t1 in tuples:
        for t2 in tuples:
            jt = (cll.join_table[t1[0]][t2[0]], clm.join_table[t1[1]][t2[1]])
            mt = (cll.meet_table[t1[0]][t2[0]], clm.meet_table[t1[1]][t2[1]])
            if image[jt] != cls_.join_table[image[t1]][image[t2]]:
                return False
            if image[mt] != cls_.meet_table[image[t1]][image[t2]]:
                return False
    bl = set(boolean_center(cll).members)
    bm = set(boolean_center(clm).members)
    bs = {image[(i, j)] for i, j in tuples if i in bl and j in bm}
    return bs == set(boolean_center(cls_).members)


def osum_fc_comparison(L, M) -> dict:
    """Compare {phi glued with psi : both factor congruences} against the
    factor congruences of the sum.  The two sets can differ — that is the
    point of this function, so it reports rather than asserts."""
    S, _, _ = ordinal_sum_with_maps(L, M)
    cls_ = all_congruences(S)
    fl = factor_congruences(all_congruences(L)).congruences()
    fm = factor_congruences(all_congruences(M)).congruences()
    glued = {
        cls_.index(osum_congruence(L, M, phi, psi, S=S))
        for phi in fl
        for psi in fm
    }
    actual = set(factor_congruences(cls_).members)
    return {
        "sum": S,
        "glued_count": len(glued),
        "fc_count": len(actual),
        "glued_equals_fc": glued == actual,
        "glued": sorted(cls_.elements[i].block_string() for i in glued),
        "fc": sorted(cls_.elements[i].block_string() for i in actual),
    }


# -- the element-to-congruence isomorphism for bounded distributive lattices


def bdl_fc_isomorphism(L: FiniteAlgebra):
    """For a bounded distributive lattice: map each complemented element a
    to the principal congruence collapsing a with bottom, and verify this is
    a Boolean isomorphism onto the factor congruences.

    Returns (mapping element-index -> Congruence, verified flag)."""
    L.require_lattice()
    if not L.is_distributive_lattice():
        raise NotDistributive("the element-level map needs a distributive lattice")
    bot, top = L.bottom(), L.top()
    join_t, meet_t = L.tables["join"], L.tables["meet"]
    comp = {}
    for a in range(L.n):
        for b in range(L.n):
            if join_t[a][b] == top and meet_t[a][b] == bot:
                comp[a] = b
                break
    mapping = {a: principal_congruence(L, a, bot) for a in comp}
    cl = all_congruences(L)
    fc = factor_congruences(cl)
    ok = {cl.index(c) for c in mapping.values()} == set(fc.members)
    ok = ok and len(set(mapping.values())) == len(mapping)
    for a in comp:
        for b in comp:
            if not ok:
                break
            ja, ma = join_t[a][b], meet_t[a][b]
            ok = (
                cl.join_table[cl.index(mapping[a])][cl.index(mapping[b])]
                == cl.index(mapping[ja])
                and cl.meet_table[cl.index(mapping[a])][cl.index(mapping[b])]
                == cl.index(mapping[ma])
            )
    if ok:
        for a in comp:
            if cl.index(mapping[comp[a]]) != fc.complement[cl.index(mapping[a])]:
                ok = False
                break
        ok = ok and mapping[bot].is_delta() and mapping[top].is_nabla()
    return mapping, ok


# -- factorization through factor congruences -------------------------------


def factorize(A: FiniteAlgebra, alphas: list[Congruence]):
    """Split A as a direct product of the quotients A/alpha_i.

    Every alpha_i must be a factor congruence, their intersection the
    diagonal, and each pair must join to the full congruence; each condition
    is verified and the first violation is reported."""
    from .congruences import join as con_join, meet as con_meet
    from .lifting import quotient

    cl = all_congruences(A)
    fc = factor_congruences(cl)
    fc_set = set(fc.members)
    for a in alphas:
        if a.algebra != A:
            raise ParentMismatch("congruence does not belong to the algebra")
        if cl.index(a) not in fc_set:
            raise PreconditionFailed(
                f"{a.block_string()} is not a factor congruence"
            )
    acc = alphas[0]
    for a in alphas[1:]:
        acc = con_meet(acc, a)
    if not acc.is_delta():
        raise PreconditionFailed(
            "the congruences do not intersect to the diagonal"
        )
    for i in range(len(alphas)):
        for j in range(i + 1, len(alphas)):
            if not con_join(alphas[i], alphas[j]).is_nabla():
                raise PreconditionFailed(
                    f"{alphas[i].block_string()} and {alphas[j].block_string()} "
                    "do not join to the full congruence"
                )
    quotients = [quotient(A, a) for a in alphas]
    # the canonical map a |-> (a/alpha_1, ..., a/alpha_n) must be a bijective
    # morphism onto the product of the quotients
    total = 1
    for q in quotients:
        total *= q.quotient.n
    images = {tuple(q.projection[e] for q in quotients) for e in range(A.n)}
    ok = total == A.n and len(images) == A.n
    if ok:
        for fname, arity in A.signature.operations:
            if arity != 2:
                continue
            for a in range(A.n):
                for b in range(A.n):
                    r = A.op(fname, a, b)
                    for q in quotients:
                        qa, qb = q.projection[a], q.projection[b]
                        ra = q.quotient.op(
                            fname, q.index_in_quotient[qa], q.index_in_quotient[qb]
                        )
                        if q.index_in_quotient[q.projection[r]] != ra:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                break
    return quotients, ok
