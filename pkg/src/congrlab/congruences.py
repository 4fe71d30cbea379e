"""Congruence generation, enumeration and classification.

A congruence is stored as a canonical partition (minimum-representative
array) tied to its parent algebra.  Generation uses a union-find with
queue-driven compatibility propagation: whenever two classes merge via the
pair (x, y), every operation is applied to x and y against all argument
completions and the results are merged too, until no queue entries remain.

Composition of relations follows the convention

    compose(phi, psi) = { (a, b) | exists x with (a, x) in psi and (x, b) in phi }

i.e. ``compose(phi, psi)`` applies psi first.  The two textbook conventions
differ exactly on non-permuting pairs, so this is load-bearing: see the L3
example in the tests, where (0, 1) lies in one order of composition but not
the other.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from collections import deque
from functools import total_ordering

from .algebra import (
    CON_CAP,
    FiniteAlgebra,
    block_masks,
    canonicalize,
    delta_partition,
    meet_partitions,
    nabla_partition,
    partition_blocks,
    partition_refines,
)
from .errors import (
    InvalidCongruence,
    ParentMismatch,
    SizeCap,
    TrivialAlgebra,
)

BRUTE_FORCE_CAP = 9


@total_ordering
class Congruence:
    """A canonical partition of an algebra's carrier, verified compatible."""

    __slots__ = ("algebra", "block_of", "_masks")

    def __init__(self, algebra: FiniteAlgebra, block_of, check=False):
        self.algebra = algebra
        self.block_of = tuple(block_of)
        self._masks = None
        if len(self.block_of) != algebra.n:
            raise InvalidCongruence("partition length does not match the carrier")
        for e, r in enumerate(self.block_of):
            if self.block_of[r] != r or r > e:
                raise InvalidCongruence("partition is not in canonical form")
        if check:
            bad = compatibility_violation(algebra, self.block_of)
            if bad is not None:
                f, a, b = bad
                raise InvalidCongruence(
                    f"not a congruence: {f}({algebra.labels[a]}) and "
                    f"{f}({algebra.labels[b]}) land in different blocks "
                    f"although {algebra.labels[a]} ~ {algebra.labels[b]}"
                )

    # equality/order ignore the parent's identity beyond structure: congruences
    # of different algebras never meet in practice, and sorting must be cheap.
    def __eq__(self, other):
        return isinstance(other, Congruence) and self.block_of == other.block_of

    def __hash__(self):
        return hash(self.block_of)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (-self.num_blocks, self.block_of)

    def __repr__(self):
        return f"Congruence({self.block_string()})"

    @property
    def num_blocks(self) -> int:
        return len(set(self.block_of))

    def contains(self, a: int, b: int) -> bool:
        return self.block_of[a] == self.block_of[b]

    def blocks(self) -> list[list[int]]:
        return partition_blocks(self.block_of)

    def masks(self) -> tuple[int, ...]:
        if self._masks is None:
            self._masks = block_masks(self.block_of)
        return self._masks

    def refines(self, other: "Congruence") -> bool:
        return partition_refines(self.block_of, other.block_of)

    def is_delta(self) -> bool:
        return self.num_blocks == self.algebra.n

    def is_nabla(self) -> bool:
        return self.num_blocks == 1

    def block_string(self) -> str:
        labels = self.algebra.labels
        parts = []
        for blk in self.blocks():
            parts.append(",".join(labels[e] for e in blk))
        return "|".join(parts)


def delta(A: FiniteAlgebra) -> Congruence:
    return Congruence(A, delta_partition(A.n))


def nabla(A: FiniteAlgebra) -> Congruence:
    return Congruence(A, nabla_partition(A.n))


def compatibility_violation(A: FiniteAlgebra, block_of):
    """First instance (opname, result_a, result_b) breaking compatibility,
    or None.  Checked one argument position at a time, which suffices by
    composing substitutions."""
    n = A.n
    related = [
        (a, b) for a in range(n) for b in range(n) if a != b and block_of[a] == block_of[b]
    ]
    for fname, arity in A.signature.operations:
        if arity == 0:
            continue
        for a, b in related:
            if arity == 1:
                t = A.tables[fname]
                if block_of[t[a]] != block_of[t[b]]:
                    return (fname, t[a], t[b])
            elif arity == 2:
                t = A.tables[fname]
                ta, tb = t[a], t[b]
                for z in range(n):
                    if block_of[ta[z]] != block_of[tb[z]]:
                        return (fname, ta[z], tb[z])
                    if block_of[t[z][a]] != block_of[t[z][b]]:
                        return (fname, t[z][a], t[z][b])
            else:
                for rest in itertools.product(range(n), repeat=arity - 1):
                    for i in range(arity):
                        ra = A.op(fname, *rest[:i], a, *rest[i:])
                        rb = A.op(fname, *rest[:i], b, *rest[i:])
                        if block_of[ra] != block_of[rb]:
                            return (fname, ra, rb)
    return None


def parse_congruence(A: FiniteAlgebra, text: str) -> Congruence:
    """Parse the CLI block syntax, e.g. "0,m|1", against A's labels."""
    seen = [-1] * A.n
    for blk in text.split("|"):
        members = [m.strip() for m in blk.split(",") if m.strip()]
        if not members:
            raise InvalidCongruence("empty block in congruence string")
        idxs = [A.index_of(m) for m in members]
        rep = min(idxs)
        for e in idxs:
            if seen[e] != -1:
                raise InvalidCongruence(
                    f"element {A.labels[e]} appears in two blocks"
                )
            seen[e] = rep
    missing = [A.labels[e] for e in range(A.n) if seen[e] == -1]
    if missing:
        raise InvalidCongruence(f"elements not covered: {', '.join(missing)}")
    return Congruence(A, canonicalize(seen), check=True)


# -- Mal'cev closure --------------------------------------------------------


def _close(A: FiniteAlgebra, seed_pairs) -> tuple[int, ...]:
    n = A.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = deque()

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            if rx > ry:
                rx, ry = ry, rx
            parent[ry] = rx
            queue.append((rx, ry))

    for a, b in seed_pairs:
        union(a, b)
    ops = [(f, ar) for f, ar in A.signature.operations if ar >= 1]
    while queue:
        x, y = queue.popleft()
        for fname, arity in ops:
            t = A.tables[fname]
            if arity == 1:
                union(t[x], t[y])
            elif arity == 2:
                tx, ty = t[x], t[y]
                for z in range(n):
                    union(tx[z], ty[z])
                    union(t[z][x], t[z][y])
            else:
                for rest in itertools.product(range(n), repeat=arity - 1):
                    for i in range(arity):
                        union(
                            A.op(fname, *rest[:i], x, *rest[i:]),
                            A.op(fname, *rest[:i], y, *rest[i:]),
                        )
    return canonicalize(parent)


def principal_congruence(A: FiniteAlgebra, a: int, b: int) -> Congruence:
    """Smallest congruence identifying a and b (Mal'cev closure)."""
    return Congruence(A, _close(A, [(a, b)]))


def cg_generated(A: FiniteAlgebra, pairs) -> Congruence:
    """Smallest congruence containing all the given pairs."""
    return Congruence(A, _close(A, list(pairs)))


def _require_same_parent(theta: Congruence, phi: Congruence):
    if theta.algebra is not phi.algebra and theta.algebra != phi.algebra:
        raise ParentMismatch("congruences belong to different algebras")


def join(theta: Congruence, phi: Congruence) -> Congruence:
    _require_same_parent(theta, phi)
    A = theta.algebra
    seeds = [(e, theta.block_of[e]) for e in range(A.n)]
    seeds += [(e, phi.block_of[e]) for e in range(A.n)]
    return Congruence(A, _close(A, seeds))


def meet(theta: Congruence, phi: Congruence) -> Congruence:
    _require_same_parent(theta, phi)
    return Congruence(theta.algebra, meet_partitions(theta.block_of, phi.block_of))


# -- relations --------------------------------------------------------------


class Relation:
    """Binary relation on a carrier, stored as per-row bitmasks.

    rows[a] has bit b set iff (a, b) is in the relation.
    """

    __slots__ = ("n", "rows")

    def __init__(self, n, rows):
        self.n = n
        self.rows = tuple(rows)

    def __eq__(self, other):
        return isinstance(other, Relation) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __contains__(self, pair):
        a, b = pair
        return bool(self.rows[a] >> b & 1)

    def contains_relation(self, other: "Relation") -> bool:
        return all(r | s == r for r, s in zip(self.rows, other.rows))

    def transpose(self) -> "Relation":
        rows = [0] * self.n
        for a, r in enumerate(self.rows):
            while r:
                b = (r & -r).bit_length() - 1
                rows[b] |= 1 << a
                r &= r - 1
        return Relation(self.n, rows)

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def is_full(self) -> bool:
        full = (1 << self.n) - 1
        return all(r == full for r in self.rows)

    def pairs(self):
        for a, r in enumerate(self.rows):
            while r:
                b = (r & -r).bit_length() - 1
                yield (a, b)
                r &= r - 1


def relation_of(theta: Congruence) -> Relation:
    return Relation(theta.algebra.n, theta.masks())


def compose(phi: Congruence, psi: Congruence) -> Relation:
    """The relation phi o psi: apply psi first, then phi (see module doc)."""
    _require_same_parent(phi, psi)
    n = phi.algebra.n
    prow = phi.masks()
    srow = psi.masks()
    rows = []
    for a in range(n):
        acc = 0
        r = srow[a]
        while r:
            x = (r & -r).bit_length() - 1
            acc |= prow[x]
            r &= r - 1
        rows.append(acc)
    return Relation(n, rows)


def permutes(theta: Congruence, phi: Congruence) -> bool:
    return compose(theta, phi) == compose(phi, theta)


# -- enumeration ------------------------------------------------------------


class ConLattice:
    """The congruence lattice of a finite algebra.

    elements are sorted canonically: number of blocks descending, then
    lexicographically by partition array — so Δ is first and ∇ last.
    """

    __slots__ = (
        "algebra",
        "elements",
        "leq",
        "join_table",
        "meet_table",
        "index_of_delta",
        "index_of_nabla",
        "_index",
        "_up_masks",
        "_cache",
    )

    def __init__(self, algebra: FiniteAlgebra, partitions):
        self.algebra = algebra
        self.elements = [Congruence(algebra, p) for p in sorted(partitions, key=lambda p: (-len(set(p)), p))]
        self._index = {c.block_of: i for i, c in enumerate(self.elements)}
        self._cache = {}
        k = len(self.elements)
        self.leq = [
            [partition_refines(self.elements[i].block_of, self.elements[j].block_of) for j in range(k)]
            for i in range(k)
        ]
        self._up_masks = [
            sum(1 << j for j in range(k) if self.leq[i][j]) for i in range(k)
        ]
        self.index_of_delta = self._index[delta_partition(algebra.n)]
        self.index_of_nabla = self._index[nabla_partition(algebra.n)]
        self.meet_table = [
            [
                self._index[meet_partitions(self.elements[i].block_of, self.elements[j].block_of)]
                for j in range(k)
            ]
            for i in range(k)
        ]
        self.join_table = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(i, k):
                ubs = self._up_masks[i] & self._up_masks[j]
                r = ubs
                while r:
                    c = (r & -r).bit_length() - 1
                    if self._up_masks[c] & ubs == ubs:
                        break
                    r &= r - 1
                self.join_table[i][j] = self.join_table[j][i] = c

    def __len__(self):
        return len(self.elements)

    def index(self, theta: Congruence) -> int:
        try:
            return self._index[theta.block_of]
        except KeyError:
            raise InvalidCongruence(
                f"{theta.block_string()} is not a congruence of this algebra"
            ) from None

    def join(self, i: int, j: int) -> int:
        return self.join_table[i][j]

    def meet(self, i: int, j: int) -> int:
        return self.meet_table[i][j]

    def up_set(self, i: int) -> list[int]:
        return [j for j in range(len(self.elements)) if self.leq[i][j]]

    def is_distributive(self) -> bool:
        if "distributive" not in self._cache:
            k = len(self.elements)
            jt, mt = self.join_table, self.meet_table
            ok = True
            for a in range(k):
                for b in range(k):
                    for c in range(k):
                        if mt[a][jt[b][c]] != jt[mt[a][b]][mt[a][c]]:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            self._cache["distributive"] = ok
        return self._cache["distributive"]

    def is_permutable(self) -> bool:
        if "permutable" not in self._cache:
            els = self.elements
            self._cache["permutable"] = all(
                permutes(els[i], els[j])
                for i in range(len(els))
                for j in range(i + 1, len(els))
            )
        return self._cache["permutable"]


# in-memory memoization: congruence data depends only on the tables, so a
# label-independent structure key lets quotients of equal shape share work
_PARTITION_CACHE: dict = {}


def _enumerate_partitions(A: FiniteAlgebra) -> tuple:
    key = A.structure_key()
    hit = _PARTITION_CACHE.get(key)
    if hit is not None:
        return hit
    disk_key = None
    cache_dir = os.environ.get("CONGRLAB_CACHE")
    if cache_dir:
        digest = hashlib.sha256(repr(key).encode()).hexdigest()
        disk_key = os.path.join(cache_dir, f"con-{digest}.json")
        if os.path.exists(disk_key):
            with open(disk_key) as fh:
                parts = tuple(tuple(p) for p in json.load(fh))
            _PARTITION_CACHE[key] = parts
            return parts

    n = A.n
    if A.is_lattice:
        # for lattices, principal congruences over cover pairs generate Con:
        # Cg(a, b) with a < b is the join of the Cg's along any maximal chain
        # from a to b, and Cg(a, b) = Cg(a^b, avb) in general.  The oracle
        # cross-check in the tests keeps this honest.
        gen_pairs = A.covers()
    else:
        gen_pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    found = {delta_partition(n): None}
    worklist = []
    for a, b in gen_pairs:
        p = _close(A, [(a, b)])
        if p not in found:
            found[p] = None
            worklist.append(p)
    stable = list(found)
    while worklist:
        p = worklist.pop()
        for q in stable:
            seeds = [(e, p[e]) for e in range(n)] + [(e, q[e]) for e in range(n)]
            r = _close(A, seeds)
            if r not in found:
                found[r] = None
                worklist.append(r)
                if len(found) > CON_CAP:
                    raise SizeCap(f"congruence count exceeds cap {CON_CAP}")
        stable.append(p)
    parts = tuple(sorted(found, key=lambda p: (-len(set(p)), p)))
    _PARTITION_CACHE[key] = parts
    if disk_key:
        os.makedirs(cache_dir, exist_ok=True)
        with open(disk_key, "w") as fh:
            json.dump([list(p) for p in parts], fh)
    return parts


_CONLATTICE_CACHE: dict = {}


def all_congruences(A: FiniteAlgebra) -> ConLattice:
    """Enumerate Con(A) by closing the principal congruences under join."""
    key = (id(A), A.structure_key(), A.labels)
    hit = _CONLATTICE_CACHE.get(key)
    if hit is not None:
        return hit
    cl = ConLattice(A, _enumerate_partitions(A))
    _CONLATTICE_CACHE[key] = cl
    return cl


def brute_force_congruences(A: FiniteAlgebra) -> list[Congruence]:
    """Independent oracle: filter every set partition of the carrier."""
    n = A.n
    if n > BRUTE_FORCE_CAP:
        raise SizeCap(f"brute force capped at carrier size {BRUTE_FORCE_CAP}")
    out = []
    for block_of in _all_partitions(n):
        if compatibility_violation(A, block_of) is None:
            out.append(Congruence(A, block_of))
    out.sort()
    return out


def _all_partitions(n):
    """All set partitions of 0..n-1 in canonical (min-representative) form,
    via restricted-growth strings."""
    rgs = [0] * n

    def gen(i, max_used):
        if i == n:
            reps = {}
            out = [0] * n
            for e in range(n):
                out[e] = reps.setdefault(rgs[e], e)
            yield tuple(out)
            return
        for v in range(max_used + 2):
            rgs[i] = v
            yield from gen(i + 1, max(max_used, v))

    yield from gen(1, 0) if n > 1 else iter([(0,) * n])


# -- classification ---------------------------------------------------------


def is_congruence_distributive(A: FiniteAlgebra) -> bool:
    return all_congruences(A).is_distributive()


def is_congruence_permutable(A: FiniteAlgebra) -> bool:
    return all_congruences(A).is_permutable()


def is_arithmetical(A: FiniteAlgebra) -> bool:
    cl = all_congruences(A)
    return cl.is_distributive() and cl.is_permutable()


def maximal_congruences(A: FiniteAlgebra) -> list[Congruence]:
    """Maximal elements of Con(A) minus ∇ (the coatoms' order filter floor)."""
    cl = all_congruences(A)
    if len(cl) == 1:
        raise TrivialAlgebra("the one-element algebra has no maximal congruence")
    k = len(cl.elements)
    nb = cl.index_of_nabla
    out = []
    for i in range(k):
        if i == nb:
            continue
        if all(j == nb or j == i or not cl.leq[i][j] for j in range(k)):
            out.append(cl.elements[i])
    return out


def prime_congruences(A: FiniteAlgebra) -> list[Congruence]:
    """θ ≠ ∇ such that α∩β ⊆ θ forces α ⊆ θ or β ⊆ θ."""
    cl = all_congruences(A)
    k = len(cl.elements)
    nb = cl.index_of_nabla
    out = []
    for t in range(k):
        if t == nb:
            continue
        good = True
        for a in range(k):
            for b in range(k):
                if cl.leq[cl.meet_table[a][b]][t] and not (cl.leq[a][t] or cl.leq[b][t]):
                    good = False
                    break
            if not good:
                break
        if good:
            out.append(cl.elements[t])
    return out


def radical(A: FiniteAlgebra) -> Congruence:
    """Intersection of the maximal congruences."""
    maxes = maximal_congruences(A)
    out = maxes[0]
    for m in maxes[1:]:
        out = meet(out, m)
    return out


def is_local(A: FiniteAlgebra) -> bool:
    """Exactly one maximal congruence."""
    return len(maximal_congruences(A)) == 1


def is_semilocal(A: FiniteAlgebra) -> bool:
    """Finitely many maximal congruences — always true at finite scale, but
    exposed so property names line up with the reports."""
    return len(maximal_congruences(A)) >= 1
