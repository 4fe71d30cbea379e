"""Finite algebras over finite signatures, and lattice constructions.

Elements are dense integer indices 0..n-1 with separate labels; all
partition/set arithmetic is done on indices so that structural equality is
plain tuple equality.  Algebras are immutable after construction and every
operation here is a pure function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    KindError,
    NotALattice,
    NotClosed,
    ResiduationViolation,
    SignatureMismatch,
    SizeCap,
    TableError,
)

# Size caps: everything downstream is exponential-ish, so fail loudly.
CARRIER_CAP = 4096
CON_CAP = 20000
# Full O(n^3) associativity checking is only run up to this carrier size;
# larger tables are always synthesized from an order that was already
# verified pairwise, or assembled componentwise from verified factors.
FULL_AXIOM_CAP = 128

KINDS = ("generic", "lattice", "bounded-lattice", "residuated")


@dataclass(frozen=True)
class Signature:
    """Operation descriptors (name, arity) plus a kind tag."""

    operations: tuple[tuple[str, int], ...]
    kind: str = "generic"

    def __post_init__(self):
        names = [name for name, _ in self.operations]
        if len(set(names)) != len(names):
            raise TableError(f"duplicate operation names in signature: {names}")
        if self.kind not in KINDS:
            raise TableError(f"unknown kind {self.kind!r}")
        required: list[tuple[str, int]] = []
        if self.kind in ("lattice", "bounded-lattice", "residuated"):
            required += [("join", 2), ("meet", 2)]
        if self.kind in ("bounded-lattice", "residuated"):
            required += [("bot", 0), ("top", 0)]
        if self.kind == "residuated":
            required += [("times", 2), ("implies", 2)]
        ops = dict(self.operations)
        for name, arity in required:
            if ops.get(name) != arity:
                raise TableError(
                    f"kind {self.kind!r} requires operation {name!r} of arity {arity}"
                )

    def arity(self, name: str) -> int:
        return dict(self.operations)[name]

    @property
    def is_lattice(self) -> bool:
        return self.kind in ("lattice", "bounded-lattice", "residuated")


def lattice_signature(kind: str = "lattice") -> Signature:
    ops: list[tuple[str, int]] = [("join", 2), ("meet", 2)]
    if kind in ("bounded-lattice", "residuated"):
        ops += [("bot", 0), ("top", 0)]
    if kind == "residuated":
        ops += [("times", 2), ("implies", 2)]
    return Signature(tuple(ops), kind)


class FiniteAlgebra:
    """A finite algebra: carrier 0..n-1, labels, and total operation tables.

    Tables are nested tuples indexed by argument; a nullary operation's table
    is the element index itself.  Instances are immutable and hashable; two
    algebras are equal iff they agree table-for-table and label-for-label.
    """

    __slots__ = ("n", "labels", "signature", "tables", "name", "_hash")

    def __init__(self, n, labels, signature, tables, name=None, validate=True):
        if n < 1:
            raise TableError("carrier must be non-empty")
        if n > CARRIER_CAP:
            raise SizeCap(f"carrier size {n} exceeds cap {CARRIER_CAP}")
        labels = tuple(str(x) for x in labels)
        if len(labels) != n or len(set(labels)) != n:
            raise TableError("need exactly n distinct element labels")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "tables", _freeze_tables(tables))
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", None)
        if validate:
            self._validate()

    def __setattr__(self, *a):
        raise AttributeError("FiniteAlgebra is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (
            self.n == other.n
            and self.labels == other.labels
            and self.signature == other.signature
            and self.tables == other.tables
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.n, self.labels, self.signature, tuple(sorted(self.tables.items()))))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        tag = self.name or self.signature.kind
        return f"<FiniteAlgebra {tag}: {self.n} elements>"

    # -- basic access -------------------------------------------------------

    def op(self, name: str, *args: int) -> int:
        t = self.tables[name]
        for a in args:
            t = t[a]
        return t

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise TableError(f"no element labelled {label!r}") from None

    def structure_key(self):
        """Label-independent key: congruence data depends on tables only."""
        return (self.n, self.signature, tuple(sorted(self.tables.items())))

    # -- lattice view -------------------------------------------------------

    @property
    def is_lattice(self) -> bool:
        return self.signature.is_lattice

    def require_lattice(self):
        if not self.is_lattice:
            raise KindError(f"operation requires a lattice, got kind {self.signature.kind!r}")

    def leq(self, a: int, b: int) -> bool:
        return self.op("meet", a, b) == a

    def bottom(self) -> int:
        self.require_lattice()
        if "bot" in self.tables:
            return self.tables["bot"]
        meet = self.tables["meet"]
        e = 0
        for x in range(1, self.n):
            e = meet[e][x]
        return e

    def top(self) -> int:
        self.require_lattice()
        if "top" in self.tables:
            return self.tables["top"]
        join = self.tables["join"]
        e = 0
        for x in range(1, self.n):
            e = join[e][x]
        return e

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs (a, b) with a covered by b, in index order."""
        self.require_lattice()
        n = self.n
        below = [[a for a in range(n) if a != b and self.leq(a, b)] for b in range(n)]
        out = []
        for b in range(n):
            for a in below[b]:
                if not any(self.leq(a, c) and a != c for c in below[b] if c != a and self.leq(c, b)):
                    out.append((a, b))
        return out

    def is_distributive_lattice(self) -> bool:
        """Element-level distributivity, checked by exhaustive triple scan."""
        self.require_lattice()
        join, meet = self.tables["join"], self.tables["meet"]
        rng = range(self.n)
        for a in rng:
            ja, ma = join[a], meet[a]
            for b in rng:
                mab = ma[b]
                for c in rng:
                    if ma[join[b][c]] != join[mab][ma[c]]:
                        return False
        return True

    # -- validation ---------------------------------------------------------

    def _validate(self):
        n = self.n
        ops = dict(self.signature.operations)
        if set(ops) != set(self.tables):
            raise TableError(
                f"tables {sorted(self.tables)} do not match signature {sorted(ops)}"
            )
        for fname, arity in self.signature.operations:
            _check_table(self.tables[fname], arity, n, fname)
        if self.signature.is_lattice:
            self._validate_lattice_axioms()
        if self.signature.kind == "residuated":
            self._validate_residuation()

    def _validate_lattice_axioms(self):
        n = self.n
        join, meet = self.tables["join"], self.tables["meet"]
        for t, oname in ((join, "join"), (meet, "meet")):
            for a in range(n):
                if t[a][a] != a:
                    raise TableError(f"{oname} not idempotent at {self.labels[a]}")
                for b in range(n):
                    if t[a][b] != t[b][a]:
                        raise TableError(
                            f"{oname} not commutative at ({self.labels[a]}, {self.labels[b]})"
                        )
        for a in range(n):
            for b in range(n):
                if meet[a][join[a][b]] != a or join[a][meet[a][b]] != a:
                    raise TableError(
                        f"absorption fails at ({self.labels[a]}, {self.labels[b]})"
                    )
        if n <= FULL_AXIOM_CAP:
            rng = range(n)
            for t, oname in ((join, "join"), (meet, "meet")):
                for a in rng:
                    for b in rng:
                        tab = t[a][b]
                        for c in rng:
                            if t[tab][c] != t[a][t[b][c]]:
                                raise TableError(
                                    f"{oname} not associative at "
                                    f"({self.labels[a]}, {self.labels[b]}, {self.labels[c]})"
                                )
        if "bot" in self.tables:
            b = self.tables["bot"]
            if any(meet[b][x] != b for x in range(n)):
                raise TableError("declared bot is not the least element")
        if "top" in self.tables:
            t = self.tables["top"]
            if any(join[t][x] != t for x in range(n)):
                raise TableError("declared top is not the greatest element")

    def _validate_residuation(self):
        n = self.n
        times, implies = self.tables["times"], self.tables["implies"]
        top = self.tables["top"]
        for a in range(n):
            if times[a][top] != a:
                raise TableError(f"top is not a unit for times at {self.labels[a]}")
            for b in range(n):
                if times[a][b] != times[b][a]:
                    raise TableError(
                        f"times not commutative at ({self.labels[a]}, {self.labels[b]})"
                    )
                for c in range(n):
                    if times[times[a][b]][c] != times[a][times[b][c]]:
                        raise TableError(
                            f"times not associative at "
                            f"({self.labels[a]}, {self.labels[b]}, {self.labels[c]})"
                        )
                    if (self.leq(times[a][b], c)) != (self.leq(a, implies[b][c])):
                        raise ResiduationViolation(
                            self.labels[a], self.labels[b], self.labels[c]
                        )


def _freeze_tables(tables):
    def freeze(t):
        if isinstance(t, int):
            return t
        return tuple(freeze(x) for x in t)

    return {name: freeze(t) for name, t in tables.items()}


def _check_table(table, arity, n, fname):
    if arity == 0:
        if not isinstance(table, int) or not 0 <= table < n:
            raise TableError(f"constant {fname} out of range")
        return
    if not isinstance(table, tuple) or len(table) != n:
        raise TableError(f"table for {fname} is not total")
    for row in table:
        _check_table(row, arity - 1, n, fname)


# -- order-based construction ----------------------------------------------


def lattice_from_order(leq, labels, kind="lattice", name=None, extra_tables=None):
    """Build a lattice from a reflexive partial-order matrix.

    Every pair must have a unique least upper bound and greatest lower bound;
    otherwise NotALattice names an offending pair.  ``leq[a][b]`` is truthy
    iff a <= b.
    """
    n = len(leq)
    labels = tuple(str(x) for x in labels)
    join = [[0] * n for _ in range(n)]
    meet = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            ubs = [c for c in range(n) if leq[a][c] and leq[b][c]]
            lub = [c for c in ubs if all(leq[c][d] for d in ubs)]
            if len(lub) != 1:
                raise NotALattice(labels[a], labels[b], "least upper bound")
            lbs = [c for c in range(n) if leq[c][a] and leq[c][b]]
            glb = [c for c in lbs if all(leq[d][c] for d in lbs)]
            if len(glb) != 1:
                raise NotALattice(labels[a], labels[b], "greatest lower bound")
            join[a][b] = join[b][a] = lub[0]
            meet[a][b] = meet[b][a] = glb[0]
    tables = {"join": join, "meet": meet}
    if kind in ("bounded-lattice", "residuated"):
        bot = next(e for e in range(n) if all(leq[e][x] for x in range(n)))
        top = next(e for e in range(n) if all(leq[x][e] for x in range(n)))
        tables["bot"] = bot
        tables["top"] = top
    if extra_tables:
        tables.update(extra_tables)
    return FiniteAlgebra(n, labels, lattice_signature(kind), tables, name=name)


def order_matrix(algebra: FiniteAlgebra) -> list[list[bool]]:
    algebra.require_lattice()
    n = algebra.n
    meet = algebra.tables["meet"]
    return [[meet[a][b] == a for b in range(n)] for a in range(n)]


# -- AlgebraSpec ------------------------------------------------------------


def build_from_spec(spec: dict) -> FiniteAlgebra:
    """Build a FiniteAlgebra from an on-disk spec (parsed JSON).

    Two shapes are accepted: a cover relation ("cover": [[lo, hi], ...]) from
    which join/meet are synthesized, or explicit "operations" tables (nested
    lists of labels) with optional "constants".
    """
    if not isinstance(spec, dict):
        raise TableError("algebra spec must be a JSON object")
    kind = spec.get("kind", "algebra")
    if kind == "algebra":
        kind = "generic"
    if kind not in KINDS:
        raise TableError(f"unknown kind {kind!r}")
    labels = [str(x) for x in spec.get("elements", [])]
    if not labels:
        raise TableError("spec has no elements")
    if len(set(labels)) != len(labels):
        raise TableError("element labels are not distinct")
    n = len(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    name = spec.get("name")

    if "cover" in spec:
        leq = _close_cover(spec["cover"], labels, index)
        extra = {}
        if kind == "residuated":
            for opname in ("times", "implies"):
                if opname not in spec.get("operations", {}):
                    raise TableError(f"residuated spec requires a {opname!r} table")
                extra[opname] = _table_from_labels(
                    spec["operations"][opname], 2, index, opname
                )
        return lattice_from_order(leq, labels, kind=kind, name=name, extra_tables=extra)

    if "operations" not in spec:
        if n == 1:
            return FiniteAlgebra(1, labels, Signature((), "generic"), {}, name=name)
        raise TableError("spec needs either a cover relation or operation tables")

    tables = {}
    sig_ops = []
    for opname, raw in spec["operations"].items():
        arity = _table_arity(raw)
        tables[opname] = _table_from_labels(raw, arity, index, opname)
        sig_ops.append((opname, arity))
    for cname, lab in spec.get("constants", {}).items():
        if lab not in index:
            raise TableError(f"constant {cname} refers to unknown label {lab!r}")
        tables[cname] = index[lab]
        sig_ops.append((cname, 0))
    order = {"join": 0, "meet": 1, "bot": 2, "top": 3, "times": 4, "implies": 5}
    sig_ops.sort(key=lambda p: (order.get(p[0], 99), p[0]))
    return FiniteAlgebra(n, labels, Signature(tuple(sig_ops), kind), tables, name=name)


def _close_cover(cover, labels, index):
    n = len(labels)
    adj = [set() for _ in range(n)]
    for pair in cover:
        if len(pair) != 2:
            raise TableError(f"bad cover pair {pair!r}")
        lo, hi = str(pair[0]), str(pair[1])
        if lo not in index or hi not in index:
            raise TableError(f"cover pair ({lo}, {hi}) uses unknown labels")
        adj[index[lo]].add(index[hi])
    # reflexive-transitive closure; a cycle makes some element reach itself
    leq = [[a == b for b in range(n)] for a in range(n)]
    for a in range(n):
        stack = list(adj[a])
        while stack:
            b = stack.pop()
            if b == a:
                raise TableError(f"cover relation has a cycle through {labels[a]}")
            if not leq[a][b]:
                leq[a][b] = True
                stack.extend(adj[b])
    for a in range(n):
        for b in range(n):
            if a != b and leq[a][b] and leq[b][a]:
                raise TableError(
                    f"cover relation has a cycle through {labels[a]} and {labels[b]}"
                )
    return leq


def _table_arity(raw):
    arity = 0
    t = raw
    while isinstance(t, list):
        arity += 1
        t = t[0]
    return arity


def _table_from_labels(raw, arity, index, fname):
    if arity == 0:
        if raw not in index:
            raise TableError(f"table for {fname} has unknown label {raw!r}")
        return index[raw]
    if not isinstance(raw, list) or len(raw) != len(index):
        raise TableError(f"table for {fname} is not total")
    return tuple(_table_from_labels(row, arity - 1, index, fname) for row in raw)


def emit_spec(algebra: FiniteAlgebra) -> dict:
    """Inverse of build_from_spec, as explicit operation tables."""
    labels = algebra.labels

    def unfreeze(t, arity):
        if arity == 0:
            return labels[t]
        return [unfreeze(x, arity - 1) for x in t]

    ops = {}
    consts = {}
    for fname, arity in algebra.signature.operations:
        if arity == 0:
            consts[fname] = labels[algebra.tables[fname]]
        else:
            ops[fname] = unfreeze(algebra.tables[fname], arity)
    kind = algebra.signature.kind
    out = {
        "name": algebra.name,
        "kind": "algebra" if kind == "generic" else kind,
        "elements": list(labels),
        "operations": ops,
    }
    if consts:
        out["constants"] = consts
    return out


# -- constructions ----------------------------------------------------------


def lattice_reduct(A: FiniteAlgebra, kind: str = "lattice") -> FiniteAlgebra:
    """Forget everything but the lattice operations (and, for the
    bounded-lattice kind, the bounds)."""
    A.require_lattice()
    if kind not in ("lattice", "bounded-lattice"):
        raise KindError(f"cannot reduce to kind {kind!r}")
    tables = {"join": A.tables["join"], "meet": A.tables["meet"]}
    if kind == "bounded-lattice":
        tables["bot"] = A.bottom()
        tables["top"] = A.top()
    return FiniteAlgebra(
        A.n, A.labels, lattice_signature(kind), tables, name=A.name, validate=False
    )


def dual(L: FiniteAlgebra) -> FiniteAlgebra:
    """Order-dual lattice: join and meet (and bot/top) swapped."""
    L.require_lattice()
    if L.signature.kind == "residuated":
        raise KindError("the dual of a residuated lattice is not residuated")
    tables = dict(L.tables)
    tables["join"], tables["meet"] = L.tables["meet"], L.tables["join"]
    if "bot" in tables:
        tables["bot"], tables["top"] = L.tables["top"], L.tables["bot"]
    name = f"dual({L.name})" if L.name else None
    return FiniteAlgebra(L.n, L.labels, L.signature, tables, name=name, validate=False)


def product_radix(sizes: list[int]) -> list[int]:
    """Mixed-radix place values: index = sum e_i * radix[i]."""
    radix = [1] * len(sizes)
    for i in range(len(sizes) - 2, -1, -1):
        radix[i] = radix[i + 1] * sizes[i + 1]
    return radix


def product_encode(tup, radix):
    return sum(e * r for e, r in zip(tup, radix))


def product_decode(idx, sizes, radix):
    return tuple((idx // r) % s for s, r in zip(sizes, radix))


def direct_product(algebras: list[FiniteAlgebra], name=None) -> FiniteAlgebra:
    """Componentwise product with fixed mixed-radix element encoding."""
    if not algebras:
        raise SignatureMismatch("empty product")
    sig = algebras[0].signature
    for A in algebras[1:]:
        if A.signature != sig:
            raise SignatureMismatch("product factors must share the signature")
    if sig.kind == "residuated":
        raise KindError("products of residuated fixtures are out of scope")
    sizes = [A.n for A in algebras]
    total = 1
    for s in sizes:
        total *= s
        if total > CARRIER_CAP:
            raise SizeCap(f"product carrier exceeds cap {CARRIER_CAP}")
    radix = product_radix(sizes)
    labels = []
    for idx in range(total):
        tup = product_decode(idx, sizes, radix)
        labels.append("(" + ",".join(A.labels[e] for A, e in zip(algebras, tup)) + ")")
    tables = {}
    for fname, arity in sig.operations:
        if arity == 0:
            tables[fname] = product_encode([A.tables[fname] for A in algebras], radix)
        elif arity == 2:
            t = [[0] * total for _ in range(total)]
            tups = [product_decode(i, sizes, radix) for i in range(total)]
            comp = [A.tables[fname] for A in algebras]
            for i in range(total):
                ti = tups[i]
                for j in range(total):
                    tj = tups[j]
                    t[i][j] = product_encode(
                        [comp[k][ti[k]][tj[k]] for k in range(len(algebras))], radix
                    )
            tables[fname] = t
        else:
            tables[fname] = _product_table(algebras, fname, arity, sizes, radix, total)
    if name is None:
        parts = [A.name or "?" for A in algebras]
        name = "x".join(parts)
    return FiniteAlgebra(total, labels, sig, tables, name=name, validate=False)


def _product_table(algebras, fname, arity, sizes, radix, total):
    def build(args):
        if len(args) == arity:
            tups = [product_decode(i, sizes, radix) for i in args]
            res = [
                A.op(fname, *[t[k] for t in tups]) for k, A in enumerate(algebras)
            ]
            return product_encode(res, radix)
        return tuple(build(args + [i]) for i in range(total))

    return build([])


def ordinal_sum(L: FiniteAlgebra, M: FiniteAlgebra, name=None) -> FiniteAlgebra:
    """Stack M on top of L, identifying top(L) with bot(M).

    Element encoding: L keeps its indices; the remaining M elements follow in
    increasing M-index order.  The shared element keeps L's label.
    """
    return ordinal_sum_with_maps(L, M, name=name)[0]


def ordinal_sum_with_maps(L, M, name=None):
    """ordinal_sum plus the two index embeddings (L-index -> sum-index,
    M-index -> sum-index); top(L) and bot(M) map to the same index."""
    L.require_lattice()
    M.require_lattice()
    if L.signature.kind == "residuated" or M.signature.kind == "residuated":
        raise KindError("ordinal sums of residuated fixtures are out of scope")
    top_l = L.top()
    bot_m = M.bottom()
    m_rest = [j for j in range(M.n) if j != bot_m]
    to_sum = {}  # (side, idx) -> new index
    for i in range(L.n):
        to_sum[("L", i)] = i
    to_sum[("M", bot_m)] = top_l
    for k, j in enumerate(m_rest):
        to_sum[("M", j)] = L.n + k
    n = L.n + M.n - 1
    labels = list(L.labels)
    for j in m_rest:
        lab = M.labels[j]
        while lab in labels:
            lab += "'"
        labels.append(lab)
    leq_l = order_matrix(L)
    leq_m = order_matrix(M)
    leq = [[False] * n for _ in range(n)]
    for a in range(L.n):
        for b in range(L.n):
            leq[a][b] = leq_l[a][b]
    for a in range(M.n):
        for b in range(M.n):
            leq[to_sum[("M", a)]][to_sum[("M", b)]] = leq_m[a][b]
    for a in range(L.n):  # everything in L sits below everything in M
        for j in m_rest:
            leq[a][to_sum[("M", j)]] = True
    kind = L.signature.kind
    if M.signature.kind == "bounded-lattice":
        kind = "bounded-lattice" if kind != "lattice" else "lattice"
    if name is None and L.name and M.name:
        name = f"{L.name}+{M.name}"
    total = lattice_from_order(leq, labels, kind=kind, name=name)
    map_l = [to_sum[("L", i)] for i in range(L.n)]
    map_m = [to_sum[("M", j)] for j in range(M.n)]
    return total, map_l, map_m


def sublattice(L: FiniteAlgebra, subset, name=None) -> FiniteAlgebra:
    """Induced lattice on a join/meet-closed subset of L's carrier."""
    L.require_lattice()
    sub = sorted(set(subset))
    if not sub:
        raise NotClosed("", "", "empty")
    pos = {e: i for i, e in enumerate(sub)}
    join, meet = L.tables["join"], L.tables["meet"]
    for a in sub:
        for b in sub:
            if join[a][b] not in pos:
                raise NotClosed(L.labels[a], L.labels[b], "join")
            if meet[a][b] not in pos:
                raise NotClosed(L.labels[a], L.labels[b], "meet")
    k = len(sub)
    tables = {
        "join": [[pos[join[a][b]] for b in sub] for a in sub],
        "meet": [[pos[meet[a][b]] for b in sub] for a in sub],
    }
    kind = "lattice"
    sig = lattice_signature(kind)
    labels = [L.labels[e] for e in sub]
    return FiniteAlgebra(k, labels, sig, tables, name=name, validate=False)


# -- isomorphism ------------------------------------------------------------


def find_isomorphism(A: FiniteAlgebra, B: FiniteAlgebra):
    """A bijection carrier(A) -> carrier(B) commuting with all operations,
    or None.  Brute-force backtracking; intended for desk-scale carriers."""
    if A.n != B.n or A.signature.operations != B.signature.operations:
        return None
    n = A.n
    binary = [f for f, ar in A.signature.operations if ar == 2]
    consts = [f for f, ar in A.signature.operations if ar == 0]
    unary = [f for f, ar in A.signature.operations if ar == 1]

    def profile(X):
        out = []
        for e in range(X.n):
            row = []
            for f in binary:
                t = X.tables[f]
                row.append(sorted(sorted((t[e][x], t[x][e])) for x in range(X.n)).__len__())
                row.append(sum(t[e][x] == e for x in range(X.n)))
            out.append(tuple(row))
        return out

    pa, pb = profile(A), profile(B)
    mapping = [-1] * n
    used = [False] * n

    def consistent(e, img):
        for f in consts:
            if A.tables[f] == e and B.tables[f] != img:
                return False
            if B.tables[f] == img and A.tables[f] != e:
                return False
        for f in unary:
            fe = A.op(f, e)
            if mapping[fe] != -1 and B.op(f, img) != mapping[fe]:
                return False
        for f in binary:
            ta, tb = A.tables[f], B.tables[f]
            for x in range(n):
                mx = mapping[x]
                if mx == -1 and x != e:
                    continue
                mx = img if x == e else mx
                for u, v, mu, mv in ((e, x, img, mx), (x, e, mx, img)):
                    r = ta[u][v]
                    mr = mapping[r] if r != e else img
                    if mapping[r] != -1 or r == e:
                        if tb[mu][mv] != mr:
                            return False
        return True

    def extend(e):
        if e == n:
            return True
        for img in range(n):
            if used[img] or pa[e] != pb[img]:
                continue
            mapping[e] = e_img = img
            if consistent(e, img):
                used[img] = True
                if extend(e + 1):
                    return True
                used[img] = False
            mapping[e] = -1
        return False

    if extend(0):
        return list(mapping)
    return None


def are_isomorphic(A: FiniteAlgebra, B: FiniteAlgebra) -> bool:
    return find_isomorphism(A, B) is not None


# -- partitions -------------------------------------------------------------


def canonicalize(parent_of) -> tuple[int, ...]:
    """Canonical partition form: block_of[e] = minimum element of e's block."""
    n = len(parent_of)
    rep = {}
    out = [0] * n

    def root(e):
        while parent_of[e] != e:
            e = parent_of[e]
        return e

    for e in range(n):
        r = root(e)
        if r not in rep:
            rep[r] = e
        out[e] = rep[r]
    return tuple(out)


def partition_blocks(block_of) -> list[list[int]]:
    blocks: dict[int, list[int]] = {}
    for e, r in enumerate(block_of):
        blocks.setdefault(r, []).append(e)
    return [blocks[r] for r in sorted(blocks)]


def partition_refines(p, q) -> bool:
    """True iff partition p is a refinement of q (p <= q as congruences)."""
    return all(q[e] == q[p[e]] for e in range(len(p)))


def meet_partitions(p, q) -> tuple[int, ...]:
    """Common refinement of two partitions (their meet)."""
    n = len(p)
    first: dict[tuple[int, int], int] = {}
    out = [0] * n
    for e in range(n):
        key = (p[e], q[e])
        out[e] = first.setdefault(key, e)
    return tuple(out)


def delta_partition(n) -> tuple[int, ...]:
    return tuple(range(n))


def nabla_partition(n) -> tuple[int, ...]:
    return (0,) * n


def block_masks(block_of) -> tuple[int, ...]:
    """Per-element bitmask of its block, for fast relation arithmetic."""
    n = len(block_of)
    mask: dict[int, int] = {}
    for e, r in enumerate(block_of):
        mask[r] = mask.get(r, 0) | (1 << e)
    return tuple(mask[block_of[e]] for e in range(n))
