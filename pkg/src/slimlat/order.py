"""Finite posets and lattices with fully materialized structure.

Elements are dense integers 0..n-1.  Closures, meet/join tables and
congruences are computed by brute force; this module is the trust anchor
for everything else, so it prefers the obvious algorithm over the clever
one.  All values are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import OrderError


# ---------------------------------------------------------------------------
# Posets
# ---------------------------------------------------------------------------

class Poset:
    """Finite poset given by its (transitively reduced) cover relation."""

    def __init__(self, n, covers):
        covers = frozenset((int(a), int(b)) for a, b in covers)
        for a, b in covers:
            if not (0 <= a < n and 0 <= b < n):
                raise OrderError(f"cover ({a},{b}) out of range 0..{n - 1}")
            if a == b:
                raise OrderError(f"cover ({a},{b}) is a loop")
        self.n = n
        self.covers = covers
        self._upcov = tuple(
            tuple(sorted(b for a, b in covers if a == u)) for u in range(n)
        )
        self._dncov = tuple(
            tuple(sorted(a for a, b in covers if b == u)) for u in range(n)
        )
        order = self._toposort()
        up = [None] * n
        for u in reversed(order):
            s = {u}
            for v in self._upcov[u]:
                s |= up[v]
            up[u] = frozenset(s)
        self.up = tuple(up)
        dn = [None] * n
        for u in order:
            s = {u}
            for v in self._dncov[u]:
                s |= dn[v]
            dn[u] = frozenset(s)
        self.down = tuple(dn)
        for a, b in covers:
            between = (self.up[a] & self.down[b]) - {a, b}
            if between:
                w = min(between)
                raise OrderError(f"cover ({a},{b}) is not reduced: {a}<{w}<{b}")

    def _toposort(self):
        indeg = [0] * self.n
        for _, b in self.covers:
            indeg[b] += 1
        queue = sorted(u for u in range(self.n) if indeg[u] == 0)
        order = []
        i = 0
        while i < len(queue):
            u = queue[i]
            i += 1
            order.append(u)
            for v in self._upcov[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        if len(order) != self.n:
            raise OrderError("cycle detected in cover relation")
        return order

    # -- queries ------------------------------------------------------------

    def leq(self, a, b):
        return b in self.up[a]

    def lt(self, a, b):
        return a != b and b in self.up[a]

    def upper_covers(self, u):
        return self._upcov[u]

    def lower_covers(self, u):
        return self._dncov[u]

    def maximal_elements(self):
        return tuple(u for u in range(self.n) if not self._upcov[u])

    def minimal_elements(self):
        return tuple(u for u in range(self.n) if not self._dncov[u])

    def height_of(self, u):
        """Length of the longest chain from a minimal element up to u."""
        return self._heights()[u]

    def _heights(self):
        try:
            return self._h
        except AttributeError:
            h = [0] * self.n
            for u in self._toposort():
                for v in self._upcov[u]:
                    h[v] = max(h[v], h[u] + 1)
            self._h = tuple(h)
            return self._h

    def height(self):
        """Length (number of covers) of the longest chain of the poset."""
        return max(self._heights(), default=0)

    def restrict(self, keep):
        """Induced subposet on `keep`; returns (poset, old ids by new id)."""
        keep = sorted(set(keep))
        idx = {old: new for new, old in enumerate(keep)}
        n = len(keep)
        pairs = [
            (a, b)
            for a, b in combinations(keep, 2)
            if self.lt(a, b) or self.lt(b, a)
        ]
        lt = set()
        for a, b in pairs:
            if self.lt(a, b):
                lt.add((idx[a], idx[b]))
            else:
                lt.add((idx[b], idx[a]))
        covers = {
            (a, b)
            for a, b in lt
            if not any((a, w) in lt and (w, b) in lt for w in range(n))
        }
        return Poset(n, covers), keep

    def dual(self):
        return Poset(self.n, {(b, a) for a, b in self.covers})

    def count_downsets(self):
        """Number of down-sets, by divide and conquer on a maximal element."""
        memo = {}

        def count(elems):
            if not elems:
                return 1
            key = elems
            if key in memo:
                return memo[key]
            x = max(elems)
            without = count(elems - (self.up[x] & elems))
            with_x = count(elems - (self.down[x] & elems))
            memo[key] = without + with_x
            return memo[key]

        return count(frozenset(range(self.n)))

    # -- serialization, equality --------------------------------------------

    def to_json(self):
        return json.dumps({"n": self.n, "covers": sorted(map(list, self.covers))})

    @staticmethod
    def from_json(text):
        data = json.loads(text)
        return Poset(data["n"], [tuple(c) for c in data["covers"]])

    def __eq__(self, other):
        return isinstance(other, Poset) and self.n == other.n and self.covers == other.covers

    def __hash__(self):
        return hash((self.n, self.covers))

    def __repr__(self):
        return f"Poset(n={self.n}, covers={sorted(self.covers)})"


def order_from_covers(covers, n=None):
    """Build a validated poset from cover pairs.

    Elements are 0..n-1; when n is omitted it is inferred from the pairs.
    """
    covers = list(covers)
    if n is None:
        n = 1 + max((max(a, b) for a, b in covers), default=-1)
    return Poset(n, covers)


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

class FiniteLattice:
    """A finite lattice: a poset with total meet and join tables."""

    def __init__(self, poset):
        self.poset = poset
        n = poset.n
        if n == 0:
            raise OrderError("empty lattice")
        bottoms = poset.minimal_elements()
        tops = poset.maximal_elements()
        if len(bottoms) != 1 or len(tops) != 1:
            raise OrderError(
                f"no unique bottom/top: minimals {bottoms}, maximals {tops}"
            )
        self.bottom = bottoms[0]
        self.top = tops[0]
        self.meet = self._table(poset.down)
        self.join = self._table(poset.up)

    def _table(self, cones):
        n = self.poset.n
        size = [len(cones[u]) for u in range(n)]
        table = []
        for x in range(n):
            row = []
            for y in range(n):
                common = cones[x] & cones[y]
                g = max(common, key=lambda u: (size[u], u))
                if not common <= cones[g]:
                    kind = "glb" if cones is self.poset.down else "lub"
                    raise OrderError(f"no {kind} for pair ({x},{y})")
                row.append(g)
            table.append(tuple(row))
        return tuple(table)

    # -- basic queries -------------------------------------------------------

    @property
    def n(self):
        return self.poset.n

    def leq(self, a, b):
        return self.poset.leq(a, b)

    def covers(self, a, b):
        return (a, b) in self.poset.covers

    def upper_covers(self, u):
        return self.poset.upper_covers(u)

    def lower_covers(self, u):
        return self.poset.lower_covers(u)

    def ideal(self, x):
        return self.poset.down[x]

    def filter(self, x):
        return self.poset.up[x]

    def length(self):
        return self.poset.height()

    def meet_of(self, elems):
        it = iter(elems)
        acc = next(it)
        for x in it:
            acc = self.meet[acc][x]
        return acc

    def join_of(self, elems):
        it = iter(elems)
        acc = next(it)
        for x in it:
            acc = self.join[acc][x]
        return acc

    # -- structural predicates ----------------------------------------------

    def jir(self):
        """Join-irreducible elements: exactly one lower cover (bottom excluded)."""
        return tuple(
            u for u in range(self.n)
            if u != self.bottom and len(self.lower_covers(u)) == 1
        )

    def mir(self):
        """Meet-irreducible elements: exactly one upper cover (top excluded)."""
        return tuple(
            u for u in range(self.n)
            if u != self.top and len(self.upper_covers(u)) == 1
        )

    def doubly_irreducible(self):
        j = set(self.jir())
        return tuple(u for u in self.mir() if u in j)

    def is_semimodular(self):
        for x in range(self.n):
            for y in range(self.n):
                if self.covers(self.meet[x][y], x) and not self.covers(y, self.join[x][y]):
                    return False
        return True

    def is_slim(self):
        """Join-irreducibles form a union of two chains (no 3-antichain)."""
        j = self.jir()
        for a, b, c in combinations(j, 3):
            if (not self.poset.leq(a, b) and not self.poset.leq(b, a)
                    and not self.poset.leq(a, c) and not self.poset.leq(c, a)
                    and not self.poset.leq(b, c) and not self.poset.leq(c, b)):
                return False
        return True

    def is_distributive(self):
        for x in range(self.n):
            for y in range(self.n):
                for z in range(self.n):
                    if self.meet[x][self.join[y][z]] != self.join[self.meet[x][y]][self.meet[x][z]]:
                        return False
        return True

    def sublattice(self, elems):
        """Induced lattice on a meet- and join-closed subset."""
        sub, old_ids = self.poset.restrict(elems)
        return FiniteLattice(sub), old_ids

    def __repr__(self):
        return f"FiniteLattice(n={self.n})"


def lattice_from_poset(poset):
    """Lattice with meet/join tables, or OrderError naming the failure."""
    return FiniteLattice(poset)


def is_semimodular(lat):
    return lat.is_semimodular()


def jir(lat):
    return lat.jir()


def mir(lat):
    return lat.mir()


def is_slim(lat):
    return lat.is_slim()


def _two_disjoint_chains(poset, elems):
    """True iff the induced order on elems is a disjoint union of <= 2 chains."""
    comp = {
        u: {v for v in elems if v != u and (poset.leq(u, v) or poset.leq(v, u))}
        for u in elems
    }
    unseen = set(elems)
    components = []
    while unseen:
        stack = [unseen.pop()]
        comp_elems = set(stack)
        while stack:
            u = stack.pop()
            for v in comp[u]:
                if v in unseen:
                    unseen.remove(v)
                    comp_elems.add(v)
                    stack.append(v)
        components.append(comp_elems)
    if len(components) > 2:
        return False
    for c in components:
        for a, b in combinations(c, 2):
            if not (poset.leq(a, b) or poset.leq(b, a)):
                return False
    return True


def is_distributive_ideal_grid(lat, x):
    """True iff the principal ideal of x is a direct product of two chains."""
    ideal = lat.ideal(x)
    sub, _ = lat.poset.restrict(ideal)
    try:
        sublat = FiniteLattice(sub)
    except OrderError:
        return False
    if not sublat.is_distributive():
        return False
    return _two_disjoint_chains(sub, sublat.jir())


# ---------------------------------------------------------------------------
# Congruences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Congruence:
    """A lattice congruence as a partition of 0..n-1, canonically encoded.

    block_index[x] is the id of x's block; ids are assigned by least member.
    """

    n: int
    block_index: tuple

    @staticmethod
    def from_parent(parent):
        n = len(parent)
        reps = {}
        index = []
        for x in range(n):
            r = parent[x]
            if r not in reps:
                reps[r] = len(reps)
            index.append(reps[r])
        return Congruence(n, tuple(index))

    def blocks(self):
        out = {}
        for x, b in enumerate(self.block_index):
            out.setdefault(b, []).append(x)
        return tuple(frozenset(v) for _, v in sorted(out.items()))

    def same(self, a, b):
        return self.block_index[a] == self.block_index[b]

    def block_count(self):
        return len(set(self.block_index))

    def refines(self, other):
        """True iff every block of self is inside a block of other."""
        seen = {}
        for x in range(self.n):
            mine = self.block_index[x]
            if mine in seen:
                if seen[mine] != other.block_index[x]:
                    return False
            else:
                seen[mine] = other.block_index[x]
        return True

    def is_identity(self):
        return self.block_count() == self.n

    def is_full(self):
        return self.block_count() == 1


def _closure(lat, seed_pairs):
    n = lat.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = list(seed_pairs)
    while queue:
        x, y = queue.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for z in range(n):
            mx, my = lat.meet[x][z], lat.meet[y][z]
            if find(mx) != find(my):
                queue.append((mx, my))
            jx, jy = lat.join[x][z], lat.join[y][z]
            if find(jx) != find(jy):
                queue.append((jx, jy))
    return Congruence.from_parent([find(x) for x in range(n)])


def principal_congruence(lat, a, b):
    """Smallest congruence identifying a and b (fixpoint of compatibility)."""
    return _closure(lat, [(a, b)])


def congruence_join(lat, congs):
    pairs = []
    for c in congs:
        rep = {}
        for x in range(c.n):
            bid = c.block_index[x]
            if bid in rep:
                pairs.append((rep[bid], x))
            else:
                rep[bid] = x
    if not pairs:
        return Congruence.from_parent(list(range(lat.n)))
    return _closure(lat, pairs)


def is_congruence(lat, cong):
    """Check the compatibility laws directly (used as a test oracle)."""
    n = lat.n
    for x in range(n):
        for y in range(n):
            if not cong.same(x, y):
                continue
            for z in range(n):
                if not cong.same(lat.meet[x][z], lat.meet[y][z]):
                    return False
                if not cong.same(lat.join[x][z], lat.join[y][z]):
                    return False
    return True


@dataclass(frozen=True)
class CongruenceLattice:
    """Join-irreducible congruences of a finite lattice, ordered by refinement."""

    lattice: FiniteLattice
    jir_congs: tuple
    jir_poset: Poset
    con_size: int

    def jir_count(self):
        return len(self.jir_congs)


def congruence_lattice(lat):
    """All distinct con(a, b) over covering pairs a < b, with their order.

    Con L of a finite lattice is distributive, so |Con L| is the number of
    down-sets of the join-irreducible poset.
    """
    congs = []
    seen = set()
    for a, b in sorted(lat.poset.covers):
        c = principal_congruence(lat, a, b)
        if c.block_index not in seen:
            seen.add(c.block_index)
            congs.append(c)
    congs.sort(key=lambda c: (c.block_count(), c.block_index), reverse=True)
    m = len(congs)
    lt = {
        (i, j)
        for i in range(m)
        for j in range(m)
        if i != j and congs[i].refines(congs[j])
    }
    covers = {
        (i, j)
        for i, j in lt
        if not any((i, w) in lt and (w, j) in lt for w in range(m))
    }
    poset = Poset(m, covers)
    return CongruenceLattice(lat, tuple(congs), poset, poset.count_downsets())


def verify_jir_congruences(cl):
    """Each listed congruence must not be the join of strictly smaller ones."""
    for i, c in enumerate(cl.jir_congs):
        below = [d for d in cl.jir_congs if d != c and d.refines(c)]
        if congruence_join(cl.lattice, below).block_index == c.block_index:
            return False
    return True


# ---------------------------------------------------------------------------
# Poset utilities
# ---------------------------------------------------------------------------

def poset_iso(p, q):
    """An order isomorphism p -> q as a dict, or None.

    Backtracking over invariant-refined classes; fine for <= ~40 elements.
    """
    if p.n != q.n or len(p.covers) != len(q.covers):
        return None

    def invariants(poset):
        inv = [
            (
                len(poset.down[u]),
                len(poset.up[u]),
                len(poset.lower_covers(u)),
                len(poset.upper_covers(u)),
            )
            for u in range(poset.n)
        ]
        for _ in range(poset.n):
            nxt = [
                (
                    inv[u],
                    tuple(sorted(inv[v] for v in poset.upper_covers(u))),
                    tuple(sorted(inv[v] for v in poset.lower_covers(u))),
                )
                for u in range(poset.n)
            ]
            if nxt == inv:
                break
            inv = nxt
        return inv

    pinv, qinv = invariants(p), invariants(q)
    if sorted(pinv) != sorted(qinv):
        return None
    candidates = [
        [v for v in range(q.n) if qinv[v] == pinv[u]] for u in range(p.n)
    ]
    order = sorted(range(p.n), key=lambda u: len(candidates[u]))
    image = {}
    used = set()

    def extend(i):
        if i == len(order):
            return True
        u = order[i]
        for v in candidates[u]:
            if v in used:
                continue
            ok = True
            for w, x in image.items():
                if p.leq(u, w) != q.leq(v, x) or p.leq(w, u) != q.leq(x, v):
                    ok = False
                    break
            if ok:
                image[u] = v
                used.add(v)
                if extend(i + 1):
                    return True
                del image[u]
                used.remove(v)
        return False

    return dict(image) if extend(0) else None


def poset_double(p, j):
    """Replace element j by a two-element chain j'' < j'.

    j keeps its id and plays j'; the new element n plays j'' and takes j's
    lower covers.  All other comparabilities are unchanged.
    """
    n = p.n
    covers = set()
    for a, b in p.covers:
        if b == j:
            covers.add((a, n))
        else:
            covers.add((a, b))
    covers.add((n, j))
    return Poset(n + 1, covers)


def named_posets(name, n=None):
    """Standard fixture posets: chain, antichain, Y, P_n, Q_n, V."""
    if name == "chain":
        if n is None or n < 1:
            raise OrderError("chain needs n >= 1")
        return Poset(n, {(i, i + 1) for i in range(n - 1)})
    if name == "antichain":
        if n is None or n < 1:
            raise OrderError("antichain needs n >= 1")
        return Poset(n, set())
    if name == "V":
        return Poset(3, {(0, 1), (0, 2)})
    if name == "Y":
        # c < u; u < a; u < b
        return Poset(4, {(0, 1), (1, 2), (1, 3)})
    if name == "P":
        if n is None or n < 4:
            raise OrderError("P_n needs n >= 4")
        u, a, b = n - 3, n - 2, n - 1
        covers = {(c, u) for c in range(n - 3)} | {(u, a), (u, b)}
        return Poset(n, covers)
    if name == "Q":
        if n is None or n < 3:
            raise OrderError("Q_n needs n >= 3")
        a, b = n - 2, n - 1
        covers = {(c, a) for c in range(n - 2)} | {(c, b) for c in range(n - 2)}
        return Poset(n, covers)
    raise OrderError(f"unknown poset name {name!r}")
