"""Planar diagrams of slim rectangular lattices.

A diagram is the lattice plus, for every element, its upper and lower
covers listed left to right.  Planarity is purely combinatorial: the
ordered lists are derived from boundary-height coordinates (meet with the
two corners), never from drawn positions.  Cells, boundary chains,
trajectories, neon tubes, mirroring and canonical codes all live here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import DiagramError
from .order import FiniteLattice, Poset, lattice_from_poset


@dataclass(frozen=True)
class Edge:
    foot: int
    peak: int


@dataclass(frozen=True)
class FourCell:
    bottom: int
    left: int
    right: int
    top: int


@dataclass(frozen=True)
class Trajectory:
    """Edges ordered from the left boundary to the right boundary."""

    edges: tuple
    top_index: int

    @property
    def tube(self):
        return self.edges[self.top_index]


class PlanarDiagram:
    """Ordered-cover view of a planar lattice diagram."""

    def __init__(self, lattice, upper, lower):
        self.lattice = lattice
        self.upper = tuple(tuple(row) for row in upper)
        self.lower = tuple(tuple(row) for row in lower)
        n = lattice.n
        if len(self.upper) != n or len(self.lower) != n:
            raise DiagramError("cover order lists must cover all elements")
        covers = set()
        for u in range(n):
            for v in self.upper[u]:
                covers.add((u, v))
        if covers != set(lattice.poset.covers):
            raise DiagramError("upper order lists disagree with the cover relation")
        lowers = {(a, b) for b in range(n) for a in self.lower[b]}
        if lowers != set(lattice.poset.covers):
            raise DiagramError("lower order lists disagree with the cover relation")
        self._cells = None
        self._sides = None

    @property
    def n(self):
        return self.lattice.n

    # -- boundaries and corners -----------------------------------------

    def boundary_chains(self):
        """(left chain, right chain): extreme-cover walks from bottom to top."""
        left = [self.lattice.bottom]
        while self.upper[left[-1]]:
            left.append(self.upper[left[-1]][0])
        right = [self.lattice.bottom]
        while self.upper[right[-1]]:
            right.append(self.upper[right[-1]][-1])
        return tuple(left), tuple(right)

    def boundary(self):
        l, r = self.boundary_chains()
        return frozenset(l) | frozenset(r)

    def corners(self):
        """The two doubly irreducible elements as (lcorner, rcorner)."""
        di = self.lattice.doubly_irreducible()
        if len(di) != 2:
            raise DiagramError(f"expected exactly 2 doubly irreducible elements, got {len(di)}")
        lchain, rchain = self.boundary_chains()
        in_l = [d for d in di if d in lchain]
        in_r = [d for d in di if d in rchain]
        if len(in_l) != 1 or len(in_r) != 1 or in_l[0] == in_r[0]:
            raise DiagramError("doubly irreducible elements are not split over the two boundaries")
        lc, rc = in_l[0], in_r[0]
        lat = self.lattice
        if lat.meet[lc][rc] != lat.bottom or lat.join[lc][rc] != lat.top:
            raise DiagramError("corners are not complements")
        return lc, rc

    def l_proj(self, x):
        lc, _ = self.corners()
        return self.lattice.meet[x][lc]

    def r_proj(self, x):
        _, rc = self.corners()
        return self.lattice.meet[x][rc]

    # -- cells ------------------------------------------------------------

    def four_cells(self):
        """All cells; raises if some consecutive-cover pair is not a 4-cell."""
        if self._cells is None:
            cells = []
            lat = self.lattice
            for u in range(self.n):
                ups = self.upper[u]
                for i in range(len(ups) - 1):
                    v, w = ups[i], ups[i + 1]
                    top = lat.join[v][w]
                    if not (lat.covers(v, top) and lat.covers(w, top)):
                        raise DiagramError(
                            f"region over {u} between covers {v},{w} is not a 4-cell"
                        )
                    cells.append(FourCell(u, v, w, top))
            self._cells = tuple(cells)
        return self._cells

    def cells_by_bottom(self):
        return {c.bottom: c for c in self.four_cells()}

    def _side_maps(self):
        """edge -> cell maps for each of the four side roles."""
        if self._sides is None:
            maps = {"SW": {}, "SE": {}, "NW": {}, "NE": {}}
            for c in self.four_cells():
                for role, e in (
                    ("SW", (c.bottom, c.left)),
                    ("SE", (c.bottom, c.right)),
                    ("NW", (c.left, c.top)),
                    ("NE", (c.right, c.top)),
                ):
                    if e in maps[role]:
                        raise DiagramError(f"edge {e} is the {role} side of two cells")
                    maps[role][e] = c
            self._sides = maps
        return self._sides

    def west_step(self, edge):
        """(next edge, shared cell) to the west, or (None, None) at the boundary."""
        maps = self._side_maps()
        e = (edge.foot, edge.peak)
        cne = maps["NE"].get(e)
        cse = maps["SE"].get(e)
        if cne is not None and cse is not None:
            raise DiagramError(f"edge {e} has two west cells")
        if cne is not None:
            return Edge(cne.bottom, cne.left), cne
        if cse is not None:
            return Edge(cse.left, cse.top), cse
        return None, None

    def east_step(self, edge):
        maps = self._side_maps()
        e = (edge.foot, edge.peak)
        cnw = maps["NW"].get(e)
        csw = maps["SW"].get(e)
        if cnw is not None and csw is not None:
            raise DiagramError(f"edge {e} has two east cells")
        if cnw is not None:
            return Edge(cnw.bottom, cnw.right), cnw
        if csw is not None:
            return Edge(csw.right, csw.top), csw
        return None, None

    # -- trajectories and neon tubes ---------------------------------------

    def all_edges(self):
        return tuple(Edge(a, b) for a, b in sorted(self.lattice.poset.covers))

    def trajectory_through(self, edge):
        """The full trajectory containing `edge`, with its unique neon tube."""
        west = []
        cur = edge
        seen = {(cur.foot, cur.peak)}
        while True:
            nxt, _ = self.west_step(cur)
            if nxt is None:
                break
            if (nxt.foot, nxt.peak) in seen:
                raise DiagramError("trajectory revisits an edge (diagram corruption)")
            seen.add((nxt.foot, nxt.peak))
            west.append(nxt)
            cur = nxt
        east = []
        cur = edge
        while True:
            nxt, _ = self.east_step(cur)
            if nxt is None:
                break
            if (nxt.foot, nxt.peak) in seen:
                raise DiagramError("trajectory revisits an edge (diagram corruption)")
            seen.add((nxt.foot, nxt.peak))
            east.append(nxt)
            cur = nxt
        edges = tuple(reversed(west)) + (edge,) + tuple(east)
        mirset = set(self.lattice.mir())
        tubes = [i for i, e in enumerate(edges) if e.foot in mirset]
        if len(tubes) != 1:
            raise DiagramError(f"trajectory has {len(tubes)} neon tubes, expected 1")
        lchain, rchain = self.boundary_chains()
        lset, rset = set(lchain), set(rchain)
        first, last = edges[0], edges[-1]
        if not (first.foot in lset and first.peak in lset):
            raise DiagramError("trajectory does not start on the left boundary")
        if not (last.foot in rset and last.peak in rset):
            raise DiagramError("trajectory does not end on the right boundary")
        return Trajectory(edges, tubes[0])

    def trajectories(self):
        """All trajectories, each listed from left boundary to right boundary."""
        out = []
        done = set()
        for e in self.all_edges():
            if (e.foot, e.peak) in done:
                continue
            t = self.trajectory_through(e)
            out.append(t)
            done.update((x.foot, x.peak) for x in t.edges)
        return tuple(out)

    def trajectory_cells(self, traj):
        """Cells between consecutive edges, west to east."""
        cells = []
        for i in range(len(traj.edges) - 1):
            nxt, cell = self.east_step(traj.edges[i])
            if nxt != traj.edges[i + 1]:
                raise DiagramError("trajectory edges are not east-consecutive")
            cells.append(cell)
        return tuple(cells)

    def neon_tubes(self):
        """(boundary tubes, internal tubes): prime intervals with mir foot."""
        bnd = self.boundary()
        boundary, internal = [], []
        for f in self.lattice.mir():
            p = self.upper[f][0]
            if f in bnd:
                boundary.append(Edge(f, p))
            else:
                internal.append(Edge(f, p))
        return tuple(boundary), tuple(internal)

    def antube(self):
        b, i = self.neon_tubes()
        return len(b) + len(i)

    # -- mirroring and codes -------------------------------------------------

    def mirror(self):
        return PlanarDiagram(
            self.lattice,
            tuple(tuple(reversed(r)) for r in self.upper),
            tuple(tuple(reversed(r)) for r in self.lower),
        )

    def bfs_code(self):
        """Breadth-first encoding from the bottom following cover order."""
        ids = {self.lattice.bottom: 0}
        queue = [self.lattice.bottom]
        i = 0
        while i < len(queue):
            u = queue[i]
            i += 1
            for v in self.upper[u]:
                if v not in ids:
                    ids[v] = len(ids)
                    queue.append(v)
        parts = []
        for u in queue:
            parts.append(",".join(str(ids[v]) for v in self.upper[u]))
        return "|".join(parts)

    def canonical_code(self):
        return min(self.bfs_code(), self.mirror().bfs_code())

    # -- serialization --------------------------------------------------------

    def to_json(self):
        return json.dumps(
            {
                "n": self.n,
                "covers": sorted(map(list, self.lattice.poset.covers)),
                "upper_order": [list(r) for r in self.upper],
                "lower_order": [list(r) for r in self.lower],
            }
        )

    @staticmethod
    def from_json(text):
        data = json.loads(text)
        lat = lattice_from_poset(Poset(data["n"], [tuple(c) for c in data["covers"]]))
        return PlanarDiagram(lat, data["upper_order"], data["lower_order"])


def mirror(diagram):
    return diagram.mirror()


def canonical_code(diagram):
    return diagram.canonical_code()


# ---------------------------------------------------------------------------
# Embedding an abstract slim rectangular lattice
# ---------------------------------------------------------------------------

def boundary_heights(lat, lcorner, rcorner):
    """Per element, (height of meet with lcorner, height of meet with rcorner).

    These pairs embed a slim rectangular lattice into a grid; the planar
    cover order is recovered by sorting covers on the left height.
    """
    lchain = sorted(lat.ideal(lcorner), key=lambda u: len(lat.ideal(u)))
    rchain = sorted(lat.ideal(rcorner), key=lambda u: len(lat.ideal(u)))
    for chain in (lchain, rchain):
        for a, b in zip(chain, chain[1:]):
            if not lat.leq(a, b):
                raise DiagramError("corner ideal is not a chain")
    lindex = {u: i for i, u in enumerate(lchain)}
    rindex = {u: i for i, u in enumerate(rchain)}
    hl, hr = [], []
    for x in range(lat.n):
        lp = lat.meet[x][lcorner]
        rp = lat.meet[x][rcorner]
        if lat.join[lp][rp] != x:
            raise DiagramError(f"element {x} is not the join of its two projections")
        hl.append(lindex[lp])
        hr.append(rindex[rp])
    return tuple(hl), tuple(hr), tuple(lchain), tuple(rchain)


def embed_rectangular(lat, lcorner=None):
    """Derive the planar diagram of a slim rectangular lattice.

    The two doubly irreducible elements are the corners; choosing which one
    is the left corner fixes the orientation (the other choice gives the
    mirror image).  Raises DiagramError when the lattice has no such diagram.
    """
    di = lat.doubly_irreducible()
    if len(di) != 2:
        raise DiagramError(f"expected exactly 2 doubly irreducible elements, got {len(di)}")
    if lcorner is None:
        lcorner = min(di)
    if lcorner not in di:
        raise DiagramError(f"{lcorner} is not doubly irreducible")
    rcorner = di[0] if di[1] == lcorner else di[1]
    if lat.meet[lcorner][rcorner] != lat.bottom or lat.join[lcorner][rcorner] != lat.top:
        raise DiagramError("corners are not complements")
    hl, _, _, _ = boundary_heights(lat, lcorner, rcorner)
    upper, lower = [], []
    for u in range(lat.n):
        ups = sorted(lat.upper_covers(u), key=lambda v: -hl[v])
        dns = sorted(lat.lower_covers(u), key=lambda v: -hl[v])
        for row in (ups, dns):
            for a, b in zip(row, row[1:]):
                if hl[a] == hl[b]:
                    raise DiagramError(f"covers {a},{b} of {u} collide in the embedding")
        upper.append(tuple(ups))
        lower.append(tuple(dns))
    return PlanarDiagram(lat, upper, lower)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple

    def __bool__(self):
        return self.ok


def is_slim_rectangular(obj):
    """Full validity report for a diagram or abstract lattice.

    Checks semimodularity, slimness, the two complementary doubly
    irreducible elements, that every region is a 4-cell with a unique
    bottom, and trajectory sanity (one neon tube each, count = length).
    """
    failures = []
    if isinstance(obj, PlanarDiagram):
        d = obj
        lat = d.lattice
    else:
        lat = obj
        try:
            d = embed_rectangular(lat)
        except DiagramError as e:
            return ValidationReport(False, (f"embedding: {e}",))

    if not lat.is_semimodular():
        failures.append("not semimodular")
    if not lat.is_slim():
        failures.append("not slim: 3-element antichain in join-irreducibles")
    di = lat.doubly_irreducible()
    if len(di) != 2:
        failures.append(f"{len(di)} doubly irreducible elements, expected 2")
    else:
        a, b = di
        if lat.meet[a][b] != lat.bottom or lat.join[a][b] != lat.top:
            failures.append("doubly irreducible elements are not complements")
    for u in range(lat.n):
        if len(lat.upper_covers(u)) > 2:
            failures.append(f"element {u} has more than 2 upper covers (shared cell bottom)")
            break
    try:
        d.four_cells()
    except DiagramError as e:
        failures.append(str(e))
    lchain, rchain = d.boundary_chains()
    if lchain[-1] != lat.top or rchain[-1] != lat.top:
        failures.append("boundary chains do not reach the top")
    if not failures:
        try:
            trajs = d.trajectories()
            if len(trajs) != lat.length():
                failures.append(
                    f"{len(trajs)} trajectories but length {lat.length()}"
                )
            if d.antube() != lat.length():
                failures.append("neon tube count differs from length")
        except DiagramError as e:
            failures.append(str(e))
    return ValidationReport(not failures, tuple(failures))


# ---------------------------------------------------------------------------
# Cell addressing
# ---------------------------------------------------------------------------

def cell_address(diagram, cell):
    """(left height, right height) of the cell's bottom: a stable address."""
    lc, rc = diagram.corners()
    hl, hr, _, _ = boundary_heights(diagram.lattice, lc, rc)
    return hl[cell.bottom], hr[cell.bottom]


def resolve_address(diagram, address):
    """The cell whose bottom sits at the given boundary heights."""
    a, b = address
    lc, rc = diagram.corners()
    hl, hr, lchain, rchain = boundary_heights(diagram.lattice, lc, rc)
    if not (0 <= a < len(lchain) and 0 <= b < len(rchain)):
        raise DiagramError(f"address {address} is outside the boundary chains")
    bottom = diagram.lattice.join[lchain[a]][rchain[b]]
    if (hl[bottom], hr[bottom]) != (a, b):
        raise DiagramError(f"no element at address {address}")
    cell = diagram.cells_by_bottom().get(bottom)
    if cell is None:
        raise DiagramError(f"no cell with bottom at address {address}")
    return cell
