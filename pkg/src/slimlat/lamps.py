"""Lamps, territories, the rho relations and the lamp poset.

A lamp is a boundary neon tube, or the interval from the meet of the feet
of all internal neon tubes sharing a peak up to that peak.  Diagram-level
functions need only a PlanarDiagram; territory-based functions
(rho relations, usage) also need the provenance carried by a built
lattice (cell forest and per-tube territory records).
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Edge
from .errors import InternalInconsistencyError, PreconditionError
from .order import Poset, congruence_lattice, poset_iso, principal_congruence


@dataclass(frozen=True)
class Lamp:
    kind: str          # "boundary" | "internal"
    foot: int
    peak: int
    tubes: tuple       # Edge list, left to right
    side: str = None   # for boundary lamps: "L" | "R"


def lamps_of_diagram(d):
    """All lamps of a diagram, keyed by foot; boundary lamps first."""
    boundary, internal = d.neon_tubes()
    lat = d.lattice
    lc, rc = d.corners()
    out = []
    for e in boundary:
        side = "L" if lat.leq(lc, e.foot) else "R"
        if side == "R" and not lat.leq(rc, e.foot):
            raise InternalInconsistencyError(f"boundary tube {e} on neither upper boundary")
        out.append(Lamp("boundary", e.foot, e.peak, (e,), side))
    by_peak = {}
    for e in internal:
        by_peak.setdefault(e.peak, []).append(e)
    for peak, tubes in sorted(by_peak.items()):
        pos = {f: i for i, f in enumerate(d.lower[peak])}
        tubes.sort(key=lambda e: pos[e.foot])
        foot = lat.meet_of(e.foot for e in tubes)
        out.append(Lamp("internal", foot, peak, tuple(tubes)))
    return tuple(out)


def lamps(obj):
    """Lamps of a built lattice or a bare diagram."""
    return lamps_of_diagram(obj.diagram if hasattr(obj, "diagram") else obj)


def lamp_by_foot(d):
    return {l.foot: l for l in lamps_of_diagram(d)}


def _tube_to_lamp(d):
    out = {}
    for l in lamps_of_diagram(d):
        for e in l.tubes:
            out[(e.foot, e.peak)] = l
    return out


def circ_r(obj, lamp):
    """The circumscribed interval [meet of lower covers of peak, peak].

    With a built lattice, also returns the forest node of the cell at which
    the lamp's multifork was performed.
    """
    d = obj.diagram if hasattr(obj, "diagram") else obj
    if lamp.kind != "internal":
        raise PreconditionError("boundary lamps have no circumscribed rectangle")
    lat = d.lattice
    x = lat.meet_of(lat.lower_covers(lamp.peak))
    interval = frozenset(lat.filter(x) & lat.ideal(lamp.peak))
    if hasattr(obj, "lamp_step_by_peak"):
        step = obj.lamp_step_by_peak[lamp.peak]
        return interval, obj.step_origin[step]
    return interval, None


def nwl_nel(d, lamp):
    """Lamps owning the trajectories through the upper-left and upper-right
    edges of the circumscribed rectangle of an internal lamp."""
    if lamp.kind != "internal":
        raise PreconditionError("nwl/nel are defined for internal lamps")
    lowers = d.lower[lamp.peak]
    tmap = _tube_to_lamp(d)
    ul = Edge(lowers[0], lamp.peak)
    ur = Edge(lowers[-1], lamp.peak)
    out = []
    for e in (ul, ur):
        traj = d.trajectory_through(e)
        tube = traj.tube
        out.append(tmap[(tube.foot, tube.peak)])
    return out[0], out[1]


def diagram_lamp_order(d):
    """(lamps, strict-order pairs on lamp feet) from the trajectory cover rule.

    The order is the reflexive-transitive closure of U < Nwl U, U < Nel U
    over internal lamps U; boundary lamps are maximal.
    """
    lamps = lamps_of_diagram(d)
    lt = set()
    for u in lamps:
        if u.kind != "internal":
            continue
        for v in nwl_nel(d, u):
            if v.foot != u.foot:
                lt.add((u.foot, v.foot))
    changed = True
    while changed:
        changed = False
        for a, b in list(lt):
            for c, e in list(lt):
                if b == c and (a, e) not in lt and a != e:
                    lt.add((a, e))
                    changed = True
    return lamps, frozenset(lt)


def covers_via_nwl_nel(d):
    """Cover pairs of the lamp poset from the Nwl/Nel rule directly:
    U is covered exactly by the minimal elements of {Nwl U, Nel U}."""
    lamps, lt = diagram_lamp_order(d)
    covers = set()
    for u in lamps:
        if u.kind != "internal":
            continue
        nwl, nel = nwl_nel(d, u)
        cand = {nwl.foot, nel.foot}
        mins = {
            f for f in cand
            if not any(g != f and (g, f) in lt for g in cand)
        }
        for f in mins:
            covers.add((u.foot, f))
    return frozenset(covers)


def lamp_order_poset(lamps, lt):
    """The lamp order as a Poset over lamp indices (sorted by foot)."""
    feet = [l.foot for l in lamps]
    idx = {f: i for i, f in enumerate(feet)}
    n = len(feet)
    ltp = {(idx[a], idx[b]) for a, b in lt}
    covers = {
        (a, b)
        for a, b in ltp
        if not any((a, w) in ltp and (w, b) in ltp for w in range(n))
    }
    return Poset(n, covers)


# ---------------------------------------------------------------------------
# Territory-based relations (need provenance)
# ---------------------------------------------------------------------------

def fork_interval(d, foot):
    """Elements of [l_proj(foot), foot] union [r_proj(foot), foot]."""
    lat = d.lattice
    lp, rp = d.l_proj(foot), d.r_proj(foot)
    ideal = lat.ideal(foot)
    return frozenset((lat.filter(lp) & ideal) | (lat.filter(rp) & ideal))


def _node_is_desc_or_eq(pl, node, targets):
    cur = node
    while cur is not None:
        if cur in targets:
            return True
        cur = pl.forest[cur].parent
    return False


def _interior_vertices_under(pl, nodes):
    """Vertices strictly inside the region tiled by the current leaf cells
    descending from the given forest nodes.

    A vertex on the region's boundary polygon is excluded: region borders
    are whole edges, so the boundary vertices are exactly the endpoints of
    sides whose across-the-edge neighbor cell lies outside the region.
    """
    targets = frozenset(nodes)
    if not targets:
        return frozenset()
    d = pl.diagram
    cells = d.cells_by_bottom()
    leaves = [
        cells[bottom]
        for bottom, leaf in pl.leaf_by_bottom.items()
        if _node_is_desc_or_eq(pl, leaf, targets)
    ]
    in_region = {(c.bottom, c.left, c.right, c.top) for c in leaves}
    maps = d._side_maps()
    verts = set()
    boundary_pts = set()
    for c in leaves:
        verts.update((c.bottom, c.left, c.right, c.top))
        for edge in (
            (c.bottom, c.left),
            (c.bottom, c.right),
            (c.left, c.top),
            (c.right, c.top),
        ):
            # the cell on the other side of this edge, whatever role it
            # plays there (precipitous edges pair NE with NW)
            others = {
                (o.bottom, o.left, o.right, o.top)
                for role in ("SW", "SE", "NW", "NE")
                if (o := maps[role].get(edge)) is not None
            } - {(c.bottom, c.left, c.right, c.top)}
            if not others & in_region:
                boundary_pts.update(edge)
    return frozenset(verts - boundary_pts)


def _essential_nodes(pl, tube):
    rec = pl.tube_records[(tube.foot, tube.peak)]
    return rec.leot + rec.reot


def rho_circr(pl):
    """(I, J) pairs: internal I whose origin cell sits inside the essential
    territory of some tube of J (forest descendant test)."""
    d = pl.diagram
    lamps = lamps_of_diagram(d)
    pairs = set()
    for i_lamp in lamps:
        if i_lamp.kind != "internal":
            continue
        _, origin = circ_r(pl, i_lamp)
        for j_lamp in lamps:
            if j_lamp.foot == i_lamp.foot:
                continue
            for tube in j_lamp.tubes:
                if _node_is_desc_or_eq(pl, origin, frozenset(_essential_nodes(pl, tube))):
                    pairs.add((i_lamp.foot, j_lamp.foot))
                    break
    return frozenset(pairs)


def rho_foot(pl):
    """(I, J) pairs by direct vertex membership: Foot I lies strictly inside
    the left or right essential territory of some tube of J."""
    d = pl.diagram
    lamps = lamps_of_diagram(d)
    pairs = set()
    vert_cache = {}
    for j_lamp in lamps:
        verts = set()
        for tube in j_lamp.tubes:
            key = (tube.foot, tube.peak)
            if key not in vert_cache:
                rec = pl.tube_records[key]
                vert_cache[key] = _interior_vertices_under(pl, rec.leot) | \
                    _interior_vertices_under(pl, rec.reot)
            verts |= vert_cache[key]
        for i_lamp in lamps:
            if i_lamp.kind != "internal" or i_lamp.foot == j_lamp.foot:
                continue
            if i_lamp.foot in verts:
                pairs.add((i_lamp.foot, j_lamp.foot))
    return frozenset(pairs)


def lamp_poset(pl):
    """(lamps, strict order pairs, Poset) from the closure of rho_foot."""
    lamps = lamps_of_diagram(pl.diagram)
    base = rho_foot(pl)
    lt = set(base)
    changed = True
    while changed:
        changed = False
        for a, b in list(lt):
            for c, e in list(lt):
                if b == c and a != e and (a, e) not in lt:
                    lt.add((a, e))
                    changed = True
    return lamps, frozenset(lt), lamp_order_poset(lamps, frozenset(lt))


def lamp_creation_step(pl, lamp):
    if lamp.kind == "boundary":
        return 0
    return pl.lamp_step_by_peak[lamp.peak]


def verify_lamp_con_iso(pl):
    """Check Lamp L = Jir(Con L) via foot-peak principal congruences.

    Returns (ok, witness) where witness maps lamp foot -> index of its
    congruence in the independently computed list.
    """
    lat = pl.lattice
    lamps, lt, _ = lamp_poset(pl)
    cl = congruence_lattice(lat)
    if len(lamps) != len(cl.jir_congs):
        return False, None
    key_to_idx = {c.block_index: i for i, c in enumerate(cl.jir_congs)}
    witness = {}
    for l in lamps:
        c = principal_congruence(lat, l.foot, l.peak)
        idx = key_to_idx.get(c.block_index)
        if idx is None:
            return False, None
        witness[l.foot] = idx
    if len(set(witness.values())) != len(lamps):
        return False, None
    # order preservation both ways
    for a in lamps:
        for b in lamps:
            if a.foot == b.foot:
                continue
            lamp_le = (a.foot, b.foot) in lt
            cong_le = cl.jir_congs[witness[a.foot]].refines(cl.jir_congs[witness[b.foot]])
            if lamp_le != cong_le:
                return False, None
    return True, witness


# ---------------------------------------------------------------------------
# Territory usage
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UsageStats:
    """Per internal lamp: left-to-right used/unused pattern over its tubes."""

    patterns: dict     # lamp foot -> str over {"u", "0"}

    def t_plus(self, foot):
        return self.patterns[foot].count("u")

    def t_minus(self, foot):
        return self.patterns[foot].count("0")


def is_used(pl, tube, check_order=True):
    """A tube's territory is used when another internal lamp's origin cell
    sits inside its left or right essential part."""
    d = pl.diagram
    tmap = _tube_to_lamp(d)
    owner = tmap[(tube.foot, tube.peak)]
    targets = frozenset(_essential_nodes(pl, tube))
    if not targets:
        return False
    lamps, lt, _ = lamp_poset(pl) if check_order else (lamps_of_diagram(d), None, None)
    for i_lamp in lamps:
        if i_lamp.kind != "internal" or i_lamp.foot == owner.foot:
            continue
        _, origin = circ_r(pl, i_lamp)
        if _node_is_desc_or_eq(pl, origin, targets):
            if check_order and (i_lamp.foot, owner.foot) not in lt:
                raise InternalInconsistencyError(
                    "a using lamp is not below the owner in the lamp order"
                )
            return True
    return False


def usage_stats(pl):
    patterns = {}
    for l in lamps_of_diagram(pl.diagram):
        if l.kind != "internal":
            continue
        patterns[l.foot] = "".join(
            "u" if is_used(pl, tube) else "0" for tube in l.tubes
        )
    return UsageStats(patterns)


def lamp_report(pl):
    """JSON-ready lamp summary: lamps, poset covers, iso witness, patterns."""
    lamps, lt, poset = lamp_poset(pl)
    stats = usage_stats(pl)
    ok, witness = verify_lamp_con_iso(pl)
    feet = [l.foot for l in lamps]
    idx = {f: i for i, f in enumerate(feet)}
    covers = sorted(
        [idx[a], idx[b]]
        for a, b in lt
        if not any((a, w) in lt and (w, b) in lt for w in feet)
    )
    return {
        "lamps": [
            {
                "kind": l.kind,
                "foot": l.foot,
                "peak": l.peak,
                "tubes": [[e.foot, e.peak] for e in l.tubes],
                "pattern": stats.patterns.get(l.foot),
            }
            for l in lamps
        ],
        "poset_covers": covers,
        "congruence_iso_ok": ok,
        "iso_witness": witness,
    }
