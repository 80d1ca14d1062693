"""Doubling a non-maximal element of the lamp poset.

Given a sequence and a step index t, produce a sequence whose lattice has
the original lamp poset with step t's lamp doubled and exactly two extra
neon tubes: replace step t by a 2-fold fork at the same cell followed by
the original multiplicity at the cell under the new lamp's leftmost tube
foot, then re-locate every later step by crossing the two trajectories
that flanked its original cell.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Edge, cell_address, resolve_address
from .errors import InternalInconsistencyError, PreconditionError
from .lamps import lamp_poset, lamps_of_diagram
from .multifork import ForkStep, MultiforkSequence, build, multifork_extend
from .order import poset_double, poset_iso


@dataclass(frozen=True)
class RetargetRecord:
    """Which tube flanks a step's cell: the trajectory through the cell's
    upper-left edge descends from tube alpha of lamp u; the one through the
    upper-right edge ascends to tube beta of lamp v."""

    u: tuple
    alpha: int
    v: tuple
    beta: int


def _upper_chain_index(d, side, foot):
    lat = d.lattice
    lc, rc = d.corners()
    corner = lc if side == "L" else rc
    chain = sorted(lat.filter(corner), key=lambda u: len(lat.ideal(u)))
    return chain.index(foot)


def _lamp_id(pl, lamp):
    """Build-independent lamp identity: boundary position or creation step."""
    if lamp.kind == "internal":
        return ("s", pl.lamp_step_by_peak[lamp.peak])
    return ("b", lamp.side, _upper_chain_index(pl.diagram, lamp.side, lamp.foot))


def _lamps_by_id(pl):
    return {_lamp_id(pl, l): l for l in lamps_of_diagram(pl.diagram)}


def _tube_lamp_of_edge(pl, edge):
    d = pl.diagram
    traj = d.trajectory_through(edge)
    tube = traj.tube
    for l in lamps_of_diagram(d):
        for i, e in enumerate(l.tubes):
            if e == tube:
                return l, i
    raise InternalInconsistencyError("trajectory top edge is not a neon tube")


def locate_retarget(stage_pl, address):
    """Identify the flanking tubes of the cell at `address` in a stage
    lattice, as (lamp id, tube index) pairs for the two upper edges."""
    d = stage_pl.diagram
    cell = resolve_address(d, address)
    ul, ur = Edge(cell.left, cell.top), Edge(cell.right, cell.top)
    lamp_u, alpha = _tube_lamp_of_edge(stage_pl, ul)
    lamp_v, beta = _tube_lamp_of_edge(stage_pl, ur)
    return RetargetRecord(
        _lamp_id(stage_pl, lamp_u), alpha, _lamp_id(stage_pl, lamp_v), beta
    )


def _translate_step(original_step, t):
    if original_step < t:
        return original_step
    if original_step == t:
        return t + 1
    return original_step + 1


def _crossing_cell(pl, rec, t):
    """The unique 4-cell where the descending part of the trajectory through
    tube alpha of lamp u crosses the ascending part through tube beta of v."""
    d = pl.diagram
    by_id = _lamps_by_id(pl)

    def primed_id(lamp_id):
        if lamp_id[0] == "s":
            return ("s", _translate_step(lamp_id[1], t))
        return lamp_id

    lamp_u = by_id[primed_id(rec.u)]
    lamp_v = by_id[primed_id(rec.v)]
    p_tube = lamp_u.tubes[rec.alpha]
    q_tube = lamp_v.tubes[rec.beta]
    traj_p = d.trajectory_through(p_tube)
    traj_q = d.trajectory_through(q_tube)
    desc = set(d.trajectory_cells(traj_p)[traj_p.top_index:])
    asc = set(d.trajectory_cells(traj_q)[: traj_q.top_index])
    common = desc & asc
    if len(common) != 1:
        raise InternalInconsistencyError(
            f"trajectories cross in {len(common)} cells, expected exactly 1"
        )
    return common.pop()


def double(seq, t):
    """Sequence realizing the lamp poset with step t's lamp doubled.

    Returns (new sequence, its built lattice).  Verifies the guarantees:
    tube count and length grow by exactly 2, and the new lamp poset is the
    doubling of the old one.
    """
    if not (1 <= t <= len(seq.steps)):
        raise PreconditionError(f"step {t} out of range 1..{len(seq.steps)}")
    orig = build(seq)
    ostages = orig.stages()
    records = {
        s + 1: locate_retarget(ostages[s], (seq.steps[s].a, seq.steps[s].b))
        for s in range(t, len(seq.steps))
    }

    pl = build(MultiforkSequence(seq.grid_p, seq.grid_q, seq.steps[: t - 1]))
    step_t = seq.steps[t - 1]
    pl = multifork_extend(pl, (step_t.a, step_t.b), 2)

    # the cell whose peak is the foot of the new lamp's leftmost tube
    new_peak = next(
        peak for peak, st in pl.lamp_step_by_peak.items() if st == t
    )
    j_prime = next(
        l for l in lamps_of_diagram(pl.diagram)
        if l.kind == "internal" and l.peak == new_peak
    )
    anchor = j_prime.tubes[0].foot
    cells = [c for c in pl.diagram.four_cells() if c.top == anchor]
    if len(cells) != 1:
        raise InternalInconsistencyError(
            f"{len(cells)} cells under the leftmost tube foot, expected 1"
        )
    pl = multifork_extend(pl, cell_address(pl.diagram, cells[0]), step_t.k)

    for s in range(t + 1, len(seq.steps) + 1):
        cell = _crossing_cell(pl, records[s], t)
        pl = multifork_extend(pl, cell_address(pl.diagram, cell), seq.steps[s - 1].k)

    if pl.antube() != orig.antube() + 2 or pl.length() != orig.length() + 2:
        raise InternalInconsistencyError("doubling did not add exactly 2 tubes")
    lamps_o, _, poset_o = lamp_poset(orig)
    feet_o = sorted(l.foot for l in lamps_o)
    target_foot = next(
        l.foot for l in lamps_o
        if l.kind == "internal" and orig.lamp_step_by_peak[l.peak] == t
    )
    doubled = poset_double(poset_o, feet_o.index(target_foot))
    _, _, poset_n = lamp_poset(pl)
    if poset_iso(poset_n, doubled) is None:
        raise InternalInconsistencyError("lamp poset is not the doubled poset")
    return pl.seq, pl
