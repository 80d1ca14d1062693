import pytest

from slimlat.diagram import (
    Edge,
    PlanarDiagram,
    canonical_code,
    cell_address,
    embed_rectangular,
    is_slim_rectangular,
    resolve_address,
)
from slimlat.errors import DiagramError
from slimlat.order import lattice_from_poset, named_posets, order_from_covers

from test_order import B2_COVERS, S7_COVERS, grid_poset


def embed(covers):
    return embed_rectangular(lattice_from_poset(order_from_covers(covers)))


def grid_diagram(p, q):
    return embed_rectangular(lattice_from_poset(grid_poset(p, q)))


# Boundaries and corners ------------------------------------------------------

def test_b2_boundaries_and_corners():
    d = embed(B2_COVERS)
    l, r = d.boundary_chains()
    assert len(l) == 3 and len(r) == 3
    assert set(d.corners()) == {1, 2}


def test_grid21_left_boundary_four_elements():
    d = grid_diagram(2, 1)
    l, _ = d.boundary_chains()
    assert len(l) == 4


def test_s7_left_boundary():
    d = embed(S7_COVERS)
    l, r = d.boundary_chains()
    # 0 < z_l < l < top on the left
    assert l == (0, 1, 4, 6)
    assert r == (0, 2, 5, 6)
    assert d.corners() == (4, 5)


def test_corners_error_on_chain():
    lat = lattice_from_poset(named_posets("chain", 3))
    with pytest.raises(DiagramError):
        embed_rectangular(lat)


# Projections -----------------------------------------------------------------

def test_projections():
    d = grid_diagram(2, 2)
    lat = d.lattice
    lc, rc = d.corners()
    assert d.l_proj(lat.top) == lc and d.r_proj(lat.top) == rc
    for x in range(lat.n):
        assert lat.join[d.l_proj(x)][d.r_proj(x)] == x


def test_s7_projection_of_internal_foot():
    d = embed(S7_COVERS)
    # foot of the internal tube is m=3; its left projection is z_l=1
    assert d.l_proj(3) == 1
    assert d.r_proj(3) == 2


# Cells -----------------------------------------------------------------------

def test_cell_counts():
    assert len(embed(B2_COVERS).four_cells()) == 1
    assert len(grid_diagram(2, 3).four_cells()) == 6
    assert len(embed(S7_COVERS).four_cells()) == 3


def test_cell_addresses_s7():
    d = embed(S7_COVERS)
    addrs = sorted(cell_address(d, c) for c in d.four_cells())
    assert addrs == [(0, 0), (0, 1), (1, 0)]
    for c in d.four_cells():
        assert resolve_address(d, cell_address(d, c)) == c


def test_resolve_address_error():
    d = embed(B2_COVERS)
    with pytest.raises(DiagramError):
        resolve_address(d, (5, 5))


# Trajectories and tubes --------------------------------------------------------

def test_trajectory_counts():
    assert len(embed(B2_COVERS).trajectories()) == 2
    assert len(embed(S7_COVERS).trajectories()) == 3
    assert len(grid_diagram(2, 3).trajectories()) == 5


def test_each_trajectory_has_one_tube_and_cells_line_up():
    for d in [embed(B2_COVERS), embed(S7_COVERS), grid_diagram(2, 2)]:
        mirset = set(d.lattice.mir())
        for t in d.trajectories():
            assert sum(1 for e in t.edges if e.foot in mirset) == 1
            cells = d.trajectory_cells(t)
            assert len(cells) == len(t.edges) - 1


def test_neon_tubes():
    b, i = grid_diagram(2, 3).neon_tubes()
    assert len(b) == 5 and len(i) == 0
    b, i = embed(S7_COVERS).neon_tubes()
    assert len(b) == 2 and len(i) == 1
    assert i[0] == Edge(3, 6)


# Validation --------------------------------------------------------------------

def test_is_slim_rectangular():
    assert is_slim_rectangular(grid_diagram(2, 2)).ok
    assert is_slim_rectangular(embed(S7_COVERS)).ok
    rep = is_slim_rectangular(lattice_from_poset(named_posets("chain", 3)))
    assert not rep.ok
    assert any("doubly irreducible" in f or "embedding" in f for f in rep.failures)


def test_validation_counts_trajectories_against_length():
    d = embed(S7_COVERS)
    assert d.antube() == d.lattice.length() == 3


# Mirror and codes ----------------------------------------------------------------

def test_mirror_involution():
    d = embed(S7_COVERS)
    m = d.mirror().mirror()
    assert m.upper == d.upper and m.lower == d.lower


def test_codes_mirror_invariance():
    d = grid_diagram(2, 1)
    assert canonical_code(d) == canonical_code(d.mirror())
    s = embed(S7_COVERS)
    assert canonical_code(s) == canonical_code(s.mirror())


def test_codes_distinguish():
    assert canonical_code(grid_diagram(2, 1)) != canonical_code(embed(S7_COVERS))
    assert canonical_code(grid_diagram(2, 2)) != canonical_code(grid_diagram(3, 1))


def test_json_roundtrip_bit_exact():
    d = embed(S7_COVERS)
    text = d.to_json()
    d2 = PlanarDiagram.from_json(text)
    assert d2.to_json() == text
    assert d2.upper == d.upper and d2.lower == d.lower


def test_embedding_orientation_choices_are_mirrors():
    lat = lattice_from_poset(order_from_covers(S7_COVERS))
    d1 = embed_rectangular(lat, lcorner=4)
    d2 = embed_rectangular(lat, lcorner=5)
    assert d1.upper == d2.mirror().upper
