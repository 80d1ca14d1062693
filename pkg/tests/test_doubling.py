import pytest

from slimlat.diagram import resolve_address
from slimlat.doubling import double, locate_retarget
from slimlat.dsl import parse_dsl
from slimlat.errors import PreconditionError
from slimlat.lamps import lamp_poset
from slimlat.multifork import build, grid
from slimlat.order import (
    congruence_lattice,
    named_posets,
    poset_double,
    poset_iso,
)


def test_locate_retarget_on_grid_step():
    pl = grid(1, 1)
    rec = locate_retarget(pl, (0, 0))
    assert rec.u[0] == "b" and rec.v[0] == "b"
    assert rec.alpha == 0 and rec.beta == 0


def test_double_s7():
    seq = parse_dsl("grid 1 1\nfork 0 0 1")
    new_seq, pl = double(seq, 1)
    assert pl.length() == 5 and pl.antube() == 5
    assert len(new_seq.steps) == 2
    # lamp poset is V with its bottom doubled: a 2-chain under two tops
    _, _, poset = lamp_poset(pl)
    expected = poset_double(named_posets("V"), 0)
    assert poset_iso(poset, expected) is not None
    # congruence oracle agrees
    cl = congruence_lattice(pl.lattice)
    assert poset_iso(cl.jir_poset, expected) is not None


def test_double_single_step_needs_no_retargeting():
    seq = parse_dsl("grid 2 2\nfork 1 1 2")
    new_seq, pl = double(seq, 1)
    assert len(new_seq.steps) == 2
    orig = build(seq)
    assert pl.antube() == orig.antube() + 2


def test_double_g22_fork2_poset():
    seq = parse_dsl("grid 2 2\nfork 1 1 2")
    _, pl = double(seq, 1)
    assert pl.antube() == 8
    orig = build(seq)
    _, _, poset_o = lamp_poset(orig)
    _, _, poset_n = lamp_poset(pl)
    assert poset_n.n == poset_o.n + 1
    cl = congruence_lattice(pl.lattice)
    assert poset_iso(cl.jir_poset, poset_n) is not None


def test_double_with_retargeted_later_step():
    seq = parse_dsl("grid 1 1\nfork 0 0 3\nfork 2 0 1")
    for t in (1, 2):
        new_seq, pl = double(seq, t)
        orig = build(seq)
        assert pl.antube() == orig.antube() + 2
        assert pl.length() == orig.length() + 2
        _, _, poset_n = lamp_poset(pl)
        cl = congruence_lattice(pl.lattice)
        assert poset_iso(cl.jir_poset, poset_n) is not None


def test_double_bad_step_index():
    seq = parse_dsl("grid 1 1\nfork 0 0 1")
    with pytest.raises(PreconditionError):
        double(seq, 2)
    with pytest.raises(PreconditionError):
        double(seq, 0)
