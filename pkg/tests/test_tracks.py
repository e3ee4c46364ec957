import pytest

from hdabisim.hda import check_hda, validate_map
from hdabisim.ipomset import EXEC, ONE, ZERO, parse_ipomset
from hdabisim.tracks import (final_inclusion, glue_track_objects, initial_inclusion,
                             track_object)

from oracles import brute_cell_counts, brute_states
from test_ipomset import P_LIT, Q_LIT, R_LIT, small_ipomsets


def two_cells(p):
    h = track_object(p).hda
    return sum(1 for x in h.cells if h.dim(x) == 2)


def test_two_cell_goldens():
    assert two_cells(parse_ipomset(Q_LIT)) == 2
    assert two_cells(parse_ipomset(R_LIT)) == 3


@pytest.mark.parametrize("text,counts", [
    (P_LIT, {0: 6, 1: 7, 2: 2}),
    (Q_LIT, {0: 7, 1: 8, 2: 2}),
    (R_LIT, {0: 8, 1: 10, 2: 3}),
    ("[.a.]", {0: 2, 1: 1}),
    ("[a b]", {0: 4, 1: 4, 2: 1}),
])
def test_cell_counts_match_brute_force(text, counts):
    p = parse_ipomset(text)
    h = track_object(p).hda
    got = {}
    for x in h.cells:
        got[h.dim(x)] = got.get(h.dim(x), 0) + 1
    assert got == counts == brute_cell_counts(p)


def test_states_match_brute_force_on_all_small_ipomsets():
    for p in small_ipomsets(3):
        obj = track_object(p)
        mine = sorted(tuple(sorted(st.items())) for st in obj.state_of.values())
        ref = sorted(tuple(sorted(st.items())) for st in brute_states(p))
        assert mine == ref, p


@pytest.mark.parametrize("text", [P_LIT, Q_LIT, R_LIT, "[.a b.]", "[a] * [b]"])
def test_track_object_structure(text):
    p = parse_ipomset(text)
    obj = track_object(p)
    check_hda(obj.hda)
    init = obj.state_of[obj.initial]
    fin = obj.state_of[obj.final]
    assert all(init[e] == (EXEC if e in p.sources else ZERO) for e in p.events)
    assert all(fin[e] == (EXEC if e in p.targets else ONE) for e in p.events)
    for cell in obj.hda.cells:
        m = obj.witness(cell)
        assert m.is_valid()
        assert len(m.source) == obj.hda.dim(cell)


@pytest.mark.parametrize("left,right", [("[.a. b]", "[.a. c]"), ("[a. b]", "[.a c] * [d.]"),
                                        ("[.a. b] * [.a c.]", "[d. .c]"), ("[a]", "[b]")])
def test_inclusions_form_the_pushout(left, right):
    p, r = parse_ipomset(left), parse_ipomset(right)
    src, whole, ini = initial_inclusion(p, r)
    src2, whole2, fin = final_inclusion(p, r)
    assert whole is whole2
    assert validate_map(src.hda, whole.hda, ini, check_initial=False)
    assert validate_map(src2.hda, whole.hda, fin, check_initial=False)
    assert ini[src.initial] == whole.initial
    assert fin[src2.final] == whole.final
    assert len(set(ini.values())) == len(ini) and len(set(fin.values())) == len(fin)
    image_ini, image_fin = set(ini.values()), set(fin.values())
    assert image_ini | image_fin == set(whole.hda.cells)
    assert len(image_ini & image_fin) == 3 ** len(p.targets)
    assert glue_track_objects(p, r)[0] is whole
