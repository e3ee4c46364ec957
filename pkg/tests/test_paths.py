import random

import pytest

from hdabisim.bisim import span_from_relation, cell_bisim
from hdabisim.corpus import corpus_pairs
from hdabisim.errors import BadStep, EndpointMismatch, InterfaceMismatch, NotNodeInitial
from hdabisim.fixtures import example
from hdabisim.hda import reindex, subsets
from hdabisim.ipomset import canonical_form, glue, isomorphic, parse_ipomset
from hdabisim.paths import (DOWN, UP, Path, build_path, characteristic_path, concat,
                            congruent, empty_path, ev, is_restriction, is_sparse,
                            label_extensions, lower_face_path, path_from_track, restrictions,
                            sparse, track_from_path)
from hdabisim.tracks import Track, glue_tracks, track_object

from test_ipomset import P_LIT, Q_LIT, R_LIT


def random_path(h, rng, length, start=None):
    """A random walk by single up/down steps."""
    x = h.initial if start is None else start
    cells, steps = [x], []
    for _ in range(length):
        moves = [(UP, a, y) for a, y in h.up_steps(x)]
        moves += [(DOWN, b, y) for b, y in h.down_steps(x)]
        if not moves:
            break
        d, a, y = rng.choice(moves)
        cells.append(y)
        steps.append((d, a))
        x = y
    return Path(h, cells, steps)


def split_steps(alpha, rng):
    """A congruent path where merged steps are split into random single-index pieces."""
    h = alpha.hda
    cells, steps = [alpha.start], []
    for (d, a), x, y in zip(alpha.steps, alpha.cells, alpha.cells[1:]):
        a = list(a)
        rng.shuffle(a)
        cut = rng.randint(1, len(a))
        first, second = tuple(sorted(a[:cut])), tuple(sorted(a[cut:]))
        if not second:
            cells.append(y)
            steps.append((d, first))
            continue
        if d == UP:
            mid = h.face(y, second, 0)
            cells += [mid, y]
            steps += [(UP, reindex(first, second)), (UP, second)]
        else:
            mid = h.face(x, first, 1)
            cells += [mid, y]
            steps += [(DOWN, first), (DOWN, reindex(second, first))]
    return Path(h, cells, steps)


def corpus_hdas(seed=2, count=15):
    out = [example(n) for n in ("X1", "X2", "X1_node", "filled_square", "hollow_square")]
    for y, z, _ in corpus_pairs(seed, count):
        out += [y, z]
    return out


# --- building and labels ------------------------------------------------------

def test_build_path_and_label():
    h = example("filled_square")
    alpha = build_path(h, [{"up": {"cell": "x", "A": [0, 1]}}, {"down": {"B": [0, 1]}}])
    assert alpha.end == h.final[0]
    assert isomorphic(ev(alpha), parse_ipomset("[a b]"))
    beta = build_path(h, [{"up": {"cell": "x", "A": [0, 1]}}])
    assert isomorphic(ev(beta), parse_ipomset("[a. b.]"))


def test_bad_steps():
    h = example("filled_square")
    with pytest.raises(BadStep):
        build_path(h, [{"up": {"cell": "x", "A": [0]}}])
    with pytest.raises(BadStep):
        build_path(h, [{"down": {"B": [0]}}])
    with pytest.raises(BadStep):
        build_path(h, [{"sideways": {}}])


def test_concat_endpoint_mismatch():
    h = example("filled_square")
    with pytest.raises(EndpointMismatch):
        concat(empty_path(h, "x"), empty_path(h, h.initial))


def test_path_through_x2_label():
    h = example("X2")
    alpha = build_path(h, [{"up": {"cell": "x2", "A": [1]}}, {"down": {"B": [1]}}])
    assert isomorphic(ev(alpha), parse_ipomset("[.a. c]"))


@pytest.mark.parametrize("text", [P_LIT, Q_LIT, R_LIT, "[a b]", "[]", "[.a.]", "[a] * [b]"])
def test_characteristic_path(text):
    p = parse_ipomset(text)
    rho = characteristic_path(p)
    obj = track_object(p)
    assert is_sparse(rho)
    assert rho.start == obj.initial and rho.end == obj.final
    assert isomorphic(ev(rho), p)


# --- restrictions ----------------------------------------------------------------

def test_restriction_examples():
    h = example("filled_square")
    a_edge, b_edge = h.face("x", (1,), 0), h.face("x", (0,), 0)
    up_a = Path(h, [h.face("x", (0,), 0), "x"], [(UP, (0,))])
    longer = Path(h, [h.face("x", (0,), 0), "x", h.face("x", (1,), 1)],
                  [(UP, (0,)), (DOWN, (1,))])
    assert is_restriction(up_a, longer)
    full = Path(h, [h.initial, "x"], [(UP, (0, 1))])
    assert is_restriction(Path(h, [h.initial, a_edge], [(UP, (0,))]), full)
    assert is_restriction(Path(h, [h.initial, b_edge], [(UP, (0,))]), full)
    assert is_restriction(full, full)
    assert is_restriction(empty_path(h, h.initial), full)


def test_restrictions_of_empty_path():
    h = example("filled_square")
    e = empty_path(h, h.initial)
    assert restrictions(e) == [e]


def test_restrictions_are_prefix_weakenings():
    rng = random.Random(4)
    for h in corpus_hdas():
        for _ in range(10):
            alpha = sparse(random_path(h, rng, 4))
            for beta in restrictions(alpha):
                assert beta.start == alpha.start
                assert len(beta) <= len(alpha)
                if len(beta):
                    assert beta.steps[:-1] == alpha.steps[:len(beta) - 1]


# --- congruence --------------------------------------------------------------------

def test_sparse_normal_form_is_unique():
    rng = random.Random(7)
    count = 0
    for h in corpus_hdas():
        for _ in range(15):
            alpha = random_path(h, rng, 6)
            s = sparse(alpha)
            assert is_sparse(s)
            assert sparse(s) == s
            for _ in range(3):
                beta = split_steps(alpha, rng)
                assert sparse(beta) == s
                assert congruent(alpha, beta)
                assert canonical_form(ev(beta))[0] == canonical_form(ev(alpha))[0]
                count += 1
    assert count > 300


def test_ev_of_concat_is_glue():
    rng = random.Random(8)
    for h in corpus_hdas():
        for _ in range(15):
            alpha = random_path(h, rng, 4)
            beta = random_path(h, rng, 4, start=alpha.end)
            assert isomorphic(ev(concat(alpha, beta)), glue(ev(alpha), ev(beta)))


# --- the path/track dictionary ---------------------------------------------------

def test_track_round_trips():
    rng = random.Random(9)
    for h in corpus_hdas():
        for _ in range(10):
            alpha = random_path(h, rng, 5)
            t = track_from_path(alpha)
            assert t.violation() is None
            back = path_from_track(t)
            assert congruent(back, alpha)
            assert track_from_path(back) == t


def test_glue_tracks_matches_concat():
    rng = random.Random(10)
    for h in corpus_hdas():
        for _ in range(8):
            alpha = random_path(h, rng, 3)
            beta = random_path(h, rng, 3, start=alpha.end)
            glued = glue_tracks(track_from_path(alpha), track_from_path(beta))
            assert glued.violation() is None
            assert congruent(path_from_track(glued), concat(alpha, beta))


def test_track_naturality_along_maps():
    """phi after g_alpha equals g of phi(alpha), for span projections and tracks."""
    rng = random.Random(12)
    checked = 0
    for y, z, _ in corpus_pairs(4, 25):
        v = cell_bisim(y, z)
        if not v.related:
            continue
        span, left, right = span_from_relation(y, z, v.witness)
        for target, phi in ((y, left), (z, right)):
            for _ in range(5):
                alpha = random_path(span, rng, 4)
                g = track_from_path(alpha)
                composed = Track(g.obj, target, {c: phi[x] for c, x in g.assignment.items()})
                assert track_from_path(alpha.mapped(target, phi)) == composed
                checked += 1
    assert checked > 20


# --- label search ------------------------------------------------------------------

def sparse_paths_from(h, x, max_len):
    """All sparse paths from x with at most max_len steps, by plain search."""
    out = [Path(h, [x])]
    frontier = [(Path(h, [x]), None)]
    for _ in range(max_len):
        nxt = []
        for p, last in frontier:
            moves = []
            if last != UP:
                moves += [(UP, a, y) for a, y in h.up_steps(p.end)]
            if last != DOWN:
                moves += [(DOWN, b, y) for b, y in h.down_steps(p.end)]
            for d, a, y in moves:
                q = Path(h, p.cells + (y,), p.steps + ((d, a),))
                out.append(q)
                nxt.append((q, d))
        frontier = nxt
    return out


def test_label_extensions_match_search():
    checked = 0
    for h in corpus_hdas(5, 10) + [example("X1_node")]:
        for x in sorted(h.cells)[:6]:
            base = empty_path(h, x)
            groups = {}
            for p in sparse_paths_from(h, x, 4):
                groups.setdefault(canonical_form(ev(p))[0], set()).add(p)
            for label, paths in groups.items():
                longest = max(len(p) for p in paths)
                if longest >= 4:
                    continue
                found = set(label_extensions(base, label))
                assert found == paths, (x, label)
                checked += 1
    assert checked > 100


def test_label_extensions_interface_mismatch():
    h = example("X2")
    with pytest.raises(InterfaceMismatch):
        label_extensions(empty_path(h, h.initial), parse_ipomset("[c]"))


# --- node-initial lower faces -------------------------------------------------------

def test_lower_face_path_end():
    rng = random.Random(13)
    checked = 0
    for h in corpus_hdas():
        if h.dim(h.initial):
            continue
        for _ in range(10):
            alpha = random_path(h, rng, 5)
            n = h.dim(alpha.end)
            for a in subsets(n):
                beta = lower_face_path(alpha, a)
                assert beta.start == alpha.start
                assert beta.end == h.face(alpha.end, a, 0)
                checked += 1
    assert checked > 20


def test_lower_face_path_needs_vertex_start():
    h = example("X1")
    with pytest.raises(NotNodeInitial):
        lower_face_path(empty_path(h, h.initial), (0,))
