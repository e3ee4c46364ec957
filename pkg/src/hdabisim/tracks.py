"""Track objects: the HDA of all executions of an interval ipomset.

A cell of the track object of P is a state function P -> {'0', 'exec', '1'}
whose executing events form a precedence antichain and which respects the
allowed pairs along precedence. Its events are the executing ones.
"""

from .errors import EndpointMismatch
from .hda import hda_from_states, map_violation, state_id
from .ipomset import (EXEC, ONE, PREC_IPOM, ZERO, IpMorphism, canonical_form, discrete,
                      final_inclusion_ip, glue_with_map, initial_inclusion_ip)


class TrackObject:
    """The track object of ``ipomset`` together with the state of every cell."""

    def __init__(self, ipomset):
        p = ipomset
        self.ipomset = p
        ren = canonical_form(p)[1]
        rank = {e: tuple(map(int, ren[e].split("."))) for e in p.events}
        self.events = tuple(sorted(p.events, key=rank.__getitem__))
        states = enumerate_states(p, self.events)
        self.initial_state = tuple(EXEC if e in p.sources else ZERO for e in self.events)
        self.final_state = tuple(EXEC if e in p.targets else ONE for e in self.events)
        order_key = lambda e: sum((x, e) in p.order for x in p.events)
        self.hda = hda_from_states(self.events, p.label, states, self.initial_state,
                                   [self.final_state], order_key)
        self.state_of = {state_id(self.events, s): dict(zip(self.events, s)) for s in states}

    def __repr__(self):
        return f"TrackObject({self.ipomset!r}, {len(self.hda.cells)} cells)"

    @property
    def initial(self):
        return self.hda.initial

    @property
    def final(self):
        return self.hda.final[0]

    def cell_of(self, state):
        """Cell id of a state function given as a dict."""
        return state_id(self.events, [state[e] for e in self.events])

    def witness(self, cell):
        """The morphism from the cell's conclist into the ipomset that the cell stands for."""
        st = self.state_of[cell]
        p = self.ipomset
        running = [e for e in p.in_order([e for e in self.events if st[e] == EXEC])]
        u = discrete([(p.label[e], False, False) for e in running])
        return IpMorphism(u, p, dict(zip(u.events, running)), st)


def state_ok(p, st):
    for a, b in p.prec:
        if (st[a], st[b]) not in PREC_IPOM or (st[a] == EXEC and st[b] == EXEC):
            return False
    return True


def enumerate_states(p, events):
    """All valid state functions, as tuples aligned with ``events``, in lexicographic order."""
    out = []
    assigned = {}
    values = (ZERO, EXEC, ONE)

    def go(i):
        if i == len(events):
            out.append(tuple(assigned[e] for e in events))
            return
        e = events[i]
        for v in values:
            assigned[e] = v
            good = True
            for x in events[:i]:
                pair = None
                if p.less(x, e):
                    pair = (assigned[x], v)
                elif p.less(e, x):
                    pair = (v, assigned[x])
                if pair and (pair not in PREC_IPOM or pair == (EXEC, EXEC)):
                    good = False
                    break
            if good:
                go(i + 1)
        del assigned[e]

    go(0)
    return out


_cache = {}


def track_object(p):
    key = p
    if key not in _cache:
        if len(_cache) > 4096:
            _cache.clear()
        _cache[key] = TrackObject(p)
    return _cache[key]


def tr_morphism(m):
    """Post-composition map between track objects induced by an ipomset morphism.

    Returns (source track object, target track object, assignment).
    """
    src, tgt = track_object(m.source), track_object(m.target)
    assignment = {}
    for cell, st in src.state_of.items():
        eta = {u: m.eps[u] for u in m.target.events}
        for x, y in m.f.items():
            eta[y] = st[x]
        assignment[cell] = tgt.cell_of(eta)
    return src, tgt, assignment


def initial_inclusion(p, r):
    """Map from the track object of p into that of p*r extending states by 0."""
    return tr_morphism(initial_inclusion_ip(p, r))


def final_inclusion(p, r):
    """Map from the track object of r into that of p*r extending states by 1."""
    return tr_morphism(final_inclusion_ip(p, r))


def glue_track_objects(p, r):
    """Track object of p*r with its two inclusion maps (as assignments)."""
    _, whole, ini = initial_inclusion(p, r)
    _, _, fin = final_inclusion(p, r)
    return whole, ini, fin


class Track:
    """A precubical map from the track object ``obj`` into the HDA ``hda``."""

    def __init__(self, obj, hda, assignment):
        self.obj = obj
        self.hda = hda
        self.assignment = dict(assignment)

    def __call__(self, cell):
        return self.assignment[cell]

    def __eq__(self, other):
        return (isinstance(other, Track) and self.obj.ipomset == other.obj.ipomset
                and self.hda is other.hda and self.assignment == other.assignment)

    def __hash__(self):
        return hash((self.obj.ipomset, frozenset(self.assignment.items())))

    def __repr__(self):
        return f"Track({self.obj.ipomset!r}, start={self.start!r}, end={self.end!r})"

    @property
    def start(self):
        return self.assignment[self.obj.initial]

    @property
    def end(self):
        return self.assignment[self.obj.final]

    def violation(self, check_initial=False):
        return map_violation(self.obj.hda, self.hda, self.assignment, check_initial)


def glue_tracks(t1, t2):
    """The track on the glued ipomset restricting to t1 and t2 along the inclusions."""
    if t1.end != t2.start:
        raise EndpointMismatch(f"first track ends at {t1.end!r}, second starts at {t2.start!r}")
    p, q = t1.obj.ipomset, t2.obj.ipomset
    g, qmap = glue_with_map(p, q)
    whole = track_object(g)
    back = {v: k for k, v in qmap.items()}
    fresh = [e for e in g.events if e not in p.label]
    early = [e for e in p.events if e not in p.targets]
    assignment = {}
    for cell, st in whole.state_of.items():
        if all(st[e] == ZERO for e in fresh):
            assignment[cell] = t1(t1.obj.cell_of({e: st[e] for e in p.events}))
        else:
            assert all(st[e] == ONE for e in early)
            assignment[cell] = t2(t2.obj.cell_of({back[e]: st[e] for e in back}))
    return Track(whole, t1.hda, assignment)
