"""Paths in an HDA, their ipomset labels, normal forms, and the path/track dictionary.

A step is ``("up", A)`` meaning ``x_{k-1} = δ⁰_A(x_k)`` with A indexing the
events of ``x_k``, or ``("down", B)`` meaning ``δ¹_B(x_{k-1}) = x_k`` with B
indexing the events of ``x_{k-1}``.
"""

from .errors import BadStep, EndpointMismatch, InterfaceMismatch, NotNodeInitial
from .hda import lift, reindex, subsets
from .ipomset import (EXEC, ONE, ZERO, canonical_form, discrete, glue_with_map,
                      identity_ipomset, minimal_discrete_decomposition)
from .tracks import Track, track_object

UP, DOWN = "up", "down"


class Path:
    __slots__ = ("hda", "cells", "steps", "_ev")

    def __init__(self, hda, cells, steps=()):
        self.hda = hda
        self.cells = tuple(cells)
        self.steps = tuple((d, tuple(sorted(a))) for d, a in steps)
        self._ev = None
        if len(self.cells) != len(self.steps) + 1:
            raise BadStep(len(self.steps), "a path needs one more cell than steps")

    def __len__(self):
        return len(self.steps)

    def __eq__(self, other):
        return (isinstance(other, Path) and self.hda is other.hda
                and self.cells == other.cells and self.steps == other.steps)

    def __hash__(self):
        return hash((self.cells, self.steps))

    def __repr__(self):
        parts = [repr(self.cells[0])]
        for (d, a), c in zip(self.steps, self.cells[1:]):
            arrow = "↗" if d == UP else "↘"
            parts.append(f"{arrow}{list(a)} {c!r}")
        return "Path(" + " ".join(parts) + ")"

    @property
    def start(self):
        return self.cells[0]

    @property
    def end(self):
        return self.cells[-1]

    def prefix(self, j):
        return Path(self.hda, self.cells[:j + 1], self.steps[:j])

    def to_spec(self):
        out = []
        for (d, a), c in zip(self.steps, self.cells[1:]):
            if d == UP:
                out.append({"up": {"cell": c, "A": list(a)}})
            else:
                out.append({"down": {"B": list(a)}})
        return out

    def mapped(self, hda, assignment):
        """Image of the path under a precubical map."""
        return Path(hda, [assignment[c] for c in self.cells], self.steps)


def step_problem(h, x, direction, a, y):
    if not a:
        return "identity steps are not allowed"
    if direction == UP:
        if max(a) >= h.dim(y):
            return f"index set {list(a)} out of range for {y!r}"
        if h.face(y, a, 0) != x:
            return f"lower face {list(a)} of {y!r} is {h.face(y, a, 0)!r}, not {x!r}"
    elif direction == DOWN:
        if max(a) >= h.dim(x):
            return f"index set {list(a)} out of range for {x!r}"
        if h.face(x, a, 1) != y:
            return f"upper face {list(a)} of {x!r} is {h.face(x, a, 1)!r}, not {y!r}"
    else:
        return f"unknown direction {direction!r}"
    return None


def check_path(p):
    for k, ((d, a), x, y) in enumerate(zip(p.steps, p.cells, p.cells[1:])):
        if x not in p.hda.cells or y not in p.hda.cells:
            raise BadStep(k, "unknown cell")
        msg = step_problem(p.hda, x, d, a, y)
        if msg:
            raise BadStep(k, msg)
    return p


def build_path(h, spec, start=None):
    """Path from a list of ``{"up": {"cell", "A"}}`` / ``{"down": {"B"}}`` entries."""
    x = h.initial if start is None else start
    if x not in h.cells:
        raise BadStep(0, f"unknown start cell {x!r}")
    cells, steps = [x], []
    for k, entry in enumerate(spec):
        if "up" in entry:
            y = entry["up"]["cell"]
            a = tuple(sorted(entry["up"].get("A", [])))
            if y not in h.cells:
                raise BadStep(k, f"unknown cell {y!r}")
            d = UP
        elif "down" in entry:
            a = tuple(sorted(entry["down"].get("B", [])))
            if not a or max(a) >= h.dim(x) or min(a) < 0:
                raise BadStep(k, f"index set {list(a)} out of range for {x!r}")
            y = h.face(x, a, 1)
            d = DOWN
        else:
            raise BadStep(k, "each step needs an 'up' or 'down' entry")
        msg = step_problem(h, x, d, a, y)
        if msg:
            raise BadStep(k, msg)
        cells.append(y)
        steps.append((d, a))
        x = y
    return Path(h, cells, steps)


def empty_path(h, x):
    return Path(h, [x])


def concat(alpha, beta):
    if alpha.end != beta.start:
        raise EndpointMismatch(f"{alpha.end!r} is not {beta.start!r}")
    return Path(alpha.hda, alpha.cells + beta.cells[1:], alpha.steps + beta.steps)


# --- labels ----------------------------------------------------------------

def step_ipomset(h, x, direction, a, y):
    """Label of a single step."""
    if direction == UP:
        sig = h.ev(y)
        return discrete([(l, i not in a, True) for i, l in enumerate(sig)])
    sig = h.ev(x)
    return discrete([(l, True, i not in a) for i, l in enumerate(sig)])


def labelled(alpha):
    """(ev(alpha), events active in each cell listed in cell event order)."""
    if alpha._ev is not None:
        return alpha._ev
    h = alpha.hda
    p = identity_ipomset(h.ev(alpha.start))
    active = [tuple(p.events)]
    for (d, a), x, y in zip(alpha.steps, alpha.cells, alpha.cells[1:]):
        q = step_ipomset(h, x, d, a, y)
        p, qmap = glue_with_map(p, q)
        ids = [qmap[e] for e in q.events]
        if d == UP:
            active.append(tuple(ids))
        else:
            active.append(tuple(e for i, e in enumerate(ids) if i not in a))
    alpha._ev = (p, active)
    return alpha._ev


def ev(alpha):
    return labelled(alpha)[0]


# --- congruence ------------------------------------------------------------

def sparse(alpha):
    """The unique alternating path congruent to alpha."""
    h = alpha.hda
    cells, steps = [alpha.start], []
    for (d, a), y in zip(alpha.steps, alpha.cells[1:]):
        if steps and steps[-1][0] == d:
            prev = steps[-1][1]
            if d == UP:
                merged = tuple(sorted(lift(prev, a, h.dim(y)) + a))
            else:
                merged = tuple(sorted(prev + lift(a, prev, h.dim(cells[-2]))))
            steps[-1] = (d, merged)
            cells[-1] = y
        else:
            steps.append((d, a))
            cells.append(y)
    return Path(h, cells, steps)


def is_sparse(alpha):
    return all(s[0] != t[0] for s, t in zip(alpha.steps, alpha.steps[1:]))


def congruent(alpha, beta):
    return sparse(alpha) == sparse(beta)


# --- restrictions ----------------------------------------------------------

def weakenings(alpha, j):
    """Restrictions that keep the first j-1 steps and weaken step j (1-based)."""
    h = alpha.hda
    d, b = alpha.steps[j - 1]
    base = alpha.prefix(j - 1)
    out = []
    for idx in subsets(len(b), nonempty=False):
        a = tuple(b[i] for i in idx)
        if not a:
            out.append(base)
        elif d == DOWN:
            y = h.face(alpha.cells[j - 1], a, 1)
            out.append(Path(h, base.cells + (y,), base.steps + ((DOWN, a),)))
        else:
            rest = tuple(i for i in b if i not in a)
            y = h.face(alpha.cells[j], rest, 0)
            out.append(Path(h, base.cells + (y,), base.steps + ((UP, reindex(a, rest)),)))
    return out


def restrictions(alpha):
    """All restrictions of alpha (prefixes with a weakened last step), without duplicates."""
    seen, out = set(), []
    candidates = [alpha.prefix(0)]
    for j in range(1, len(alpha) + 1):
        candidates.extend(weakenings(alpha, j))
    for beta in candidates:
        if beta not in seen:
            seen.add(beta)
            out.append(beta)
    return out


def is_restriction(beta, alpha):
    return beta in set(restrictions(alpha))


# --- characteristic paths and the path/track dictionary --------------------

def characteristic_path(p):
    """The sparse path through the track object of p whose label is p."""
    obj = track_object(p)
    h = obj.hda
    factors = minimal_discrete_decomposition(p)
    position = {}
    for i, fac in enumerate(factors):
        for e in fac.events:
            position.setdefault(e, i)
    cells, steps = [obj.initial], []
    for i, fac in enumerate(factors):
        u = set(fac.events)
        st = {}
        for e in p.events:
            if e in u:
                st[e] = EXEC
            elif position[e] < i:
                st[e] = ONE
            else:
                st[e] = ZERO
        y = obj.cell_of(st)
        order = list(fac.events)
        a = tuple(i2 for i2, e in enumerate(order) if e not in fac.sources)
        b = tuple(i2 for i2, e in enumerate(order) if e not in fac.targets)
        if a:
            steps.append((UP, a))
            cells.append(y)
        if b:
            steps.append((DOWN, b))
            cells.append(h.face(y, b, 1))
    return Path(h, cells, steps)


def track_from_path(alpha):
    """The unique track on ev(alpha) that carries the characteristic path onto alpha."""
    h = alpha.hda
    p, active = labelled(alpha)
    # canonical event names make congruent paths yield equal tracks
    ren = canonical_form(p)[1]
    p = p.rename(ren)
    active = [tuple(ren[e] for e in ids) for ids in active]
    obj = track_object(p)
    born, died = {}, {}
    for k, ids in enumerate(active):
        for e in ids:
            born.setdefault(e, k)
            died[e] = k

    def state_at(k):
        return {e: (ZERO if k < born[e] else EXEC if k <= died[e] else ONE) for e in p.events}

    states = [state_at(k) for k in range(len(alpha.cells))]
    assignment = {}
    for cell, st in obj.state_of.items():
        for k, sk in enumerate(states):
            if all(sk[e] == EXEC or sk[e] == st[e] for e in p.events) and all(
                    sk[e] == EXEC for e in p.events if st[e] == EXEC):
                ids = active[k]
                a = tuple(i for i, e in enumerate(ids) if st[e] == ZERO)
                b = tuple(i for i, e in enumerate(ids) if st[e] == ONE)
                assignment[cell] = h.face_ab(alpha.cells[k], a, b)
                break
        else:
            raise AssertionError(f"cell {cell!r} of the track object is not covered by the path")
    return Track(obj, h, assignment)


def path_from_track(t):
    """Image of the characteristic path under the track."""
    return characteristic_path(t.obj.ipomset).mapped(t.hda, t.assignment)


# --- node-initial lower faces ----------------------------------------------

def lower_face_path(alpha, a):
    """Path ending at δ⁰_A(end alpha) obtained by never starting the events A.

    Only defined when the path starts at a vertex.
    """
    h = alpha.hda
    if h.dim(alpha.start):
        raise NotNodeInitial("the construction needs a path starting at a vertex")
    a = tuple(sorted(a))
    if not a:
        return alpha
    _, active = labelled(alpha)
    dropped = {active[-1][i] for i in a}
    cells = []
    for x, ids in zip(alpha.cells, active):
        pos = tuple(i for i, e in enumerate(ids) if e in dropped)
        cells.append(h.face(x, pos, 0))
    out_cells, out_steps = [cells[0]], []
    for k, (d, b) in enumerate(alpha.steps):
        if d == UP:
            removed = tuple(i for i, e in enumerate(active[k + 1]) if e in dropped)
        else:
            removed = tuple(i for i, e in enumerate(active[k]) if e in dropped)
        nb = reindex(tuple(i for i in b if i not in removed), removed)
        if nb:
            out_steps.append((d, nb))
            out_cells.append(cells[k + 1])
    return check_path(Path(h, out_cells, out_steps))


# --- searching by label ----------------------------------------------------

def factor_shapes(r):
    """For each decomposition factor: (labels, up indices, down indices)."""
    out = []
    for fac in minimal_discrete_decomposition(r):
        order = list(fac.events)
        out.append((tuple(fac.label[e] for e in order),
                    tuple(i for i, e in enumerate(order) if e not in fac.sources),
                    tuple(i for i, e in enumerate(order) if e not in fac.targets)))
    return out


def label_extensions(alpha, r):
    """All sparse paths from end(alpha) labelled by r."""
    h = alpha.hda
    x0 = alpha.end
    if r.source_conclist() != h.ev(x0):
        raise InterfaceMismatch(
            f"source interface {list(r.source_conclist())} differs from the events "
            f"{list(h.ev(x0))} of the current cell")
    shapes = factor_shapes(r)
    results = []

    def go(i, cells, steps):
        if i == len(shapes):
            results.append(Path(h, cells, steps))
            return
        labels, up, down = shapes[i]
        x = cells[-1]
        if up:
            tops = [y for aa, y in h.up_steps(x) if aa == up and h.ev(y) == labels]
        elif h.ev(x) == labels:
            tops = [x]
        else:
            tops = []
        for y in tops:
            c, s = list(cells), list(steps)
            if up:
                c.append(y)
                s.append((UP, up))
            if down:
                c.append(h.face(y, down, 1))
                s.append((DOWN, down))
            go(i + 1, c, s)

    go(0, [x0], [])
    return results
